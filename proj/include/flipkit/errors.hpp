#pragma once

#include <stdexcept>
#include <string>

namespace flipkit {

enum class ErrorKind { Parse, Geometry, Convergence };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }
    // Process exit status used by the command line tool.
    int exit_code() const {
        switch (kind_) {
            case ErrorKind::Parse: return 2;
            case ErrorKind::Geometry: return 3;
            case ErrorKind::Convergence: return 4;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};

// Input violates a geometric precondition (not on the quadric, light-like
// pole, non-convex configuration, ...).
class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& what) : Error(ErrorKind::Geometry, what) {}
};

class DegenerateTriangle : public GeometryError {
public:
    explicit DegenerateTriangle(const std::string& what) : GeometryError("degenerate triangle: " + what) {}
};

class UnsupportedError : public GeometryError {
public:
    explicit UnsupportedError(const std::string& what) : GeometryError("unsupported: " + what) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(ErrorKind::Convergence, what) {}
};

}  // namespace flipkit
