#include "flipkit/tolerances.hpp"

#include <cstdlib>
#include <string>

namespace flipkit {

Tolerances Tolerances::scaled(double f) const {
    Tolerances t = *this;
    for (double* p : {&t.norm, &t.zero_coord, &t.plane, &t.merge, &t.hemisphere, &t.align, &t.law,
                      &t.degenerate, &t.convexity, &t.solve, &t.area})
        *p *= f;
    return t;
}

const Tolerances& tol() {
    static const Tolerances instance = [] {
        Tolerances t;
        if (const char* env = std::getenv("FLIPKIT_TOL")) {
            try {
                double f = std::stod(env);
                if (f > 0) return t.scaled(f);
            } catch (...) {
                // unparsable value: keep defaults
            }
        }
        return t;
    }();
    return instance;
}

}  // namespace flipkit
