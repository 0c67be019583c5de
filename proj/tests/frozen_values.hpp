// Generated by tests/oracle_gen/freeze_values.py (mpmath, 50 digits). Do not edit.
#pragma once

namespace frozen {

inline constexpr double SPH_B = 1.0466097489804516106;
inline constexpr double SPH_ALPHA = 0.79950865753458304716;
inline constexpr double SPH_GAMMA = 1.443533085608235925;
inline constexpr double SPH_DB_DA = 0.12691999478582834631;
inline constexpr double SPH_DALPHA_DA = 1.1457514548832107551;
inline constexpr double SPH_DALPHA_DC = -0.41453018321615776303;
inline constexpr double ADS_B = 1.272146964042977325;
inline constexpr double ADS_ALPHA = -0.94624455046085018129;
inline constexpr double ADS_GAMMA = 0.022412259484654217027;
inline constexpr double ADS_DALPHA_DA = 0.6083741291628204193;
inline constexpr double ADS_DALPHA_DC = -1.7347192045089269961;
inline constexpr double ADS_ISO_DALPHA = -0.67280693220146906338;
inline constexpr double HS2_A = 0.99442238664540079399;
inline constexpr double HS2_DA_DB = -0.41906814943130006609;
inline constexpr double DS_B = 1.8475604147563377893;
inline constexpr double DS_ALPHA = -0.19180855863478666136;
inline constexpr double DS_GAMMA = -0.63987577886627605082;
inline constexpr double OCT_K_0_3 = -0.25443612812722988739;
inline constexpr double OCT_K_0_8 = -2.1914334750824799431;
inline constexpr double OCT_K_1_3 = -8.4599595791718924491;

}  // namespace frozen
