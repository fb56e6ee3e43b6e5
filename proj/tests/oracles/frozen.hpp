#pragma once

// Reference values computed once by oracle_math.hpp (50-digit arithmetic or
// closed forms) and frozen here. test_oracles.cpp recomputes every entry.

namespace frozen {

inline constexpr double kPhi1At0 = 0.63161877774606467;       // (2 pi)^{-1/4}
inline constexpr double kPhi2At1 = 0.49190519871123883;       // e^{-1/4} (2 pi)^{-1/4}
inline constexpr double kPhi4At07 = -0.40082065664207955;
inline constexpr double kPhi5AtMinus13 = -0.36199228768037789;
inline constexpr double kPhi20At35 = -0.17261801183447570;
inline constexpr double kPhi30At8 = 0.29113195076037063;
inline constexpr double kPhi64At10 = 0.21827353490175877;
inline constexpr double kDPhi1At2 = -0.23235956299059235;     // central difference, h = 1e-6
inline constexpr double kU2At1 = 0.98381039742247767;         // 2 phi_1(1)
inline constexpr double kPhi1At0Squared = 0.39894228040143270;
inline constexpr double kPhi121At010 = 0.19624178171518150;   // phi_1(0)^2 phi_2(1)
inline constexpr double kGaussianVar9At0 = 0.13298076013381088;
inline constexpr double kNormalCdf1959964 = 0.97500000090355754;
inline constexpr double kFunnelLogDensityAt0 = -1.9290378448063228;
inline constexpr double kKlN01N02 = 0.096573590279972643;
inline constexpr double kN3EighthAt3 = 1.1283791670955126;
inline constexpr double kLegendre3At03 = -0.57711567298072919;  // sqrt(5/2) P_2(0.3)
inline constexpr double kCrossNarrowVariance = 0.18133520731367453;  // 0.15^0.9
/// Asymptotic 1% critical value of the one-sample KS statistic at n = 1e5.
inline constexpr double kKsCritical1e5 = 0.0051469977858689450;

}  // namespace frozen
