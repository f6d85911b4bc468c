// SPDX-License-Identifier: Apache-2.0
// Numbers produced by tests/oracle/reference_values.py, an independent numpy
// implementation of the model. Regenerate with that script; do not edit by hand.
#pragma once

#include <array>

namespace airs::reference {

// Reference scenario at the initial point (straight line, half power on the
// common stream, rho = 0.5, closed-form phases).
inline constexpr double kTable1InitialPrivateSum = 284.091016898385;
inline constexpr double kTable1InitialCommonMinSum = 77.7358187374728;
inline constexpr std::array<double, 4> kTable1InitialEnergy = {
    2.00233574358906, 2.24870528514097, 0.0119890063971828, 0.0176707703054411};

// Element 1 of the array response, lambda = 0.1, d_M = 0.05, cos phi = 1.
inline constexpr double kSteeringPhase = -3.14159265358979;
// Element 1 of the co-phasing profile when the two cosines differ by 0.5.
inline constexpr double kOptimalPhaseSecond = 1.5707963267949;
// |h_eff| with h0 = 1, h1 = 100, d = 100, d_ra = d_av = 50, M = 16.
inline constexpr double kAlignedExample = 0.65;

// Lattice optimum of the toy instance (5 m, 0.05 P_max, 0.01 rho).
inline constexpr double kToyGridOptimum = 70.355008332589;
inline constexpr double kToyGridRho = 0.67;

}  // namespace airs::reference
