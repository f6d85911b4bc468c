// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "airs/config.hpp"
#include "airs/scenario.hpp"

namespace airs {

using cplx = std::complex<double>;

// sqrt(h0) / d. Throws on non-positive distance.
double direct_channel(double d_direct, const NetworkConfig& cfg);

// ULA response sqrt(h1)/d * exp(-j (2 pi / lambda) m d_M cos_phi), m = 0..M-1.
std::vector<cplx> steering_vector(double d, double cos_phi, const NetworkConfig& cfg);

struct SteeringPair {
  std::vector<cplx> h_ra;  // RSU -> AIRS
  std::vector<cplx> g_av;  // AIRS -> vehicle
};

SteeringPair steering_channels(const SlotGeometry& geom, int i, int k, const NetworkConfig& cfg);

// h_direct + g^H diag(exp(j theta)) h. The direct path carries zero phase.
cplx effective_channel(const SlotGeometry& geom, int i, int k, std::span<const double> theta,
                       const NetworkConfig& cfg);

double normalize_phase(double theta);

// Per-element phases that co-phase the reflected path of (i, k) with its
// direct path, normalized to [0, 2 pi).
std::vector<double> optimal_phase(const SlotGeometry& geom, int i, int k, const NetworkConfig& cfg);

// |h_eff| under optimal_phase: sqrt(h0)/d_ik + h1 M / (d_ra d_av).
double aligned_gain(double d_direct, double d_ra, double d_av, const NetworkConfig& cfg);
double aligned_effective_gain(const SlotGeometry& geom, int i, int k, const NetworkConfig& cfg);

struct ServingPair {
  int rsu = -1;
  int vehicle = -1;
};

// The pair the single per-slot phase profile is steered to: among RSUs with a
// nonempty served set the one closest to the AIRS, and within it the served
// vehicle with the longest direct path. nullopt when nobody is served.
std::optional<ServingPair> alignment_target(const SlotGeometry& geom);

// Phase profile of one slot (M values). All zeros when nobody is served.
std::vector<double> slot_phase_profile(const SlotGeometry& geom, const NetworkConfig& cfg);

}  // namespace airs
