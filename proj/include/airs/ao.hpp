// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "airs/config.hpp"
#include "airs/convex.hpp"
#include "airs/rsma_swipt.hpp"
#include "airs/subproblems.hpp"

namespace airs {

// Which blocks the alternating loop optimizes.
//   Proposed: all blocks.
//   FixedTrajectory: straight-line trajectory.
//   RandomPhase: seeded uniform phases, held fixed.
//   FixedPower: uniform power split; the common shares are still allocated.
//   FixedRho: rho held at 0.5.
//   NoAirs: M = 0, so the trajectory has no effect.
enum class Scheme { Proposed, FixedTrajectory, RandomPhase, FixedPower, FixedRho, NoAirs };

std::string to_string(Scheme s);
// Throws Error(InvalidArgument) for unknown names.
Scheme scheme_from_string(std::string_view name);
const std::vector<Scheme>& all_schemes();

struct AOOptions {
  int max_outer_iters = 100;
  double conv_tol = 1e-3;
  std::uint64_t seed = 0;
  double mono_tol = 1e-6;
  double tol_feas = 1e-6;
  Scheme scheme = Scheme::Proposed;
  InterferenceBound bound = InterferenceBound::Concave;
  SolveOptions solver;
  bool record_timing = true;
};

struct AORecord {
  int iter = 0;
  double sum_rate = 0.0;
  double trajectory_surrogate = 0.0;  // subproblem optimum, 0 if skipped
  double power_surrogate = 0.0;
  double ps_surrogate = 0.0;
  double rho = 0.0;
  double max_violation = 0.0;
  double wall_ms = 0.0;  // since the start of the run
  bool trajectory_accepted = false;
};

struct AOResult {
  NetworkConfig cfg;  // configuration actually optimized (M = 0 for NoAirs)
  NetworkState initial;
  NetworkState state;
  std::vector<AORecord> trace;  // trace[0] is the initial point
  bool converged = false;
  int iterations = 0;
};

// Straight-line trajectory, half of P_max on the common stream and the rest
// split evenly over the private streams of every active cell, C = 0,
// rho = 0.5, phases from the per-slot closed form.
NetworkState initialize(const NetworkConfig& cfg, std::uint64_t seed = 0);

// Uniform phases in [0, 2 pi) drawn from a generator seeded with seed.
std::vector<double> random_phases(const NetworkConfig& cfg, std::uint64_t seed);

// Closed-form phase profile of every slot for trajectory q.
std::vector<double> closed_form_phases(const NetworkConfig& cfg, const std::vector<Vec3>& q);

// Sum of exact private rates plus, per active cell, the smallest exact common
// rate. This is the sum rate after an optimal share allocation.
double rate_potential(const NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains);

// Sets every cell's shares to an equal split of its smallest common rate.
void allocate_common_shares(NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains);

// Mean over slots with at least one serving RSU of the distance from the
// AIRS to the nearest serving RSU.
double hover_distance(const std::vector<Vec3>& q, const NetworkConfig& cfg);

// One split-ratio update of s, accepted only when the result is feasible and
// the exact sum rate does not drop. Returns the subproblem optimum.
double rho_step(NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains,
                const AOOptions& opt);

// Repeats rho_step with every other block frozen until rho moves by at most
// rho_tol. Returns the number of updates performed.
int refine_rho(NetworkState& s, const NetworkConfig& cfg, const AOOptions& opt,
               int max_steps = 1000, double rho_tol = 1e-9);

// Runs the alternating loop. Throws Error(Infeasible) when the energy
// requirement cannot be met even at full power with rho = 0, and
// Error(Numerical) when the exact objective drops by more than mono_tol.
AOResult run(const NetworkConfig& cfg, const AOOptions& opt = {});

}  // namespace airs
