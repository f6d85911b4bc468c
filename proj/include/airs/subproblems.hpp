// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "airs/config.hpp"
#include "airs/convex.hpp"
#include "airs/rsma_swipt.hpp"

namespace airs {

// Builders for the three block subproblems of the alternating scheme. Each
// returns a ConvexSubproblem in internally scaled units together with the
// index maps needed to read a solution back into a NetworkState.

// How the interference log of the trajectory-block rates is bounded.
//  Concave: kept exact, -log2 X(w, o), which is concave in the slacks.
//  Tangent: linearized at the expansion point like the signal log.
enum class InterferenceBound { Concave, Tangent };

struct TrajectoryOptions {
  InterferenceBound bound = InterferenceBound::Concave;
  double length_scale = 1000.0;  // meters per internal unit
};

struct TrajectoryProblem {
  ConvexSubproblem problem;
  double length_scale = 1000.0;
  double altitude = 0.0;
  std::vector<int> x_index;  // per slot, -1 for the fixed endpoints
  std::vector<int> y_index;
  std::vector<int> u_index;  // per (n, i, k) like NetworkState::C, -1 if absent
  std::vector<int> w_index;
  std::vector<int> v_index;  // per (n, i), -1 if absent
  std::vector<int> o_index;
  std::vector<int> eta_index;
  // Objective value at the expansion point with tight slacks. Equals the
  // aligned-gain objective sum of private rates plus per-cell minimum common
  // rates over the free slots.
  double value_at_expansion = 0.0;
};

// Expansion point is the state's trajectory; p, C, rho are held fixed. The
// rates use the aligned effective gain of every served pair.
TrajectoryProblem build_trajectory_problem(const NetworkState& s, const NetworkConfig& cfg,
                                           const TrajectoryOptions& opt = {});

std::vector<Vec3> extract_trajectory(const TrajectoryProblem& tp, std::span<const double> x,
                                     const NetworkConfig& cfg);

struct PowerProblem {
  ConvexSubproblem problem;
  double power_scale = 1.0;  // watts per internal unit (P_max)
  std::vector<int> p_index;  // like NetworkState::p, -1 if not a variable
  std::vector<int> c_index;  // like NetworkState::C
};

// Expansion point is the state's p; q, theta, rho fixed. The start point is
// (p, C) of the state. gains are |h_eff|^2 laid out like NetworkState::C.
PowerProblem build_power_rate_problem(const NetworkState& s, const NetworkConfig& cfg,
                                      std::span<const double> gains);

void extract_power(const PowerProblem& pp, std::span<const double> x, NetworkState& s);

struct PsProblem {
  ConvexSubproblem problem;  // rho at index 0, then one share total per active cell
  std::vector<int> total_index;  // N*I, -1 for idle cells
};

// Expansion point is the state's rho; q, theta and p fixed. The common-rate
// minimum of each active cell enters through an epigraph variable bounding
// the cell's share total, so the shares are re-optimized along with rho.
PsProblem build_ps_problem(const NetworkState& s, const NetworkConfig& cfg,
                           std::span<const double> gains);

// Writes rho and splits each cell's share total in proportion to the
// incoming shares (evenly when they are all zero).
void extract_ps(const PsProblem& ps, std::span<const double> x, const NetworkConfig& cfg,
                NetworkState& s);

// Energy each vehicle collects over the horizon at full power and rho = 0.
std::vector<double> full_power_energy(const NetworkConfig& cfg, std::span<const double> gains);

}  // namespace airs
