// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "airs/config.hpp"
#include "airs/rsma_swipt.hpp"

// Brute-force references for the optimizer. Nothing here calls into the core
// numerics: geometry, channels, rates and feasibility are recomputed from the
// configuration with plain scalar loops.
namespace airs::oracle {

// Slot-by-slot re-evaluation of every rate, harvested energy and the sum rate.
RateReport recompute_report(const NetworkState& s, const NetworkConfig& cfg);

// True when s meets the energy threshold of every vehicle and every common
// share cap within tol. These are the only constraints that depend on rho.
bool rho_constraints_hold(const NetworkState& s, const NetworkConfig& cfg, double tol = 1e-6);

struct RhoScan {
  bool found = false;  // false when no candidate was feasible
  double rho = 0.0;
  double objective = 0.0;
  int evaluated = 0;
  int feasible = 0;
};

// Exact sum rate over rho in {0, step, 2 step, ...} plus rho = 1, everything
// else held at s. Ties go to the smaller rho. Throws Error(InvalidArgument)
// unless 0 < step <= 0.1 (a step of exactly 0.5 is also accepted).
RhoScan scan_rho(const NetworkState& s, const NetworkConfig& cfg, double step, double tol = 1e-6);

struct GridOptions {
  double position_step = 5.0;  // m, lattice anchored at q0
  double power_step = 0.05;    // fraction of P_max
  double rho_step = 0.01;
  double budget = 2e7;         // maximum number of exact evaluations
};

struct GridResult {
  bool found = false;
  NetworkState state;
  double objective = 0.0;
  double evaluations = 0.0;
  std::int64_t paths = 0;  // admissible trajectories on the lattice
};

// Number of exact evaluations grid_search_small would perform.
double grid_cost(const NetworkConfig& cfg, const GridOptions& opt = {});

// Exhaustive search over lattice trajectories, lattice power splits and a
// rho grid, with per-slot closed-form phases and shares equal to the common
// rate. Requires I <= 1, K <= 1 and 2 <= N <= 4; throws Error(InvalidArgument)
// otherwise or when grid_cost exceeds the budget.
GridResult grid_search_small(const NetworkConfig& cfg, const GridOptions& opt = {});

// One RSU, one vehicle on lane 1 entering at t = 0, four slots. The energy
// threshold is tuned by hand so that it binds on the lattice optimum.
NetworkConfig toy_config();

}  // namespace airs::oracle
