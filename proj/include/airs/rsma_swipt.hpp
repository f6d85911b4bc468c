// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "airs/config.hpp"
#include "airs/scenario.hpp"

namespace airs {

// All decision variables of one iterate. Powers are stored per (slot, RSU)
// cell as [common, private of vehicle 0, ..., private of vehicle K-1]; entries
// of vehicles a cell does not serve are kept at zero.
struct NetworkState {
  int N = 0;
  int I = 0;
  int K = 0;
  int M = 0;
  std::vector<Vec3> q;        // N
  std::vector<double> p;      // N*I*(K+1), watts
  std::vector<double> C;      // N*I*K, bit/s/Hz
  std::vector<double> theta;  // N*M, radians
  double rho = 0.5;

  static NetworkState zeros(const NetworkConfig& cfg) {
    NetworkState s;
    s.N = cfg.N;
    s.I = cfg.I;
    s.K = cfg.K;
    s.M = cfg.M;
    s.q.assign(cfg.N, Vec3{});
    s.p.assign(static_cast<std::size_t>(cfg.N) * cfg.I * (cfg.K + 1), 0.0);
    s.C.assign(static_cast<std::size_t>(cfg.N) * cfg.I * cfg.K, 0.0);
    s.theta.assign(static_cast<std::size_t>(cfg.N) * cfg.M, 0.0);
    return s;
  }

  std::size_t power_index(int n, int i, int j) const {
    return (static_cast<std::size_t>(n) * I + i) * (K + 1) + j;
  }
  std::size_t share_index(int n, int i, int k) const {
    return (static_cast<std::size_t>(n) * I + i) * K + k;
  }
  double& common_power(int n, int i) { return p[power_index(n, i, 0)]; }
  double common_power(int n, int i) const { return p[power_index(n, i, 0)]; }
  double& private_power(int n, int i, int k) { return p[power_index(n, i, k + 1)]; }
  double private_power(int n, int i, int k) const { return p[power_index(n, i, k + 1)]; }
  double& share(int n, int i, int k) { return C[share_index(n, i, k)]; }
  double share(int n, int i, int k) const { return C[share_index(n, i, k)]; }
  std::span<double> phases(int n) {
    return {theta.data() + static_cast<std::size_t>(n) * M, static_cast<std::size_t>(M)};
  }
  std::span<const double> phases(int n) const {
    return {theta.data() + static_cast<std::size_t>(n) * M, static_cast<std::size_t>(M)};
  }
};

// Scalar kernels. gain2 is |h_eff|^2; power sums in watts.
double common_rate(double gain2, double p_common, double p_private_total, double rho,
                   double sigma2, double eps2);
double private_rate(double gain2, double p_own, double p_interference, double rho,
                    double sigma2, double eps2);
// Joules harvested in one slot.
double harvested_energy(double gain2, double p_total, double rho, double zeta, double delta);

// |h_eff|^2 for every (n, i, k), zero for pairs that are not served. Indexed
// like NetworkState::C.
std::vector<double> effective_gains(const NetworkState& s, const NetworkConfig& cfg);

// State-level forms for a served pair (k in K_i[n]).
double common_rate(const NetworkState& s, const NetworkConfig& cfg, int n, int i, int k);
double private_rate(const NetworkState& s, const NetworkConfig& cfg, int n, int i, int k);
double harvested_energy(const NetworkState& s, const NetworkConfig& cfg, int n, int i, int k);

struct RateReport {
  std::vector<double> R_c;             // N*I*K
  std::vector<double> R_p;             // N*I*K
  std::vector<double> R_c_min;         // N*I, zero for idle cells
  std::vector<double> R_tot_per_slot;  // N
  std::vector<double> Q;               // N*I*K, joules
  std::vector<double> energy_per_vehicle;  // K, summed over RSUs and slots
  double sum_rate = 0.0;
};

void check_dimensions(const NetworkState& s, const NetworkConfig& cfg);

RateReport evaluate(const NetworkState& s, const NetworkConfig& cfg);
RateReport evaluate(const NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains);

enum class ConstraintKind {
  EnergyHarvest,
  PowerBudget,
  CommonShare,
  Negativity,
  UnservedAllocation,
  SplitRatio,
  PhaseRange,
  Trajectory,
};

std::string to_string(ConstraintKind kind);

struct Violation {
  ConstraintKind kind;
  int n = -1;
  int i = -1;
  int k = -1;
  double magnitude = 0.0;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  double max_violation = 0.0;  // largest raw constraint excess, zero when ok
  bool ok() const { return violations.empty(); }
};

FeasibilityReport check_feasibility(const NetworkState& s, const NetworkConfig& cfg,
                                    double tol_feas = 1e-6);

}  // namespace airs
