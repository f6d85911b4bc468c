// SPDX-License-Identifier: Apache-2.0
#include "airs/rsma_swipt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "airs/channel.hpp"
#include "airs/error.hpp"

namespace airs {

double common_rate(double gain2, double p_common, double p_private_total, double rho,
                   double sigma2, double eps2) {
  const double num = rho * p_common * gain2;
  const double den = rho * (p_private_total * gain2 + sigma2) + eps2;
  return std::log2(1.0 + num / den);
}

double private_rate(double gain2, double p_own, double p_interference, double rho, double sigma2,
                    double eps2) {
  const double num = rho * p_own * gain2;
  const double den = rho * (p_interference * gain2 + sigma2) + eps2;
  return std::log2(1.0 + num / den);
}

double harvested_energy(double gain2, double p_total, double rho, double zeta, double delta) {
  return zeta * (1.0 - rho) * p_total * gain2 * delta;
}

void check_dimensions(const NetworkState& s, const NetworkConfig& cfg) {
  const auto N = static_cast<std::size_t>(cfg.N);
  const auto I = static_cast<std::size_t>(cfg.I);
  const auto K = static_cast<std::size_t>(cfg.K);
  if (s.N != cfg.N || s.I != cfg.I || s.K != cfg.K || s.M != cfg.M || s.q.size() != N ||
      s.p.size() != N * I * (K + 1) || s.C.size() != N * I * K ||
      s.theta.size() != N * static_cast<std::size_t>(cfg.M))
    throw Error(ErrorCode::Dimension, "network state does not match the configuration");
}

std::vector<double> effective_gains(const NetworkState& s, const NetworkConfig& cfg) {
  check_dimensions(s, cfg);
  std::vector<double> g(s.C.size(), 0.0);
  for (int n = 0; n < cfg.N; ++n) {
    const SlotGeometry geom = slot_geometry(cfg, n, s.q[n]);
    for (int i = 0; i < cfg.I; ++i)
      for (int k : geom.assoc[i])
        g[s.share_index(n, i, k)] = std::norm(effective_channel(geom, i, k, s.phases(n), cfg));
  }
  return g;
}

namespace {

struct CellSums {
  double total = 0.0;     // common + all private
  double privates = 0.0;  // all private
};

CellSums cell_sums(const NetworkState& s, const std::vector<int>& served, int n, int i) {
  CellSums c;
  for (int k : served) c.privates += s.private_power(n, i, k);
  c.total = c.privates + s.common_power(n, i);
  return c;
}

double pair_gain(const NetworkState& s, const NetworkConfig& cfg, int n, int i, int k) {
  const SlotGeometry geom = slot_geometry(cfg, n, s.q[n]);
  if (geom.serving[k] != i)
    throw Error(ErrorCode::InvalidArgument, "vehicle " + std::to_string(k) +
                                                " is not served by RSU " + std::to_string(i) +
                                                " in slot " + std::to_string(n));
  return std::norm(effective_channel(geom, i, k, s.phases(n), cfg));
}

}  // namespace

double common_rate(const NetworkState& s, const NetworkConfig& cfg, int n, int i, int k) {
  check_dimensions(s, cfg);
  const double g = pair_gain(s, cfg, n, i, k);
  const CellSums c = cell_sums(s, associate(cfg, n)[i], n, i);
  return common_rate(g, s.common_power(n, i), c.privates, s.rho, cfg.sigma2(), cfg.eps2());
}

double private_rate(const NetworkState& s, const NetworkConfig& cfg, int n, int i, int k) {
  check_dimensions(s, cfg);
  const double g = pair_gain(s, cfg, n, i, k);
  const CellSums c = cell_sums(s, associate(cfg, n)[i], n, i);
  const double own = s.private_power(n, i, k);
  return private_rate(g, own, c.privates - own, s.rho, cfg.sigma2(), cfg.eps2());
}

double harvested_energy(const NetworkState& s, const NetworkConfig& cfg, int n, int i, int k) {
  check_dimensions(s, cfg);
  const double g = pair_gain(s, cfg, n, i, k);
  const CellSums c = cell_sums(s, associate(cfg, n)[i], n, i);
  return harvested_energy(g, c.total, s.rho, cfg.zeta, cfg.delta);
}

RateReport evaluate(const NetworkState& s, const NetworkConfig& cfg) {
  return evaluate(s, cfg, effective_gains(s, cfg));
}

RateReport evaluate(const NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains) {
  check_dimensions(s, cfg);
  if (gains.size() != s.C.size()) throw Error(ErrorCode::Dimension, "gain table size mismatch");
  RateReport r;
  r.R_c.assign(s.C.size(), 0.0);
  r.R_p.assign(s.C.size(), 0.0);
  r.Q.assign(s.C.size(), 0.0);
  r.R_c_min.assign(static_cast<std::size_t>(cfg.N) * cfg.I, 0.0);
  r.R_tot_per_slot.assign(cfg.N, 0.0);
  r.energy_per_vehicle.assign(cfg.K, 0.0);
  const double sigma2 = cfg.sigma2();
  const double eps2 = cfg.eps2();
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    double slot_total = 0.0;
    for (int i = 0; i < cfg.I; ++i) {
      const auto& served = assoc[i];
      if (served.empty()) continue;
      const CellSums c = cell_sums(s, served, n, i);
      double rc_min = std::numeric_limits<double>::infinity();
      for (int k : served) {
        const std::size_t idx = s.share_index(n, i, k);
        const double g = gains[idx];
        const double own = s.private_power(n, i, k);
        r.R_c[idx] = common_rate(g, s.common_power(n, i), c.privates, s.rho, sigma2, eps2);
        r.R_p[idx] = private_rate(g, own, c.privates - own, s.rho, sigma2, eps2);
        r.Q[idx] = harvested_energy(g, c.total, s.rho, cfg.zeta, cfg.delta);
        r.energy_per_vehicle[k] += r.Q[idx];
        rc_min = std::min(rc_min, r.R_c[idx]);
        slot_total += s.C[idx] + r.R_p[idx];
      }
      r.R_c_min[static_cast<std::size_t>(n) * cfg.I + i] = rc_min;
    }
    r.R_tot_per_slot[n] = slot_total;
    r.sum_rate += slot_total;
  }
  return r;
}

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::EnergyHarvest: return "energy-harvest";
    case ConstraintKind::PowerBudget: return "power-budget";
    case ConstraintKind::CommonShare: return "common-share";
    case ConstraintKind::Negativity: return "negativity";
    case ConstraintKind::UnservedAllocation: return "unserved-allocation";
    case ConstraintKind::SplitRatio: return "split-ratio";
    case ConstraintKind::PhaseRange: return "phase-range";
    case ConstraintKind::Trajectory: return "trajectory";
  }
  return "unknown";
}

FeasibilityReport check_feasibility(const NetworkState& s, const NetworkConfig& cfg,
                                    double tol) {
  check_dimensions(s, cfg);
  FeasibilityReport rep;
  auto flag = [&](ConstraintKind kind, int n, int i, int k, double excess, std::string detail) {
    rep.max_violation = std::max(rep.max_violation, excess);
    if (excess > tol) rep.violations.push_back({kind, n, i, k, excess, std::move(detail)});
  };

  if (s.rho < 0.0 || s.rho > 1.0)
    flag(ConstraintKind::SplitRatio, -1, -1, -1, std::max(-s.rho, s.rho - 1.0), "rho outside [0, 1]");

  for (double t : s.theta)
    if (!(t >= 0.0 && t < 2.0 * std::numbers::pi)) {
      flag(ConstraintKind::PhaseRange, -1, -1, -1, std::max(-t, t - 2.0 * std::numbers::pi),
           "phase outside [0, 2pi)");
      break;
    }

  if (auto v = validate_trajectory(s.q, cfg, tol))
    flag(ConstraintKind::Trajectory, v->slot, -1, -1, v->magnitude, v->describe());
  else {
    // record the speed margin even when within tolerance
    for (int n = 1; n < cfg.N; ++n)
      rep.max_violation =
          std::max(rep.max_violation, distance(s.q[n], s.q[n - 1]) - cfg.V_max * cfg.delta);
    rep.max_violation = std::max({rep.max_violation, distance(s.q.front(), cfg.q0),
                                  distance(s.q.back(), cfg.qf)});
  }

  const RateReport r = evaluate(s, cfg);
  const double P_max = cfg.P_max();
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i) {
      std::vector<bool> served(cfg.K, false);
      for (int k : assoc[i]) served[k] = true;
      double cell_power = s.common_power(n, i);
      double cell_share = 0.0;
      for (int j = 0; j <= cfg.K; ++j) {
        const double pj = s.p[s.power_index(n, i, j)];
        if (pj < 0) flag(ConstraintKind::Negativity, n, i, j - 1, -pj, "negative power");
      }
      for (int k = 0; k < cfg.K; ++k) {
        const double ck = s.share(n, i, k);
        if (ck < 0) flag(ConstraintKind::Negativity, n, i, k, -ck, "negative common share");
        if (!served[k]) {
          const double stray = std::max(std::abs(ck), std::abs(s.private_power(n, i, k)));
          if (stray > 0) flag(ConstraintKind::UnservedAllocation, n, i, k, stray, "allocation to unserved vehicle");
          continue;
        }
        cell_power += s.private_power(n, i, k);
        cell_share += ck;
      }
      if (assoc[i].empty()) {
        if (s.common_power(n, i) > 0)
          flag(ConstraintKind::UnservedAllocation, n, i, -1, s.common_power(n, i), "common power in idle cell");
        continue;
      }
      flag(ConstraintKind::PowerBudget, n, i, -1, cell_power - P_max, "power budget exceeded");
      for (int k : assoc[i])
        flag(ConstraintKind::CommonShare, n, i, k, cell_share - r.R_c[s.share_index(n, i, k)],
             "common shares exceed the common rate of vehicle " + std::to_string(k));
    }
  }

  const double E_th = cfg.E_th();
  for (int k = 0; k < cfg.K; ++k)
    flag(ConstraintKind::EnergyHarvest, -1, -1, k, E_th - r.energy_per_vehicle[k],
         "harvested energy below threshold");
  return rep;
}

}  // namespace airs
