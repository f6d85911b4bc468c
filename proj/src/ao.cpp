// SPDX-License-Identifier: Apache-2.0
#include "airs/ao.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "airs/channel.hpp"
#include "airs/error.hpp"
#include "airs/scenario.hpp"

namespace airs {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return "proposed";
    case Scheme::FixedTrajectory: return "fixed_trajectory";
    case Scheme::RandomPhase: return "random_phase";
    case Scheme::FixedPower: return "fixed_power";
    case Scheme::FixedRho: return "fixed_rho";
    case Scheme::NoAirs: return "no_airs";
  }
  return "unknown";
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes{Scheme::Proposed,   Scheme::FixedTrajectory,
                                           Scheme::RandomPhase, Scheme::FixedPower,
                                           Scheme::FixedRho,   Scheme::NoAirs};
  return schemes;
}

Scheme scheme_from_string(std::string_view name) {
  for (Scheme s : all_schemes())
    if (to_string(s) == name) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

std::vector<double> closed_form_phases(const NetworkConfig& cfg, const std::vector<Vec3>& q) {
  std::vector<double> theta(static_cast<std::size_t>(cfg.N) * cfg.M, 0.0);
  for (int n = 0; n < cfg.N; ++n) {
    const std::vector<double> t = slot_phase_profile(slot_geometry(cfg, n, q[n]), cfg);
    std::copy(t.begin(), t.end(), theta.begin() + static_cast<std::ptrdiff_t>(n) * cfg.M);
  }
  return theta;
}

std::vector<double> random_phases(const NetworkConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
  std::vector<double> theta(static_cast<std::size_t>(cfg.N) * cfg.M);
  for (double& t : theta) t = normalize_phase(dist(gen));
  return theta;
}

NetworkState initialize(const NetworkConfig& cfg, std::uint64_t /*seed*/) {
  validate(cfg);
  NetworkState s = NetworkState::zeros(cfg);
  s.q = straight_line(cfg);
  const double P = cfg.P_max();
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i) {
      if (assoc[i].empty()) continue;
      s.common_power(n, i) = 0.5 * P;
      const double each = 0.5 * P / static_cast<double>(assoc[i].size());
      for (int k : assoc[i]) s.private_power(n, i, k) = each;
    }
  }
  s.rho = 0.5;
  s.theta = closed_form_phases(cfg, s.q);
  return s;
}

double rate_potential(const NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains) {
  const RateReport r = evaluate(s, cfg, gains);
  double total = 0.0;
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i) {
      if (assoc[i].empty()) continue;
      total += r.R_c_min[static_cast<std::size_t>(n) * cfg.I + i];
      for (int k : assoc[i]) total += r.R_p[s.share_index(n, i, k)];
    }
  }
  return total;
}

void allocate_common_shares(NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains) {
  const RateReport r = evaluate(s, cfg, gains);
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i) {
      if (assoc[i].empty()) continue;
      const double each = r.R_c_min[static_cast<std::size_t>(n) * cfg.I + i] /
                          static_cast<double>(assoc[i].size());
      for (int k : assoc[i]) s.share(n, i, k) = each;
    }
  }
}

double hover_distance(const std::vector<Vec3>& q, const NetworkConfig& cfg) {
  double sum = 0.0;
  int count = 0;
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.I; ++i) {
      if (assoc[i].empty()) continue;
      const Vec2 p = rsu_position(cfg, i);
      best = std::min(best, distance(q[n], Vec3{p.x, p.y, 0.0}));
    }
    if (std::isfinite(best)) {
      sum += best;
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

namespace {

bool energy_ok(const NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains) {
  const double E_th = cfg.E_th();
  if (E_th <= 0) return true;
  const RateReport r = evaluate(s, cfg, gains);
  for (double e : r.energy_per_vehicle)
    if (e < E_th) return false;
  return true;
}

// Shrinks shares of cells whose smallest common rate fell below the share sum.
void clip_common_shares(NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains) {
  const RateReport r = evaluate(s, cfg, gains);
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i) {
      if (assoc[i].empty()) continue;
      double sum = 0.0;
      for (int k : assoc[i]) sum += s.share(n, i, k);
      const double cap = r.R_c_min[static_cast<std::size_t>(n) * cfg.I + i];
      if (sum <= cap) continue;
      const double f = sum > 0 ? std::max(0.0, cap / sum * (1.0 - 1e-12)) : 0.0;
      for (int k : assoc[i]) s.share(n, i, k) *= f;
    }
  }
}

class Clock {
 public:
  explicit Clock(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    if (!on_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point start_;
};

struct Blocks {
  bool trajectory = true;
  bool closed_form_theta = true;
  bool power = true;
  bool rho = true;
};

Blocks blocks_for(Scheme s) {
  Blocks b;
  switch (s) {
    case Scheme::Proposed: break;
    case Scheme::FixedTrajectory: b.trajectory = false; break;
    case Scheme::RandomPhase: b.closed_form_theta = false; break;
    case Scheme::FixedPower: b.power = false; break;
    case Scheme::FixedRho: b.rho = false; break;
    case Scheme::NoAirs: b.trajectory = false; break;
  }
  return b;
}

}  // namespace

double rho_step(NetworkState& s, const NetworkConfig& cfg, std::span<const double> gains,
                const AOOptions& opt) {
  const PsProblem ps = build_ps_problem(s, cfg, gains);
  const SolveResult res = solve(ps.problem, opt.solver);
  if (res.status == SolveStatus::Infeasible) return res.objective;
  NetworkState cand = s;
  extract_ps(ps, res.x, cfg, cand);
  if (check_feasibility(cand, cfg, opt.tol_feas).ok() &&
      evaluate(cand, cfg, gains).sum_rate >= evaluate(s, cfg, gains).sum_rate)
    s = std::move(cand);
  return res.objective;
}

int refine_rho(NetworkState& s, const NetworkConfig& cfg, const AOOptions& opt, int max_steps,
               double rho_tol) {
  const std::vector<double> gains = effective_gains(s, cfg);
  for (int it = 1; it <= max_steps; ++it) {
    const double before = s.rho;
    rho_step(s, cfg, gains, opt);
    if (std::abs(s.rho - before) <= rho_tol) return it;
  }
  return max_steps;
}

AOResult run(const NetworkConfig& input_cfg, const AOOptions& opt) {
  NetworkConfig cfg = input_cfg;
  if (opt.scheme == Scheme::NoAirs) cfg.M = 0;
  validate(cfg);
  if (opt.max_outer_iters < 0) throw Error(ErrorCode::InvalidArgument, "max_outer_iters must be >= 0");
  const Blocks blocks = blocks_for(opt.scheme);
  const Clock clock(opt.record_timing);

  NetworkState st = initialize(cfg, opt.seed);
  if (!blocks.closed_form_theta) st.theta = random_phases(cfg, opt.seed);

  std::vector<double> gains = effective_gains(st, cfg);
  const double E_th = cfg.E_th();
  if (E_th > 0) {
    const std::vector<double> full = full_power_energy(cfg, gains);
    double rho_cap = 1.0;
    for (int k = 0; k < cfg.K; ++k) {
      if (!(full[k] > E_th))
        throw Error(ErrorCode::Infeasible,
                    "vehicle " + std::to_string(k) +
                        " cannot reach the energy threshold even at full power with rho = 0");
      rho_cap = std::min(rho_cap, 1.0 - E_th / full[k]);
    }
    // The uniform initial split spends the whole budget, so the harvested
    // energy is (1 - rho) * full.
    if (!(0.5 < rho_cap)) st.rho = 0.5 * rho_cap;
  }

  AOResult out;
  out.cfg = cfg;
  out.initial = st;

  auto record = [&](int iter, const AORecord& partial) {
    AORecord r = partial;
    r.iter = iter;
    r.sum_rate = evaluate(st, cfg, gains).sum_rate;
    r.rho = st.rho;
    r.max_violation = check_feasibility(st, cfg, opt.tol_feas).max_violation;
    r.wall_ms = clock.ms();
    out.trace.push_back(r);
    return r.sum_rate;
  };
  double prev = record(0, {});

  auto sum_rate = [&](const NetworkState& s, std::span<const double> g) {
    return evaluate(s, cfg, g).sum_rate;
  };
  auto feasible = [&](const NetworkState& s) { return check_feasibility(s, cfg, opt.tol_feas).ok(); };

  for (int l = 1; l <= opt.max_outer_iters; ++l) {
    AORecord rec;

    // (a) trajectory and (b) phases
    if (blocks.trajectory && cfg.M > 0 && cfg.N > 2 && cfg.K > 0) {
      const TrajectoryProblem tp = build_trajectory_problem(st, cfg, {opt.bound});
      const SolveResult res = solve(tp.problem, opt.solver);
      rec.trajectory_surrogate = res.objective;
      if (res.status != SolveStatus::Infeasible) {
        const std::vector<Vec3> q_new = extract_trajectory(tp, res.x, cfg);
        const double base = rate_potential(st, cfg, gains);
        // The subproblem scores every served pair with its aligned gain while
        // only one pair per slot is actually aligned, so the candidate is
        // accepted only if the exact potential does not drop; otherwise the
        // step is shortened towards the incumbent.
        double t = 1.0;
        for (int attempt = 0; attempt < 8; ++attempt, t *= 0.5) {
          NetworkState cand = st;
          for (int n = 0; n < cfg.N; ++n) {
            cand.q[n].x = st.q[n].x + t * (q_new[n].x - st.q[n].x);
            cand.q[n].y = st.q[n].y + t * (q_new[n].y - st.q[n].y);
            cand.q[n].z = cfg.H_U;
          }
          if (validate_trajectory(cand.q, cfg, opt.tol_feas)) continue;
          if (blocks.closed_form_theta) cand.theta = closed_form_phases(cfg, cand.q);
          const std::vector<double> g = effective_gains(cand, cfg);
          if (!energy_ok(cand, cfg, g)) continue;
          if (rate_potential(cand, cfg, g) < base) continue;
          st = std::move(cand);
          gains = g;
          rec.trajectory_accepted = true;
          break;
        }
      }
      clip_common_shares(st, cfg, gains);
    }

    // (c) powers and common shares
    {
      NetworkState inc = st;
      allocate_common_shares(inc, cfg, gains);
      st = inc;
      if (blocks.power && cfg.K > 0) {
        const PowerProblem pp = build_power_rate_problem(inc, cfg, gains);
        const SolveResult res = solve(pp.problem, opt.solver);
        rec.power_surrogate = res.objective;
        if (res.status != SolveStatus::Infeasible) {
          NetworkState cand = inc;
          extract_power(pp, res.x, cand);
          if (feasible(cand) && sum_rate(cand, gains) >= sum_rate(inc, gains)) st = std::move(cand);
        }
      }
    }

    // (d) split ratio
    if (blocks.rho && cfg.K > 0) rec.ps_surrogate = rho_step(st, cfg, gains, opt);

    const double cur = record(l, rec);
    out.iterations = l;
    if (cur < prev - opt.mono_tol)
      throw Error(ErrorCode::Numerical, "exact sum rate decreased from " + std::to_string(prev) +
                                            " to " + std::to_string(cur) + " at iteration " +
                                            std::to_string(l));
    const double rel = std::abs(cur - prev) / std::max(std::abs(prev), 1e-12);
    prev = cur;
    if (rel < opt.conv_tol) {
      out.converged = true;
      break;
    }
  }
  out.state = std::move(st);
  return out;
}

}  // namespace airs
