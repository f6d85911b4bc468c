// SPDX-License-Identifier: Apache-2.0
#include "airs/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "airs/channel.hpp"
#include "airs/error.hpp"
#include "airs/scenario.hpp"
#include "airs/surrogate.hpp"

namespace airs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

std::string tag(const char* what, int n, int i = -1, int k = -1) {
  std::string s = std::string(what) + "[" + std::to_string(n);
  if (i >= 0) s += "," + std::to_string(i);
  if (k >= 0) s += "," + std::to_string(k);
  return s + "]";
}

double cell_private_power(const NetworkState& s, const std::vector<int>& served, int n, int i) {
  double t = 0.0;
  for (int k : served) t += s.private_power(n, i, k);
  return t;
}

double cell_share(const NetworkState& s, const std::vector<int>& served, int n, int i) {
  double t = 0.0;
  for (int k : served) t += s.share(n, i, k);
  return t;
}

// Squared distance from an internal-unit position (x, y, h) to a ground
// point, as "slack - |.|^2 >= 0".
ConcaveExpr slack_above_distance(int slack, const LinearForm& x, const LinearForm& y, double px,
                                 double py, double h) {
  ConcaveExpr e;
  e.affine.add(slack, 1.0);
  e.affine.constant = -h * h;
  SquareTerm sx{1.0, x};
  sx.arg.constant -= px;
  SquareTerm sy{1.0, y};
  sy.arg.constant -= py;
  e.squares = {sx, sy};
  return e;
}

// First-order lower bound of the squared distance at the expansion point,
// minus the slack: |ql - p|^2 + 2 (ql - p).(q - ql) + h^2 - slack >= 0.
ConcaveExpr linearized_distance_above_slack(int slack, int xi, int yi, const Vec3& ql, double px,
                                            double py, double h) {
  ConcaveExpr e;
  const double dx = ql.x - px;
  const double dy = ql.y - py;
  e.affine.constant = dx * dx + dy * dy + h * h - 2.0 * dx * ql.x - 2.0 * dy * ql.y;
  e.affine.add(xi, 2.0 * dx).add(yi, 2.0 * dy).add(slack, -1.0);
  return e;
}

LinearForm coordinate(int index, double fixed) {
  LinearForm f;
  if (index >= 0)
    f.add(index, 1.0);
  else
    f.constant = fixed;
  return f;
}

// Lower bound on one rate: the signal log linearized in (u, v) plus the
// interference log, either exact in (w, o) or linearized.
void add_rate_bound(ConcaveExpr& e, const TaylorFamily& dag, const SurrogateCoeffs& c,
                    double interference_power, const TaylorFamily& ddag, int u, int v, int w, int o,
                    const NetworkConfig& cfg, InterferenceBound bound) {
  const SlackVars& x = c.expansion;
  const double du = dag.Y / (dag.X * std::numbers::ln2);
  const double dv = dag.Z / (dag.X * std::numbers::ln2);
  e.affine.constant += std::log2(dag.X) - du * x.u - dv * x.v;
  e.affine.add(u, du).add(v, dv);
  if (bound == InterferenceBound::Concave) {
    const double rp = c.rho * interference_power;
    InvProductLogTerm t;
    t.weight = kInvLn2;
    t.a = w;
    t.b = o;
    t.c0 = c.rho * (interference_power * c.gain.A + cfg.sigma2()) + cfg.eps2();
    t.c1 = rp * c.gain.B;
    t.c2 = rp * c.gain.C;
    if (t.c1 == 0.0 && t.c2 == 0.0)
      e.affine.constant -= std::log2(t.c0);
    else
      e.inv_logs.push_back(t);
  } else {
    const double dw = -ddag.Y / (ddag.X * std::numbers::ln2);
    const double dout = -ddag.Z / (ddag.X * std::numbers::ln2);
    e.affine.constant += -std::log2(ddag.X) - dw * x.w - dout * x.o;
    e.affine.add(w, dw).add(o, dout);
  }
}

}  // namespace

TrajectoryProblem build_trajectory_problem(const NetworkState& s, const NetworkConfig& cfg,
                                           const TrajectoryOptions& opt) {
  check_dimensions(s, cfg);
  if (!(cfg.H_U > 0)) throw Error(ErrorCode::InvalidArgument, "degenerate expansion: zero altitude");
  const double Ls = opt.length_scale;
  const double h = cfg.H_U / Ls;
  const int N = cfg.N;
  const int I = cfg.I;
  const int K = cfg.K;

  TrajectoryProblem tp;
  tp.length_scale = Ls;
  tp.altitude = cfg.H_U;
  std::vector<std::pair<std::size_t, double>> share_caps;
  ConvexSubproblem& P = tp.problem;
  tp.x_index.assign(N, -1);
  tp.y_index.assign(N, -1);
  tp.u_index.assign(s.C.size(), -1);
  tp.w_index.assign(s.C.size(), -1);
  tp.v_index.assign(static_cast<std::size_t>(N) * I, -1);
  tp.o_index.assign(tp.v_index.size(), -1);
  tp.eta_index.assign(tp.v_index.size(), -1);

  for (int n = 1; n + 1 < N; ++n) {
    tp.x_index[n] = P.add_var(tag("x", n), -kInf, kInf, s.q[n].x / Ls);
    tp.y_index[n] = P.add_var(tag("y", n), -kInf, kInf, s.q[n].y / Ls);
  }

  // Per-vehicle harvested-energy bound: constant part from fixed slots and
  // affine part from free slots.
  std::vector<ConcaveExpr> eh(K);
  std::vector<bool> eh_has_vars(K, false);
  const double E_th = cfg.E_th();
  const double sigma2 = cfg.sigma2();
  const double eps2 = cfg.eps2();

  for (int n = 0; n < N; ++n) {
    const SlotGeometry geom = slot_geometry(cfg, n, s.q[n]);
    const bool free_slot = tp.x_index[n] >= 0;
    const LinearForm xf = coordinate(tp.x_index[n], s.q[n].x / Ls);
    const LinearForm yf = coordinate(tp.y_index[n], s.q[n].y / Ls);
    for (int i = 0; i < I; ++i) {
      const auto& served = geom.assoc[i];
      if (served.empty()) continue;
      const double privates = cell_private_power(s, served, n, i);
      const double total = privates + s.common_power(n, i);
      if (!free_slot) {
        for (int k : served) {
          const double g = aligned_effective_gain(geom, i, k, cfg);
          eh[k].affine.constant += harvested_energy(g * g, total, s.rho, cfg.zeta, cfg.delta);
        }
        continue;
      }
      const std::size_t cell = static_cast<std::size_t>(n) * I + i;
      const Vec2 rp = geom.rsu_pos[i];
      const double dra2 = geom.d_ra[i] * geom.d_ra[i] / (Ls * Ls);
      const int v = P.add_var(tag("v", n, i), 0.0, kInf, dra2);
      const int o = P.add_var(tag("o", n, i), 0.0, kInf, dra2);
      const int eta = P.add_var(tag("eta", n, i), -kInf, kInf, 0.0);
      tp.v_index[cell] = v;
      tp.o_index[cell] = o;
      tp.eta_index[cell] = eta;
      ConcaveExpr cv = slack_above_distance(v, xf, yf, rp.x / Ls, rp.y / Ls, h);
      cv.label = tag("v_dist", n, i);
      P.constraints.push_back(std::move(cv));
      ConcaveExpr co = linearized_distance_above_slack(
          o, tp.x_index[n], tp.y_index[n], Vec3{s.q[n].x / Ls, s.q[n].y / Ls, h}, rp.x / Ls,
          rp.y / Ls, h);
      co.label = tag("o_dist", n, i);
      P.constraints.push_back(std::move(co));

      const double share_sum = cell_share(s, served, n, i);
      double eta0 = kInf;
      for (int k : served) {
        const std::size_t idx = s.share_index(n, i, k);
        const Vec2 vp = geom.vehicle_pos[k];
        const double dav2 = geom.d_av[k] * geom.d_av[k] / (Ls * Ls);
        const int u = P.add_var(tag("u", n, i, k), 0.0, kInf, dav2);
        const int w = P.add_var(tag("w", n, i, k), 0.0, kInf, dav2);
        tp.u_index[idx] = u;
        tp.w_index[idx] = w;
        ConcaveExpr cu = slack_above_distance(u, xf, yf, vp.x / Ls, vp.y / Ls, h);
        cu.label = tag("u_dist", n, i, k);
        P.constraints.push_back(std::move(cu));
        ConcaveExpr cw = linearized_distance_above_slack(
            w, tp.x_index[n], tp.y_index[n], Vec3{s.q[n].x / Ls, s.q[n].y / Ls, h}, vp.x / Ls,
            vp.y / Ls, h);
        cw.label = tag("w_dist", n, i, k);
        P.constraints.push_back(std::move(cw));

        GainConstants gc = gain_constants(geom.direct(i, k), cfg);
        gc.B /= Ls * Ls;
        gc.C /= Ls * Ls * Ls * Ls;
        const double own = s.private_power(n, i, k);
        const SlackVars e{dav2, dra2, dav2, dra2};
        const SurrogateCoeffs c =
            trajectory_coeffs(gc, PairPowers{total, privates, own}, e, s.rho, cfg);

        // private rate in the objective
        add_rate_bound(P.objective, c.private_dag, c, privates - own, c.private_ddag, u, v, w, o,
                       cfg, opt.bound);

        // common rate: epigraph and, when shares are allocated, the share cap
        ConcaveExpr rc;
        add_rate_bound(rc, c.common_dag, c, privates, c.common_ddag, u, v, w, o, cfg, opt.bound);
        const double g2 = c.gain(dav2, dra2);
        const double rc_exact = common_rate(g2, s.common_power(n, i), privates, s.rho, sigma2, eps2);
        eta0 = std::min(eta0, rc_exact);
        if (share_sum > 0) {
          ConcaveExpr cap = rc;
          cap.affine.constant -= share_sum;
          cap.label = tag("share_cap", n, i, k);
          share_caps.emplace_back(P.constraints.size(), share_sum);
          P.constraints.push_back(std::move(cap));
        }
        rc.affine.add(eta, -1.0);
        rc.label = tag("eta_cap", n, i, k);
        P.constraints.push_back(std::move(rc));

        if (E_th > 0) {
          const SlackAffine q = eh_lower_bound(c);
          eh[k].affine.constant += q.constant;
          eh[k].affine.add(u, q.du).add(v, q.dv);
          eh_has_vars[k] = true;
        }
      }
      P.objective.affine.add(eta, 1.0);
      P.start[eta] = eta0;
    }
  }

  if (E_th > 0)
    for (int k = 0; k < K; ++k) {
      if (!eh_has_vars[k]) continue;
      ConcaveExpr c = std::move(eh[k]);
      c.affine.constant -= E_th;
      c.affine.constant /= E_th;
      for (auto& t : c.affine.terms) t.second /= E_th;
      c.label = tag("energy", k);
      P.constraints.push_back(std::move(c));
    }

  const double step = cfg.V_max * cfg.delta / Ls;
  for (int n = 1; n < N; ++n) {
    if (tp.x_index[n] < 0 && tp.x_index[n - 1] < 0) continue;
    ConcaveExpr c;
    c.affine.constant = step * step;
    LinearForm dx = coordinate(tp.x_index[n], s.q[n].x / Ls);
    LinearForm dy = coordinate(tp.y_index[n], s.q[n].y / Ls);
    if (tp.x_index[n - 1] >= 0) {
      dx.add(tp.x_index[n - 1], -1.0);
      dy.add(tp.y_index[n - 1], -1.0);
    } else {
      dx.constant -= s.q[n - 1].x / Ls;
      dy.constant -= s.q[n - 1].y / Ls;
    }
    c.squares = {SquareTerm{1.0, dx}, SquareTerm{1.0, dy}};
    c.label = tag("speed", n);
    P.constraints.push_back(std::move(c));
  }

  tp.value_at_expansion = P.objective(P.start);

  // Move the start off the slack constraints, which are tight at the
  // expansion point.
  for (std::size_t j = 0; j < tp.u_index.size(); ++j)
    if (tp.u_index[j] >= 0) {
      P.start[tp.u_index[j]] *= 1.0 + 1e-6;
      P.start[tp.w_index[j]] *= 1.0 - 1e-6;
    }
  for (std::size_t j = 0; j < tp.v_index.size(); ++j)
    if (tp.v_index[j] >= 0) {
      P.start[tp.v_index[j]] *= 1.0 + 1e-6;
      P.start[tp.o_index[j]] *= 1.0 - 1e-6;
      P.start[tp.eta_index[j]] -= 1e-5;
    }
  // The move lowers every surrogate rate slightly, so a share cap that was
  // tight at the expansion point is relaxed by exactly that deficit. The AO
  // loop clips the shares back to the exact common rates after this step.
  for (const auto& [row, share] : share_caps) {
    const double margin = 1e-9 * (1.0 + share);
    const double value = P.constraints[row](P.start);
    if (value < margin) P.constraints[row].affine.constant += margin - value;
  }
  return tp;
}

std::vector<Vec3> extract_trajectory(const TrajectoryProblem& tp, std::span<const double> x,
                                     const NetworkConfig& cfg) {
  std::vector<Vec3> q(cfg.N);
  q.front() = cfg.q0;
  q.back() = cfg.qf;
  for (int n = 0; n < cfg.N; ++n)
    if (tp.x_index[n] >= 0)
      q[n] = Vec3{x[tp.x_index[n]] * tp.length_scale, x[tp.y_index[n]] * tp.length_scale,
                  tp.altitude};
  return q;
}

PowerProblem build_power_rate_problem(const NetworkState& s, const NetworkConfig& cfg,
                                      std::span<const double> gains) {
  check_dimensions(s, cfg);
  if (gains.size() != s.C.size()) throw Error(ErrorCode::Dimension, "gain table size mismatch");
  PowerProblem pp;
  pp.power_scale = cfg.P_max();
  const double Ps = pp.power_scale;
  pp.p_index.assign(s.p.size(), -1);
  pp.c_index.assign(s.C.size(), -1);
  ConvexSubproblem& P = pp.problem;
  const double E_th = cfg.E_th();
  std::vector<ConcaveExpr> eh(cfg.K);

  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i) {
      const auto& served = assoc[i];
      if (served.empty()) continue;
      // cell variables in the layout [common, private of each served vehicle]
      std::vector<int> vars;
      std::vector<double> pe;
      std::vector<double> g;
      const std::size_t c0 = s.power_index(n, i, 0);
      vars.push_back(P.add_var(tag("p0", n, i), 0.0, kInf, s.p[c0] / Ps));
      pp.p_index[c0] = vars.back();
      pe.push_back(s.p[c0]);
      for (int k : served) {
        const std::size_t idx = s.power_index(n, i, k + 1);
        vars.push_back(P.add_var(tag("p", n, i, k), 0.0, kInf, s.p[idx] / Ps));
        pp.p_index[idx] = vars.back();
        pe.push_back(s.p[idx]);
        g.push_back(gains[s.share_index(n, i, k)]);
      }
      std::vector<int> shares;
      for (int k : served) {
        const std::size_t idx = s.share_index(n, i, k);
        shares.push_back(P.add_var(tag("C", n, i, k), 0.0, kInf, s.C[idx]));
        pp.c_index[idx] = shares.back();
        P.objective.affine.add(shares.back(), 1.0);
      }

      ConcaveExpr budget;
      budget.affine.constant = 1.0;
      for (int j : vars) budget.affine.add(j, -1.0);
      budget.label = tag("budget", n, i);
      P.constraints.push_back(std::move(budget));

      const CellDc dc = dc1_rates(g, pe, s.rho, cfg.sigma2(), cfg.eps2());
      auto to_expr = [&](const DcRate& r) {
        ConcaveExpr e;
        LogTerm l;
        l.weight = kInvLn2;
        l.arg.constant = r.arg_constant;
        for (std::size_t j = 0; j < vars.size(); ++j) {
          if (r.arg[j] != 0.0) l.arg.add(vars[j], r.arg[j] * Ps);
          if (r.lin[j] != 0.0) e.affine.add(vars[j], -r.lin[j] * Ps);
        }
        e.affine.constant = -r.lin_constant;
        e.logs.push_back(std::move(l));
        return e;
      };
      for (std::size_t a = 0; a < served.size(); ++a) {
        const ConcaveExpr rp = to_expr(dc.priv[a]);
        P.objective.affine.constant += rp.affine.constant;
        for (const auto& t : rp.affine.terms) P.objective.affine.terms.push_back(t);
        for (const auto& l : rp.logs) P.objective.logs.push_back(l);

        ConcaveExpr cap = to_expr(dc.common[a]);
        for (int c : shares) cap.affine.add(c, -1.0);
        cap.label = tag("share_cap", n, i, served[a]);
        P.constraints.push_back(std::move(cap));

        if (E_th > 0) {
          const int k = served[a];
          const double coef = cfg.zeta * (1.0 - s.rho) * cfg.delta * g[a] * Ps / E_th;
          for (int j : vars) eh[k].affine.add(j, coef);
        }
      }
    }
  }
  if (E_th > 0)
    for (int k = 0; k < cfg.K; ++k) {
      ConcaveExpr c = std::move(eh[k]);
      c.affine.constant = -1.0;
      c.label = tag("energy", k);
      // A vehicle that is never served leaves the constant -1, which no
      // allocation can satisfy.
      P.constraints.push_back(std::move(c));
    }
  return pp;
}

void extract_power(const PowerProblem& pp, std::span<const double> x, NetworkState& s) {
  for (std::size_t j = 0; j < s.p.size(); ++j)
    s.p[j] = pp.p_index[j] >= 0 ? std::max(0.0, x[pp.p_index[j]] * pp.power_scale) : 0.0;
  for (std::size_t j = 0; j < s.C.size(); ++j)
    s.C[j] = pp.c_index[j] >= 0 ? std::max(0.0, x[pp.c_index[j]]) : 0.0;
}

PsProblem build_ps_problem(const NetworkState& s, const NetworkConfig& cfg,
                           std::span<const double> gains) {
  check_dimensions(s, cfg);
  if (gains.size() != s.C.size()) throw Error(ErrorCode::Dimension, "gain table size mismatch");
  PsProblem ps;
  ConvexSubproblem& P = ps.problem;
  const int r = P.add_var("rho", 0.0, 1.0, s.rho);
  ps.total_index.assign(static_cast<std::size_t>(cfg.N) * cfg.I, -1);
  const double E_th = cfg.E_th();
  std::vector<double> energy0(cfg.K, 0.0);
  std::vector<bool> served_ever(cfg.K, false);

  auto to_expr = [&](const DcRate& d) {
    ConcaveExpr e;
    LogTerm l;
    l.weight = kInvLn2;
    l.arg.constant = d.arg_constant;
    l.arg.add(r, d.arg[0]);
    e.logs.push_back(std::move(l));
    e.affine.constant = -d.lin_constant;
    e.affine.add(r, -d.lin[0]);
    return e;
  };

  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i) {
      const auto& served = assoc[i];
      if (served.empty()) continue;
      std::vector<double> p{s.common_power(n, i)};
      std::vector<double> g;
      for (int k : served) {
        p.push_back(s.private_power(n, i, k));
        g.push_back(gains[s.share_index(n, i, k)]);
      }
      const double total = std::accumulate(p.begin(), p.end(), 0.0);
      const CellDc dc = dc2_rates(g, p, s.rho, cfg.sigma2(), cfg.eps2());
      // Start below the tight value so the epigraph rows are strictly feasible.
      double lo = std::numeric_limits<double>::infinity();
      for (const DcRate& d : dc.common) lo = std::min(lo, d.value(std::span<const double>(&s.rho, 1)));
      const double start = std::max(0.0, lo) * (1.0 - 1e-9);
      const int t = P.add_var(tag("share_total", n, i), 0.0, kInf, start);
      ps.total_index[static_cast<std::size_t>(n) * cfg.I + i] = t;
      P.objective.affine.add(t, 1.0);
      for (std::size_t a = 0; a < served.size(); ++a) {
        const ConcaveExpr rp = to_expr(dc.priv[a]);
        P.objective.affine.constant += rp.affine.constant;
        for (const auto& term : rp.affine.terms) P.objective.affine.terms.push_back(term);
        P.objective.logs.push_back(rp.logs.front());
        ConcaveExpr cap = to_expr(dc.common[a]);
        cap.affine.add(t, -1.0);
        cap.label = tag("share_cap", n, i, served[a]);
        P.constraints.push_back(std::move(cap));
        energy0[served[a]] += cfg.zeta * cfg.delta * total * g[a];
        served_ever[served[a]] = true;
      }
    }
  }
  if (E_th > 0)
    for (int k = 0; k < cfg.K; ++k) {
      // ((1 - rho) E_k(0) - E_th) / E_th >= 0
      ConcaveExpr c;
      c.affine.constant = energy0[k] / E_th - 1.0;
      if (served_ever[k]) c.affine.add(r, -energy0[k] / E_th);
      c.label = tag("energy", k);
      P.constraints.push_back(std::move(c));
    }
  return ps;
}

void extract_ps(const PsProblem& ps, std::span<const double> x, const NetworkConfig& cfg,
                NetworkState& s) {
  s.rho = std::clamp(x[0], 0.0, 1.0);
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i) {
      const int t = ps.total_index[static_cast<std::size_t>(n) * cfg.I + i];
      if (t < 0) continue;
      const auto& served = assoc[i];
      const double total = std::max(0.0, x[t]);
      const double old = cell_share(s, served, n, i);
      for (int k : served)
        s.share(n, i, k) = old > 0 ? total * (s.share(n, i, k) / old)
                                   : total / static_cast<double>(served.size());
    }
  }
}

std::vector<double> full_power_energy(const NetworkConfig& cfg, std::span<const double> gains) {
  std::vector<double> e(cfg.K, 0.0);
  const double P = cfg.P_max();
  for (int n = 0; n < cfg.N; ++n) {
    const Association assoc = associate(cfg, n);
    for (int i = 0; i < cfg.I; ++i)
      for (int k : assoc[i])
        e[k] += cfg.zeta * cfg.delta * P *
                gains[(static_cast<std::size_t>(n) * cfg.I + i) * cfg.K + k];
  }
  return e;
}

}  // namespace airs
