// SPDX-License-Identifier: Apache-2.0
#include "airs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "airs/error.hpp"

namespace airs::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

// Linear-scale parameters, converted here rather than through NetworkConfig.
struct Params {
  double h0, h1, sigma2, eps2, P_max, E_th;
  explicit Params(const NetworkConfig& c)
      : h0(std::pow(10.0, c.h0_db / 10.0)),
        h1(std::pow(10.0, c.h1_db / 10.0)),
        sigma2(std::pow(10.0, c.sigma2_dbw / 10.0)),
        eps2(std::pow(10.0, c.eps2_dbw / 10.0)),
        P_max(std::pow(10.0, (c.P_max_dbm - 30.0) / 10.0)),
        E_th(std::isfinite(c.E_th_dbm) ? std::pow(10.0, (c.E_th_dbm - 30.0) / 10.0) : 0.0) {}
};

double rsu_x(const NetworkConfig& c, int i) { return c.r_rsu + c.d_rsu * i; }

void vehicle_xy(const NetworkConfig& c, int k, int n, double& x, double& y) {
  const int lane = c.lane_of[k];
  x = c.v[lane - 1] * ((n + 1) * c.delta - c.t_arrival[k]);
  y = c.d_lane * (lane - 1);
}

int server_of(const NetworkConfig& c, int k, int n) {
  double x, y;
  vehicle_xy(c, k, n, x, y);
  if (x < 0) return -1;
  int best = -1;
  for (int i = 0; i < c.I; ++i) {
    const double d = std::fabs(x - rsu_x(c, i));
    if (d > c.r_rsu) continue;
    if (best < 0 || d < std::fabs(x - rsu_x(c, best))) best = i;
  }
  return best;
}

double norm3(double dx, double dy, double dz) { return std::sqrt(dx * dx + dy * dy + dz * dz); }

std::size_t pidx(const NetworkConfig& c, int n, int i, int j) {
  return (static_cast<std::size_t>(n) * c.I + i) * (c.K + 1) + j;
}
std::size_t cidx(const NetworkConfig& c, int n, int i, int k) {
  return (static_cast<std::size_t>(n) * c.I + i) * c.K + k;
}

// |h_eff|^2 of RSU i to vehicle k in slot n with the AIRS at (ax, ay, az).
double gain2(const NetworkConfig& c, const Params& prm, int n, int i, int k, double ax, double ay,
             double az, const double* theta) {
  double vx, vy;
  vehicle_xy(c, k, n, vx, vy);
  const double xi = rsu_x(c, i);
  const double dd = std::max(c.d_ref, std::hypot(xi - vx, vy));
  std::complex<double> h(std::sqrt(prm.h0) / dd, 0.0);
  if (c.M > 0) {
    const double d1 = norm3(xi - ax, -ay, -az);
    const double d2 = norm3(vx - ax, vy - ay, -az);
    const double cin = (xi - ax) / d1;
    const double cout = (vx - ax) / d2;
    const double amp = prm.h1 / (d1 * d2);
    const double kd = 2.0 * kPi / c.lambda * c.d_M;
    for (int m = 0; m < c.M; ++m) {
      // conj(g_m) * exp(j theta_m) * h_m
      const double phase = kd * m * cout + theta[m] - kd * m * cin;
      h += std::polar(amp, phase);
    }
  }
  return std::norm(h);
}

double log2_ratio(double num, double den) { return std::log2(1.0 + num / den); }

}  // namespace

RateReport recompute_report(const NetworkState& s, const NetworkConfig& c) {
  const Params prm(c);
  RateReport r;
  const std::size_t nik = static_cast<std::size_t>(c.N) * c.I * c.K;
  r.R_c.assign(nik, 0.0);
  r.R_p.assign(nik, 0.0);
  r.Q.assign(nik, 0.0);
  r.R_c_min.assign(static_cast<std::size_t>(c.N) * c.I, 0.0);
  r.R_tot_per_slot.assign(c.N, 0.0);
  r.energy_per_vehicle.assign(c.K, 0.0);
  const double rho = s.rho;
  for (int n = 0; n < c.N; ++n) {
    const double* th = s.theta.data() + static_cast<std::size_t>(n) * c.M;
    for (int i = 0; i < c.I; ++i) {
      double priv = 0.0;
      bool any = false;
      for (int k = 0; k < c.K; ++k)
        if (server_of(c, k, n) == i) {
          priv += s.p[pidx(c, n, i, k + 1)];
          any = true;
        }
      if (!any) continue;
      const double pc = s.p[pidx(c, n, i, 0)];
      double lo = std::numeric_limits<double>::infinity();
      for (int k = 0; k < c.K; ++k) {
        if (server_of(c, k, n) != i) continue;
        const double g = gain2(c, prm, n, i, k, s.q[n].x, s.q[n].y, s.q[n].z, th);
        const double own = s.p[pidx(c, n, i, k + 1)];
        const std::size_t id = cidx(c, n, i, k);
        r.R_c[id] = log2_ratio(rho * pc * g, rho * (priv * g + prm.sigma2) + prm.eps2);
        r.R_p[id] = log2_ratio(rho * own * g, rho * ((priv - own) * g + prm.sigma2) + prm.eps2);
        r.Q[id] = c.zeta * (1.0 - rho) * (pc + priv) * g * c.delta;
        r.energy_per_vehicle[k] += r.Q[id];
        lo = std::min(lo, r.R_c[id]);
        r.R_tot_per_slot[n] += s.C[id] + r.R_p[id];
      }
      r.R_c_min[static_cast<std::size_t>(n) * c.I + i] = lo;
    }
    r.sum_rate += r.R_tot_per_slot[n];
  }
  return r;
}

bool rho_constraints_hold(const NetworkState& s, const NetworkConfig& c, double tol) {
  const Params prm(c);
  const RateReport r = recompute_report(s, c);
  for (int k = 0; k < c.K; ++k)
    if (r.energy_per_vehicle[k] < prm.E_th - tol) return false;
  for (int n = 0; n < c.N; ++n)
    for (int i = 0; i < c.I; ++i) {
      double shares = 0.0;
      for (int k = 0; k < c.K; ++k)
        if (server_of(c, k, n) == i) shares += s.C[cidx(c, n, i, k)];
      for (int k = 0; k < c.K; ++k)
        if (server_of(c, k, n) == i && shares > r.R_c[cidx(c, n, i, k)] + tol) return false;
    }
  return true;
}

RhoScan scan_rho(const NetworkState& s, const NetworkConfig& c, double step, double tol) {
  if (!((step > 0.0 && step <= 0.1) || step == 0.5))
    throw Error(ErrorCode::InvalidArgument, "rho scan step must lie in (0, 0.1]");
  std::vector<double> grid;
  for (long j = 0;; ++j) {
    const double rho = static_cast<double>(j) * step;
    if (rho > 1.0 + 1e-12) break;
    grid.push_back(std::min(rho, 1.0));
  }
  if (grid.back() < 1.0 - 1e-12) grid.push_back(1.0);

  RhoScan out;
  NetworkState t = s;
  for (double rho : grid) {
    t.rho = rho;
    ++out.evaluated;
    if (!rho_constraints_hold(t, c, tol)) continue;
    ++out.feasible;
    const double f = recompute_report(t, c).sum_rate;
    if (!out.found || f > out.objective) {
      out.found = true;
      out.rho = rho;
      out.objective = f;
    }
  }
  return out;
}

namespace {

struct Point {
  double x, y;
};

struct Candidate {
  double rate = 0.0;
  double energy = 0.0;
  int power = -1;  // index into the power lattice, -1 when unserved
};

// Admissible positions of every slot: endpoints pinned, free slots on the
// lattice within reach of both endpoints.
std::vector<std::vector<Point>> slot_positions(const NetworkConfig& c, const GridOptions& o) {
  const double reach = c.V_max * c.delta;
  std::vector<std::vector<Point>> pos(c.N);
  pos.front() = {{c.q0.x, c.q0.y}};
  pos.back() = {{c.qf.x, c.qf.y}};
  for (int n = 1; n + 1 < c.N; ++n) {
    const double r0 = reach * n;
    const int span = static_cast<int>(std::floor(r0 / o.position_step + 1e-9));
    for (int a = -span; a <= span; ++a)
      for (int b = -span; b <= span; ++b) {
        const Point p{c.q0.x + a * o.position_step, c.q0.y + b * o.position_step};
        const double d0 = std::hypot(p.x - c.q0.x, p.y - c.q0.y);
        const double df = std::hypot(p.x - c.qf.x, p.y - c.qf.y);
        if (d0 <= r0 + 1e-9 && df <= reach * (c.N - 1 - n) + 1e-9) pos[n].push_back(p);
      }
  }
  return pos;
}

std::vector<std::pair<double, double>> power_lattice(const GridOptions& o) {
  const int steps = static_cast<int>(std::lround(1.0 / o.power_step));
  std::vector<std::pair<double, double>> out;
  for (int a = 0; a <= steps; ++a)
    for (int b = 0; a + b <= steps; ++b) out.emplace_back(a * o.power_step, b * o.power_step);
  return out;
}

int rho_count(const GridOptions& o) { return static_cast<int>(std::lround(1.0 / o.rho_step)) + 1; }

void require_small(const NetworkConfig& c, const GridOptions& o) {
  if (c.I > 1 || c.K > 1 || c.N < 2 || c.N > 4)
    throw Error(ErrorCode::InvalidArgument, "grid search needs I <= 1, K <= 1 and 2 <= N <= 4");
  if (!(o.position_step > 0 && o.power_step > 0 && o.power_step <= 1 && o.rho_step > 0 &&
        o.rho_step <= 1))
    throw Error(ErrorCode::InvalidArgument, "grid steps must be positive");
}

// Pareto front (max rate, max energy); ties keep the earlier candidate.
std::vector<Candidate> pareto(std::vector<Candidate> v) {
  std::stable_sort(v.begin(), v.end(), [](const Candidate& a, const Candidate& b) {
    return a.rate > b.rate;
  });
  std::vector<Candidate> front;
  double best_energy = -std::numeric_limits<double>::infinity();
  for (const Candidate& cd : v)
    if (cd.energy > best_energy) {
      front.push_back(cd);
      best_energy = cd.energy;
    }
  return front;
}

}  // namespace

double grid_cost(const NetworkConfig& c, const GridOptions& o) {
  require_small(c, o);
  double positions = 0.0;
  for (const auto& p : slot_positions(c, o)) positions += static_cast<double>(p.size());
  return positions * static_cast<double>(power_lattice(o).size()) * rho_count(o);
}

GridResult grid_search_small(const NetworkConfig& c, const GridOptions& o) {
  const double cost = grid_cost(c, o);
  if (cost > o.budget)
    throw Error(ErrorCode::InvalidArgument, "grid search needs " + std::to_string(cost) +
                                                " evaluations, over the budget of " +
                                                std::to_string(o.budget));
  const Params prm(c);
  const auto pos = slot_positions(c, o);
  const auto powers = power_lattice(o);
  const int R = rho_count(o);
  const double z = c.H_U;
  const double reach = c.V_max * c.delta;

  // Enumerate admissible paths as index tuples, lexicographic order.
  std::vector<std::vector<int>> paths;
  std::vector<int> cur(c.N, 0);
  auto extend = [&](auto&& self, int n) -> void {
    if (n == c.N) {
      paths.push_back(cur);
      return;
    }
    for (int j = 0; j < static_cast<int>(pos[n].size()); ++j) {
      const Point& a = pos[n - 1][cur[n - 1]];
      const Point& b = pos[n][j];
      if (std::hypot(a.x - b.x, a.y - b.y) > reach + 1e-9) continue;
      cur[n] = j;
      self(self, n + 1);
    }
  };
  extend(extend, 1);

  GridResult best;
  best.evaluations = cost;
  best.paths = static_cast<std::int64_t>(paths.size());
  if (paths.empty()) return best;

  // Per slot, position and rho: Pareto front of (rate, energy).
  std::vector<std::vector<std::vector<std::vector<Candidate>>>> fronts(c.N);
  for (int n = 0; n < c.N; ++n) {
    const bool served = c.K == 1 && c.I == 1 && server_of(c, 0, n) == 0;
    fronts[n].resize(pos[n].size());
    for (std::size_t j = 0; j < pos[n].size(); ++j) {
      fronts[n][j].resize(R);
      double g = 0.0;
      if (served) {
        // Aligned magnitude: direct amplitude plus M coherent reflections.
        double vx, vy;
        vehicle_xy(c, 0, n, vx, vy);
        const double xi = rsu_x(c, 0);
        const Point& a = pos[n][j];
        const double amp = std::sqrt(prm.h0) / std::max(c.d_ref, std::hypot(xi - vx, vy)) +
                           prm.h1 * c.M /
                               (norm3(xi - a.x, -a.y, -z) * norm3(vx - a.x, vy - a.y, -z));
        g = amp * amp;
      }
      for (int r = 0; r < R; ++r) {
        const double rho = std::min(1.0, r * o.rho_step);
        if (!served) {
          fronts[n][j][r] = {Candidate{}};
          continue;
        }
        std::vector<Candidate> all;
        all.reserve(powers.size());
        for (std::size_t pi = 0; pi < powers.size(); ++pi) {
          const double pc = powers[pi].first * prm.P_max;
          const double pp = powers[pi].second * prm.P_max;
          const double den = rho * prm.sigma2 + prm.eps2;
          const double rc = log2_ratio(rho * pc * g, rho * pp * g + den);
          const double rp = log2_ratio(rho * pp * g, den);
          all.push_back({rc + rp, c.zeta * (1.0 - rho) * (pc + pp) * g * c.delta,
                         static_cast<int>(pi)});
        }
        fronts[n][j][r] = pareto(std::move(all));
      }
    }
  }

  // Combine slots for every (rho, path): best total rate meeting E_th.
  std::vector<int> choice(c.N), pick(c.N);
  for (int r = 0; r < R; ++r)
    for (const auto& path : paths) {
      double local_best = -std::numeric_limits<double>::infinity();
      auto combine = [&](auto&& self, int n, double rate, double energy) -> void {
        if (n == c.N) {
          if (energy >= prm.E_th && rate > local_best) {
            local_best = rate;
            pick = choice;
          }
          return;
        }
        const auto& f = fronts[n][path[n]][r];
        for (int m = 0; m < static_cast<int>(f.size()); ++m) {
          choice[n] = m;
          self(self, n + 1, rate + f[m].rate, energy + f[m].energy);
        }
      };
      combine(combine, 0, 0.0, 0.0);
      if (!(local_best > -std::numeric_limits<double>::infinity())) continue;
      if (best.found && !(local_best > best.objective)) continue;
      best.found = true;
      best.objective = local_best;

      NetworkState s;
      s.N = c.N;
      s.I = c.I;
      s.K = c.K;
      s.M = c.M;
      s.rho = std::min(1.0, r * o.rho_step);
      s.q.resize(c.N);
      s.p.assign(static_cast<std::size_t>(c.N) * c.I * (c.K + 1), 0.0);
      s.C.assign(static_cast<std::size_t>(c.N) * c.I * c.K, 0.0);
      s.theta.assign(static_cast<std::size_t>(c.N) * c.M, 0.0);
      for (int n = 0; n < c.N; ++n) {
        const Point& a = pos[n][path[n]];
        s.q[n] = {a.x, a.y, z};
        const Candidate& cd = fronts[n][path[n]][r][pick[n]];
        if (cd.power < 0) continue;
        s.p[pidx(c, n, 0, 0)] = powers[cd.power].first * prm.P_max;
        s.p[pidx(c, n, 0, 1)] = powers[cd.power].second * prm.P_max;
        double vx, vy;
        vehicle_xy(c, 0, n, vx, vy);
        const double xi = rsu_x(c, 0);
        const double cin = (xi - a.x) / norm3(xi - a.x, -a.y, -z);
        const double cout = (vx - a.x) / norm3(vx - a.x, vy - a.y, -z);
        const double kd = 2.0 * kPi / c.lambda * c.d_M;
        for (int m = 0; m < c.M; ++m) {
          double t = std::fmod(kd * m * (cin - cout), 2.0 * kPi);
          if (t < 0) t += 2.0 * kPi;
          if (t >= 2.0 * kPi) t = 0.0;
          s.theta[static_cast<std::size_t>(n) * c.M + m] = t;
        }
      }
      const RateReport rep = recompute_report(s, c);
      for (int n = 0; n < c.N; ++n)
        if (server_of(c, 0, n) == 0) s.C[cidx(c, n, 0, 0)] = rep.R_c[cidx(c, n, 0, 0)];
      best.state = std::move(s);
    }
  return best;
}

NetworkConfig toy_config() {
  NetworkConfig c;
  c.I = 1;
  c.J = 1;
  c.K = 1;
  c.N = 4;
  c.v = {25.0};
  c.t_arrival = {0.0};
  c.lane_of = {1};
  c.q0 = {150.0, 10.0, 20.0};
  c.qf = {250.0, 10.0, 20.0};
  c.E_th_dbm = 20.0;
  return c;
}

}  // namespace airs::oracle
