// SPDX-License-Identifier: Apache-2.0
#include "airs/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "airs/oracle.hpp"

namespace airs {

AOResult run_scheme(Scheme scheme, const NetworkConfig& cfg, const AOOptions& opt) {
  AOOptions o = opt;
  o.scheme = scheme;
  return run(cfg, o);
}

std::string to_string(SweepAxis a) { return a == SweepAxis::M ? "M" : "T"; }

void validate(const SweepSpec& spec) {
  if (spec.values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one value");
  for (std::size_t j = 1; j < spec.values.size(); ++j)
    if (!(spec.values[j] > spec.values[j - 1]))
      throw Error(ErrorCode::InvalidArgument, "sweep values must be strictly increasing");
  if (spec.schemes.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one scheme");
  if (spec.repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  for (double v : spec.values) {
    if (spec.axis == SweepAxis::M && !(v >= 0 && v == std::floor(v)))
      throw Error(ErrorCode::InvalidArgument, "M values must be non-negative integers");
    if (spec.axis == SweepAxis::T && !(v > 0 && std::isfinite(v)))
      throw Error(ErrorCode::InvalidArgument, "T values must be positive");
  }
}

NetworkConfig apply_axis(const NetworkConfig& base, SweepAxis axis, double value) {
  NetworkConfig c = base;
  if (axis == SweepAxis::M)
    c.M = static_cast<int>(value);
  else
    c.N = static_cast<int>(std::lround(value / base.delta));
  return c;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, const NetworkConfig& base, const AOOptions& opt,
                            int workers) {
  validate(spec);
  const std::size_t S = spec.schemes.size();
  const std::size_t R = static_cast<std::size_t>(spec.repetitions);
  const std::size_t jobs = spec.values.size() * S * R;

  struct Cell {
    bool ok = false;
    double sum_rate = 0.0;
    int iters = 0;
    double wall_ms = 0.0;
    std::string error;
  };
  std::vector<Cell> cells(jobs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
      const std::size_t v = j / (S * R);
      const std::size_t s = (j / R) % S;
      const std::size_t r = j % R;
      Cell& cell = cells[j];
      try {
        AOOptions o = opt;
        o.seed = spec.seed + r;
        const AOResult res = run_scheme(spec.schemes[s], apply_axis(base, spec.axis, spec.values[v]), o);
        cell.ok = true;
        cell.sum_rate = res.trace.back().sum_rate;
        cell.iters = res.iterations;
        cell.wall_ms = res.trace.back().wall_ms;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(jobs)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<SweepRow> rows;
  for (std::size_t v = 0; v < spec.values.size(); ++v)
    for (std::size_t s = 0; s < S; ++s) {
      SweepRow row;
      row.axis_value = spec.values[v];
      row.scheme = spec.schemes[s];
      for (std::size_t r = 0; r < R; ++r) {
        const Cell& c = cells[(v * S + s) * R + r];
        if (!c.ok && row.ok) {
          row.ok = false;
          row.error = c.error;
        }
        row.sum_rate += c.sum_rate;
        row.iters += c.iters;
        row.wall_ms += c.wall_ms;
      }
      row.sum_rate = row.ok ? row.sum_rate / static_cast<double>(R)
                            : std::numeric_limits<double>::quiet_NaN();
      row.iters /= static_cast<double>(R);
      rows.push_back(std::move(row));
    }
  return rows;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_convergence_csv(std::ostream& out, const AOResult& r) {
  out << "iter,sum_rate,rho,max_violation,wall_ms\n";
  for (const AORecord& rec : r.trace)
    out << rec.iter << ',' << format_number(rec.sum_rate) << ',' << format_number(rec.rho) << ','
        << format_number(rec.max_violation) << ',' << format_number(rec.wall_ms) << '\n';
}

void write_trajectory_csv(std::ostream& out, const AOResult& r) {
  out << "slot,x,y,z,x_init,y_init,z_init\n";
  for (std::size_t n = 0; n < r.state.q.size(); ++n) {
    const Vec3& a = r.state.q[n];
    const Vec3& b = r.initial.q[n];
    out << n << ',' << format_number(a.x) << ',' << format_number(a.y) << ',' << format_number(a.z)
        << ',' << format_number(b.x) << ',' << format_number(b.y) << ',' << format_number(b.z)
        << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis_value,scheme,sum_rate,iters,wall_ms,status\n";
  for (const SweepRow& row : rows) {
    std::string status = row.ok ? "ok" : "failed: " + row.error;
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    out << format_number(row.axis_value) << ',' << to_string(row.scheme) << ','
        << format_number(row.sum_rate) << ',' << format_number(row.iters) << ','
        << format_number(row.wall_ms) << ',' << status << '\n';
  }
}

OracleCheck oracle_check(const NetworkConfig& cfg, const AOOptions& opt) {
  AOOptions o = opt;
  o.scheme = Scheme::Proposed;
  const AOResult res = run(cfg, o);
  OracleCheck out;
  out.ao_sum_rate = res.trace.back().sum_rate;
  out.ao_feasible = check_feasibility(res.state, cfg, opt.tol_feas).ok();
  const oracle::GridResult grid = oracle::grid_search_small(cfg);
  out.grid_sum_rate = grid.objective;
  out.grid_evaluations = grid.evaluations;
  out.ratio = grid.found && grid.objective > 0 ? out.ao_sum_rate / grid.objective : 0.0;
  NetworkState frozen = res.state;
  out.refine_steps = refine_rho(frozen, cfg, o);
  out.rho_refined = frozen.rho;
  out.rho_scan = oracle::scan_rho(res.state, cfg, 1e-4, opt.tol_feas).rho;
  return out;
}

}  // namespace airs
