// SPDX-License-Identifier: Apache-2.0
// Command-line front end over the C API.
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "airs/airs.h"

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  uint64_t seed = 0;
  int max_iters = -1;
  double tol = -1.0;
  bool no_timing = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON configuration (default: reference scenario)");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--seed", c.seed, "seed for the random-phase scheme");
  sub->add_option("--max-iters", c.max_iters, "maximum outer iterations");
  sub->add_option("--tol", c.tol, "relative sum-rate change that ends the loop");
  sub->add_flag("--no-timing", c.no_timing, "write zero wall times for reproducible output");
}

int exit_code(airs_status s) {
  if (s == AIRS_OK) return 0;
  std::fprintf(stderr, "error (%s): %s\n", airs_status_name(s), airs_last_error());
  return s == AIRS_ERR_INFEASIBLE ? 2 : 1;
}

airs_run_options options_of(const Common& c) {
  airs_run_options o;
  airs_run_options_default(&o);
  o.seed = c.seed;
  if (c.max_iters >= 0) o.max_outer_iters = c.max_iters;
  if (c.tol > 0) o.conv_tol = c.tol;
  o.record_timing = c.no_timing ? 0 : 1;
  return o;
}

airs_status load(const Common& c, airs_config** cfg, bool toy_default = false) {
  if (!c.config.empty()) return airs_config_load(c.config.c_str(), cfg);
  return toy_default ? airs_config_toy(cfg) : airs_config_table1(cfg);
}

std::string out_path(const Common& c, const char* name) {
  std::filesystem::create_directories(c.out);
  return (std::filesystem::path(c.out) / name).string();
}

int do_run(const Common& c, const std::string& scheme) {
  airs_config* cfg = nullptr;
  if (airs_status s = load(c, &cfg); s != AIRS_OK) return exit_code(s);
  const airs_run_options o = options_of(c);
  airs_result* r = nullptr;
  airs_status s = airs_run(cfg, scheme.c_str(), &o, &r);
  airs_config_free(cfg);
  if (s != AIRS_OK) return exit_code(s);
  const std::string f2 = out_path(c, "fig2_convergence.csv");
  const std::string f3 = out_path(c, "fig3_trajectory.csv");
  s = airs_result_write_convergence_csv(r, f2.c_str());
  if (s == AIRS_OK) s = airs_result_write_trajectory_csv(r, f3.c_str());
  if (s == AIRS_OK)
    std::printf("%s: sum rate %.9g after %d iterations (%s), rho %.9g, hover %.9g -> %.9g m\n",
                scheme.c_str(), airs_result_sum_rate(r), airs_result_iterations(r),
                airs_result_converged(r) ? "converged" : "not converged", airs_result_rho(r),
                airs_result_hover_distance(r, 1), airs_result_hover_distance(r, 0));
  airs_result_free(r);
  return exit_code(s);
}

int do_sweep(const Common& c, char axis, std::vector<double> values,
             const std::vector<std::string>& schemes, int workers) {
  if (values.empty())
    values = axis == 'M' ? std::vector<double>{8, 16, 32, 64} : std::vector<double>{30, 40, 50};
  airs_config* cfg = nullptr;
  if (airs_status s = load(c, &cfg); s != AIRS_OK) return exit_code(s);
  std::vector<const char*> names;
  for (const auto& s : schemes) names.push_back(s.c_str());
  const airs_run_options o = options_of(c);
  airs_sweep* sw = nullptr;
  airs_status s = airs_sweep_run(cfg, axis, values.data(), values.size(),
                                 names.empty() ? nullptr : names.data(), names.size(), &o,
                                 workers, &sw);
  airs_config_free(cfg);
  if (s != AIRS_OK) return exit_code(s);
  const std::string path = out_path(c, axis == 'M' ? "fig4_sweep_m.csv" : "fig5_sweep_t.csv");
  s = airs_sweep_write_csv(sw, path.c_str());
  int failed = 0;
  for (size_t j = 0; j < airs_sweep_rows(sw); ++j) {
    airs_sweep_row row;
    airs_sweep_row_at(sw, j, &row);
    if (!row.ok) ++failed;
    std::printf("%c=%-6g %-17s %s\n", axis, row.axis_value, row.scheme,
                row.ok ? std::to_string(row.sum_rate).c_str() : "failed");
  }
  if (failed) std::fprintf(stderr, "%d sweep cells failed; see the status column\n", failed);
  airs_sweep_free(sw);
  return exit_code(s);
}

int do_oracle(const Common& c) {
  airs_config* cfg = nullptr;
  if (airs_status s = load(c, &cfg, true); s != AIRS_OK) return exit_code(s);
  const airs_run_options o = options_of(c);
  airs_oracle_report rep;
  const airs_status s = airs_oracle_check(cfg, &o, &rep);
  airs_config_free(cfg);
  if (s != AIRS_OK) return exit_code(s);
  std::printf("AO %.9g, grid %.9g, ratio %.6f, feasible %s\n", rep.ao_sum_rate,
              rep.grid_sum_rate, rep.ratio, rep.ao_feasible ? "yes" : "no");
  std::printf("rho refined %.6f, rho scan %.4f\n", rep.rho_refined, rep.rho_scan);
  std::printf("%s\n", rep.passed ? "PASS" : "FAIL");
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AIRS-assisted RSMA/SWIPT vehicular network optimizer"};
  app.require_subcommand(1);

  Common run_c, m_c, t_c, o_c;
  std::string scheme = "proposed";
  std::vector<double> m_values, t_values;
  std::vector<std::string> m_schemes, t_schemes;
  int m_workers = 1, t_workers = 1;

  auto* run = app.add_subcommand("run", "optimize one scheme; writes fig2/fig3 CSVs");
  add_common(run, run_c);
  run->add_option("--scheme", scheme, "scheme name");

  auto* sm = app.add_subcommand("sweep-m", "sum rate versus AIRS elements; writes fig4 CSV");
  add_common(sm, m_c);
  sm->add_option("--values", m_values, "element counts (default 8 16 32 64)");
  sm->add_option("--schemes", m_schemes, "schemes (default all)");
  sm->add_option("--workers", m_workers, "concurrent cells");

  auto* st = app.add_subcommand("sweep-t", "sum rate versus mission time; writes fig5 CSV");
  add_common(st, t_c);
  st->add_option("--values", t_values, "mission times in s (default 30 40 50)");
  st->add_option("--schemes", t_schemes, "schemes (default all)");
  st->add_option("--workers", t_workers, "concurrent cells");

  auto* oc = app.add_subcommand("oracle-check", "compare against the exhaustive toy search");
  add_common(oc, o_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) return do_run(run_c, scheme);
    if (*sm) return do_sweep(m_c, 'M', m_values, m_schemes, m_workers);
    if (*st) return do_sweep(t_c, 'T', t_values, t_schemes, t_workers);
    if (*oc) return do_oracle(o_c);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
