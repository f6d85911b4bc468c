// SPDX-License-Identifier: Apache-2.0
#include "airs/airs.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "airs/ao.hpp"
#include "airs/config.hpp"
#include "airs/error.hpp"
#include "airs/experiments.hpp"
#include "airs/oracle.hpp"

struct airs_config {
  airs::NetworkConfig cfg;
};

struct airs_result {
  airs::AOResult res;
};

struct airs_sweep {
  std::vector<airs::SweepRow> rows;
  std::vector<std::string> names;
};

namespace {

thread_local std::string g_last_error;

airs_status code_of(airs::ErrorCode c) {
  switch (c) {
    case airs::ErrorCode::InvalidArgument: return AIRS_ERR_INVALID_ARGUMENT;
    case airs::ErrorCode::Dimension: return AIRS_ERR_DIMENSION;
    case airs::ErrorCode::Infeasible: return AIRS_ERR_INFEASIBLE;
    case airs::ErrorCode::Numerical: return AIRS_ERR_NUMERICAL;
    case airs::ErrorCode::Io: return AIRS_ERR_IO;
  }
  return AIRS_ERR_INTERNAL;
}

airs_status fail(airs_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
airs_status guarded(F&& f) {
  try {
    return f();
  } catch (const airs::Error& e) {
    return fail(code_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(AIRS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(AIRS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(AIRS_ERR_INTERNAL, "unknown exception");
  }
}

#define AIRS_REQUIRE(cond, what) \
  if (!(cond)) return fail(AIRS_ERR_INVALID_ARGUMENT, what)

airs::AOOptions to_options(const airs_run_options* o) {
  airs_run_options d;
  airs_run_options_default(&d);
  if (!o) o = &d;
  airs::AOOptions a;
  a.max_outer_iters = o->max_outer_iters;
  a.conv_tol = o->conv_tol;
  a.seed = o->seed;
  a.mono_tol = o->mono_tol;
  a.tol_feas = o->tol_feas;
  a.solver.tol = o->solver_tol;
  a.solver.max_iter = o->solver_max_iter;
  a.record_timing = o->record_timing != 0;
  return a;
}

int* int_field(airs::NetworkConfig& c, const char* key) {
  if (!std::strcmp(key, "I")) return &c.I;
  if (!std::strcmp(key, "K")) return &c.K;
  if (!std::strcmp(key, "J")) return &c.J;
  if (!std::strcmp(key, "M")) return &c.M;
  if (!std::strcmp(key, "N")) return &c.N;
  return nullptr;
}

template <class W>
airs_status write_file(const char* path, W&& writer) {
  AIRS_REQUIRE(path, "path is null");
  std::ofstream f(path, std::ios::binary);
  if (!f) return fail(AIRS_ERR_IO, std::string("cannot open ") + path + " for writing");
  writer(f);
  f.flush();
  if (!f) return fail(AIRS_ERR_IO, std::string("write to ") + path + " failed");
  return AIRS_OK;
}

airs_status new_config(airs::NetworkConfig c, airs_config** out) {
  *out = new airs_config{std::move(c)};
  return AIRS_OK;
}

}  // namespace

extern "C" {

const char* airs_last_error(void) { return g_last_error.c_str(); }

const char* airs_version(void) { return "0.1.0"; }

const char* airs_status_name(airs_status s) {
  switch (s) {
    case AIRS_OK: return "ok";
    case AIRS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case AIRS_ERR_DIMENSION: return "dimension";
    case AIRS_ERR_INFEASIBLE: return "infeasible";
    case AIRS_ERR_NUMERICAL: return "numerical";
    case AIRS_ERR_IO: return "io";
    case AIRS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

airs_status airs_config_table1(airs_config** out) {
  AIRS_REQUIRE(out, "out is null");
  return guarded([&] { return new_config(airs::table1_config(), out); });
}

airs_status airs_config_toy(airs_config** out) {
  AIRS_REQUIRE(out, "out is null");
  return guarded([&] { return new_config(airs::oracle::toy_config(), out); });
}

airs_status airs_config_from_json(const char* json, airs_config** out) {
  AIRS_REQUIRE(json && out, "null argument");
  return guarded([&] { return new_config(airs::config_from_json(json), out); });
}

airs_status airs_config_load(const char* path, airs_config** out) {
  AIRS_REQUIRE(path && out, "null argument");
  return guarded([&] { return new_config(airs::load_config(path), out); });
}

airs_status airs_config_to_json(const airs_config* cfg, char** out) {
  AIRS_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    const std::string s = airs::config_to_json(cfg->cfg);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
    return AIRS_OK;
  });
}

airs_status airs_config_set_int(airs_config* cfg, const char* key, int value) {
  AIRS_REQUIRE(cfg && key, "null argument");
  int* f = int_field(cfg->cfg, key);
  AIRS_REQUIRE(f, std::string("unknown integer field ") + key);
  *f = value;
  return AIRS_OK;
}

airs_status airs_config_get_int(const airs_config* cfg, const char* key, int* value) {
  AIRS_REQUIRE(cfg && key && value, "null argument");
  int* f = int_field(const_cast<airs::NetworkConfig&>(cfg->cfg), key);
  AIRS_REQUIRE(f, std::string("unknown integer field ") + key);
  *value = *f;
  return AIRS_OK;
}

void airs_config_free(airs_config* cfg) { delete cfg; }

void airs_string_free(char* s) { delete[] s; }

void airs_run_options_default(airs_run_options* o) {
  if (!o) return;
  const airs::AOOptions a;
  o->max_outer_iters = a.max_outer_iters;
  o->conv_tol = a.conv_tol;
  o->seed = a.seed;
  o->mono_tol = a.mono_tol;
  o->tol_feas = a.tol_feas;
  o->solver_tol = a.solver.tol;
  o->solver_max_iter = a.solver.max_iter;
  o->record_timing = a.record_timing ? 1 : 0;
}

airs_status airs_run(const airs_config* cfg, const char* scheme, const airs_run_options* opt,
                     airs_result** out) {
  AIRS_REQUIRE(cfg && scheme && out, "null argument");
  return guarded([&] {
    const airs::Scheme s = airs::scheme_from_string(scheme);
    *out = new airs_result{airs::run_scheme(s, cfg->cfg, to_options(opt))};
    return AIRS_OK;
  });
}

double airs_result_sum_rate(const airs_result* r) { return r ? r->res.trace.back().sum_rate : 0.0; }
double airs_result_rho(const airs_result* r) { return r ? r->res.state.rho : 0.0; }
int airs_result_iterations(const airs_result* r) { return r ? r->res.iterations : 0; }
int airs_result_converged(const airs_result* r) { return r && r->res.converged ? 1 : 0; }
size_t airs_result_trace_length(const airs_result* r) { return r ? r->res.trace.size() : 0; }

airs_status airs_result_trace(const airs_result* r, size_t index, airs_trace_record* out) {
  AIRS_REQUIRE(r && out, "null argument");
  AIRS_REQUIRE(index < r->res.trace.size(), "trace index out of range");
  const airs::AORecord& t = r->res.trace[index];
  *out = {t.iter, t.sum_rate, t.rho, t.max_violation, t.wall_ms};
  return AIRS_OK;
}

size_t airs_result_slots(const airs_result* r) { return r ? r->res.state.q.size() : 0; }

airs_status airs_result_trajectory(const airs_result* r, double* xyz, size_t len) {
  AIRS_REQUIRE(r && xyz, "null argument");
  const auto& q = r->res.state.q;
  if (len < 3 * q.size()) return fail(AIRS_ERR_DIMENSION, "buffer shorter than 3 * slots");
  for (std::size_t n = 0; n < q.size(); ++n) {
    xyz[3 * n] = q[n].x;
    xyz[3 * n + 1] = q[n].y;
    xyz[3 * n + 2] = q[n].z;
  }
  return AIRS_OK;
}

double airs_result_hover_distance(const airs_result* r, int initial) {
  if (!r) return 0.0;
  return airs::hover_distance(initial ? r->res.initial.q : r->res.state.q, r->res.cfg);
}

airs_status airs_result_write_convergence_csv(const airs_result* r, const char* path) {
  AIRS_REQUIRE(r, "null result");
  return guarded([&] {
    return write_file(path, [&](std::ostream& o) { airs::write_convergence_csv(o, r->res); });
  });
}

airs_status airs_result_write_trajectory_csv(const airs_result* r, const char* path) {
  AIRS_REQUIRE(r, "null result");
  return guarded([&] {
    return write_file(path, [&](std::ostream& o) { airs::write_trajectory_csv(o, r->res); });
  });
}

void airs_result_free(airs_result* r) { delete r; }

airs_status airs_sweep_run(const airs_config* cfg, char axis, const double* values,
                           size_t n_values, const char* const* schemes, size_t n_schemes,
                           const airs_run_options* opt, int workers, airs_sweep** out) {
  AIRS_REQUIRE(cfg && out && (values || n_values == 0), "null argument");
  AIRS_REQUIRE(axis == 'M' || axis == 'T', "axis must be 'M' or 'T'");
  AIRS_REQUIRE(schemes || n_schemes == 0, "null scheme list");
  return guarded([&] {
    airs::SweepSpec spec;
    spec.axis = axis == 'M' ? airs::SweepAxis::M : airs::SweepAxis::T;
    spec.values.assign(values, values + n_values);
    if (n_schemes > 0) {
      spec.schemes.clear();
      for (size_t j = 0; j < n_schemes; ++j) spec.schemes.push_back(airs::scheme_from_string(schemes[j]));
    }
    const airs::AOOptions o = to_options(opt);
    spec.seed = o.seed;
    auto* s = new airs_sweep;
    try {
      s->rows = airs::sweep(spec, cfg->cfg, o, workers);
    } catch (...) {
      delete s;
      throw;
    }
    for (const auto& row : s->rows) s->names.push_back(airs::to_string(row.scheme));
    *out = s;
    return AIRS_OK;
  });
}

size_t airs_sweep_rows(const airs_sweep* s) { return s ? s->rows.size() : 0; }

airs_status airs_sweep_row_at(const airs_sweep* s, size_t index, airs_sweep_row* out) {
  AIRS_REQUIRE(s && out, "null argument");
  AIRS_REQUIRE(index < s->rows.size(), "row index out of range");
  const airs::SweepRow& r = s->rows[index];
  *out = {r.axis_value, s->names[index].c_str(), r.ok ? 1 : 0, r.sum_rate, r.iters, r.wall_ms};
  return AIRS_OK;
}

airs_status airs_sweep_write_csv(const airs_sweep* s, const char* path) {
  AIRS_REQUIRE(s, "null sweep");
  return guarded([&] {
    return write_file(path, [&](std::ostream& o) { airs::write_sweep_csv(o, s->rows); });
  });
}

void airs_sweep_free(airs_sweep* s) { delete s; }

airs_status airs_oracle_check(const airs_config* cfg, const airs_run_options* opt,
                              airs_oracle_report* out) {
  AIRS_REQUIRE(out, "out is null");
  return guarded([&] {
    const airs::NetworkConfig c = cfg ? cfg->cfg : airs::oracle::toy_config();
    const airs::OracleCheck r = airs::oracle_check(c, to_options(opt));
    *out = {r.ao_sum_rate, r.grid_sum_rate, r.ratio,  r.ao_feasible ? 1 : 0,
            r.rho_refined, r.rho_scan,      r.passed() ? 1 : 0};
    return AIRS_OK;
  });
}

}  // extern "C"
