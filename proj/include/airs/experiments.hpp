// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "airs/ao.hpp"
#include "airs/config.hpp"
#include "airs/error.hpp"

namespace airs {

// Runs one scheme on cfg. Equivalent to run() with opt.scheme = scheme.
AOResult run_scheme(Scheme scheme, const NetworkConfig& cfg, const AOOptions& opt = {});

enum class SweepAxis { M, T };
std::string to_string(SweepAxis a);

struct SweepSpec {
  SweepAxis axis = SweepAxis::M;
  std::vector<double> values;
  std::vector<Scheme> schemes = all_schemes();
  int repetitions = 1;  // repetition r runs with seed + r
  std::uint64_t seed = 0;
};

// Throws Error(InvalidArgument) unless values is non-empty and strictly
// increasing, schemes is non-empty and repetitions >= 1. M values must be
// non-negative integers and T values positive.
void validate(const SweepSpec& spec);

// Configuration of one sweep cell. The M axis sets M. The T axis sets
// N = round(T / delta) and leaves the arrival times and endpoints alone.
NetworkConfig apply_axis(const NetworkConfig& base, SweepAxis axis, double value);

struct SweepRow {
  double axis_value = 0.0;
  Scheme scheme = Scheme::Proposed;
  bool ok = true;
  double sum_rate = 0.0;  // mean over repetitions, NaN when a repetition failed
  double iters = 0.0;     // mean over repetitions
  double wall_ms = 0.0;   // total over repetitions
  std::string error;      // first failure, empty when ok
};

// Rows are ordered by value, then by the order of spec.schemes, whatever
// the completion order of the workers. Failures are recorded per row.
std::vector<SweepRow> sweep(const SweepSpec& spec, const NetworkConfig& base,
                            const AOOptions& opt = {}, int workers = 1);

// CSV emitters. Numbers use 9 significant digits.
//   fig2: iter,sum_rate,rho,max_violation,wall_ms
//   fig3: slot,x,y,z,x_init,y_init,z_init
//   fig4/fig5: axis_value,scheme,sum_rate,iters,wall_ms,status
void write_convergence_csv(std::ostream& out, const AOResult& r);
void write_trajectory_csv(std::ostream& out, const AOResult& r);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::string format_number(double v);

struct OracleCheck {
  double ao_sum_rate = 0.0;
  double grid_sum_rate = 0.0;  // lattice optimum
  double ratio = 0.0;          // ao / grid
  bool ao_feasible = false;
  double rho_refined = 0.0;    // AO final state after refine_rho
  double rho_scan = 0.0;       // scan_rho of the AO final state at resolution 1e-4
  int refine_steps = 0;
  double grid_evaluations = 0.0;
  bool passed() const {
    return ao_feasible && ratio >= 0.98 && std::abs(rho_refined - rho_scan) <= 1e-3;
  }
};

// Runs the proposed scheme on a small configuration and compares it with the
// exhaustive lattice search and, with the other blocks frozen, with the rho
// scan.
OracleCheck oracle_check(const NetworkConfig& cfg, const AOOptions& opt = {});

}  // namespace airs
