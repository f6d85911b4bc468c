// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>

#include "airs/error.hpp"
#include "airs/experiments.hpp"
#include "airs/oracle.hpp"
#include "doctest.h"

using namespace airs;

namespace {

AOOptions quiet() {
  AOOptions o;
  o.record_timing = false;
  return o;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("sweep specs are validated") {
    SweepSpec s;
    CHECK_THROWS_AS(validate(s), Error);  // no values
    s.values = {8, 16, 16};
    CHECK_THROWS_AS(validate(s), Error);
    s.values = {16, 8};
    CHECK_THROWS_AS(validate(s), Error);
    s.values = {8, 16.5};
    CHECK_THROWS_AS(validate(s), Error);
    s.values = {8, 16};
    s.schemes.clear();
    CHECK_THROWS_AS(validate(s), Error);
    s.schemes = {Scheme::Proposed};
    s.repetitions = 0;
    CHECK_THROWS_AS(validate(s), Error);
    s.repetitions = 1;
    CHECK_NOTHROW(validate(s));
    s.axis = SweepAxis::T;
    s.values = {-1.0, 30.0};
    CHECK_THROWS_AS(validate(s), Error);
  }

  TEST_CASE("axis application") {
    const NetworkConfig c = table1_config();
    CHECK(apply_axis(c, SweepAxis::M, 64).M == 64);
    const NetworkConfig t = apply_axis(c, SweepAxis::T, 30);
    CHECK(t.N == 30);
    CHECK(t.t_arrival == c.t_arrival);
    CHECK(t.q0.x == c.q0.x);
    CHECK(t.qf.x == c.qf.x);
  }

  TEST_CASE("a single-value sweep is one run_scheme call") {
    const NetworkConfig c = oracle::toy_config();
    SweepSpec s;
    s.values = {static_cast<double>(c.M)};
    s.schemes = {Scheme::Proposed, Scheme::FixedRho};
    const auto rows = sweep(s, c, quiet());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ok);
    CHECK(rows[0].scheme == Scheme::Proposed);
    CHECK(rows[0].sum_rate == run_scheme(Scheme::Proposed, c, quiet()).trace.back().sum_rate);
    CHECK(rows[1].sum_rate == run_scheme(Scheme::FixedRho, c, quiet()).trace.back().sum_rate);
    CHECK(rows[0].sum_rate >= rows[1].sum_rate - 1e-6);
  }

  TEST_CASE("row order and values do not depend on the worker count") {
    const NetworkConfig c = oracle::toy_config();
    SweepSpec s;
    s.values = {2, 4, 8};
    s.repetitions = 2;
    const auto a = sweep(s, c, quiet(), 1);
    const auto b = sweep(s, c, quiet(), 3);
    REQUIRE(a.size() == 3 * all_schemes().size());
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a[j].axis_value == b[j].axis_value);
      CHECK(a[j].scheme == b[j].scheme);
      CHECK((a[j].sum_rate == b[j].sum_rate || (std::isnan(a[j].sum_rate) && std::isnan(b[j].sum_rate))));
    }
    std::ostringstream x, y;
    write_sweep_csv(x, a);
    write_sweep_csv(y, b);
    CHECK(x.str() == y.str());
  }

  TEST_CASE("failed cells are recorded and the sweep continues") {
    const NetworkConfig c = oracle::toy_config();
    SweepSpec s;
    s.axis = SweepAxis::T;
    s.values = {2, 4};  // two slots cannot cover the toy's endpoints
    s.schemes = {Scheme::Proposed};
    const auto rows = sweep(s, c, quiet());
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].ok);
    CHECK(std::isnan(rows[0].sum_rate));
    CHECK_FALSE(rows[0].error.empty());
    CHECK(rows[1].ok);
    std::ostringstream out;
    write_sweep_csv(out, rows);
    const std::string csv = out.str();
    CHECK(csv.rfind("axis_value,scheme,sum_rate,iters,wall_ms,status\n", 0) == 0);
    CHECK(csv.find("2,proposed,nan,") != std::string::npos);
    CHECK(csv.find("failed: ") != std::string::npos);
    CHECK(csv.find(",ok\n") != std::string::npos);
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(1147.0946812345) == "1147.09468");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(1e-20) == "1e-20");
  }

  TEST_CASE("run CSVs") {
    const AOResult r = run_scheme(Scheme::Proposed, oracle::toy_config(), quiet());
    std::ostringstream a, b;
    write_convergence_csv(a, r);
    write_trajectory_csv(b, r);
    CHECK(a.str().rfind("iter,sum_rate,rho,max_violation,wall_ms\n0,", 0) == 0);
    CHECK(b.str().rfind("slot,x,y,z,x_init,y_init,z_init\n0,", 0) == 0);
    std::size_t lines = 0;
    for (char ch : b.str()) lines += ch == '\n';
    CHECK(lines == r.state.q.size() + 1);
    std::ostringstream again;
    write_convergence_csv(again, run_scheme(Scheme::Proposed, oracle::toy_config(), quiet()));
    CHECK(again.str() == a.str());
  }

  TEST_CASE("oracle comparison on the toy passes") {
    const OracleCheck r = oracle_check(oracle::toy_config(), quiet());
    CHECK(r.ao_feasible);
    CHECK(r.ratio >= 0.98);
    CHECK(std::abs(r.rho_refined - r.rho_scan) <= 1e-3);
    CHECK(r.passed());
  }
}
