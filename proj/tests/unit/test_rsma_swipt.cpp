// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>
#include <random>

#include "../reference_values.hpp"
#include "airs/ao.hpp"
#include "airs/error.hpp"
#include "airs/oracle.hpp"
#include "airs/rsma_swipt.hpp"
#include "doctest.h"

using namespace airs;

namespace {

bool has_kind(const FeasibilityReport& r, ConstraintKind k) {
  for (const auto& v : r.violations)
    if (v.kind == k) return true;
  return false;
}

// Random state: random admissible-ish trajectory, random powers within the
// budget of active cells, random phases and rho.
NetworkState random_state(const NetworkConfig& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  NetworkState s = initialize(c);
  for (int n = 1; n + 1 < c.N; ++n) {
    s.q[n].x += 15.0 * (U(rng) - 0.5);
    s.q[n].y += 15.0 * (U(rng) - 0.5);
  }
  for (int n = 0; n < c.N; ++n) {
    const Association a = associate(c, n);
    for (int i = 0; i < c.I; ++i) {
      if (a[i].empty()) continue;
      const double budget = c.P_max() * U(rng);
      s.common_power(n, i) = budget * U(rng);
      double rest = budget - s.common_power(n, i);
      for (int k : a[i]) {
        s.private_power(n, i, k) = rest * U(rng);
        rest -= s.private_power(n, i, k);
      }
    }
    for (double& t : s.phases(n)) t = 6.28 * U(rng);
  }
  s.rho = U(rng);
  return s;
}

}  // namespace

TEST_SUITE("rsma_swipt") {
  TEST_CASE("scalar kernels") {
    const double s2 = 1e-7, e2 = 1e-7;
    CHECK(common_rate(1e-3, 0.0, 0.1, 0.5, s2, e2) == 0.0);
    CHECK(common_rate(1e-3, 0.3, 0.1, 0.0, s2, e2) == 0.0);
    // Signal equal to the combined noise with no private streams: one bit.
    const double g = 1e-3;
    CHECK(common_rate(g, (s2 + e2) / g, 0.0, 1.0, s2, e2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(private_rate(g, 0.0, 0.2, 0.7, s2, e2) == 0.0);
    CHECK(harvested_energy(g, 0.5, 1.0, 0.97, 1.0) == 0.0);
    CHECK(harvested_energy(1.0, 1e-3, 0.0, 0.97, 1.0) == doctest::Approx(9.7e-4).epsilon(1e-14));
    // Half of the received power is diverted at rho = 0.5.
    CHECK(harvested_energy(g, 0.5, 0.5, 0.97, 1.0) ==
          doctest::Approx(0.5 * harvested_energy(g, 0.5, 0.0, 0.97, 1.0)));
  }

  TEST_CASE("reference scenario initial point matches the numpy oracle") {
    const NetworkConfig c = table1_config();
    const NetworkState s = initialize(c);
    const RateReport r = evaluate(s, c);
    const double private_sum = std::accumulate(r.R_p.begin(), r.R_p.end(), 0.0);
    const double cmin_sum = std::accumulate(r.R_c_min.begin(), r.R_c_min.end(), 0.0);
    CHECK(private_sum == doctest::Approx(reference::kTable1InitialPrivateSum).epsilon(1e-9));
    CHECK(cmin_sum == doctest::Approx(reference::kTable1InitialCommonMinSum).epsilon(1e-9));
    // C = 0 at the initial point, so the sum rate is the private sum.
    CHECK(r.sum_rate == doctest::Approx(reference::kTable1InitialPrivateSum).epsilon(1e-9));
    for (int k = 0; k < c.K; ++k)
      CHECK(r.energy_per_vehicle[k] ==
            doctest::Approx(reference::kTable1InitialEnergy[k]).epsilon(1e-9));
  }

  TEST_CASE("evaluate agrees with the independent re-evaluation") {
    const NetworkConfig c = table1_config();
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 3; ++trial) {
      NetworkState s = random_state(c, rng);
      allocate_common_shares(s, c, effective_gains(s, c));
      const RateReport a = evaluate(s, c);
      const RateReport b = oracle::recompute_report(s, c);
      CHECK(a.sum_rate == doctest::Approx(b.sum_rate).epsilon(1e-9));
      for (std::size_t j = 0; j < a.R_c.size(); ++j) {
        CHECK(a.R_c[j] == doctest::Approx(b.R_c[j]).epsilon(1e-9));
        CHECK(a.R_p[j] == doctest::Approx(b.R_p[j]).epsilon(1e-9));
        CHECK(a.Q[j] == doctest::Approx(b.Q[j]).epsilon(1e-9));
      }
      for (int k = 0; k < c.K; ++k)
        CHECK(a.energy_per_vehicle[k] == doctest::Approx(b.energy_per_vehicle[k]).epsilon(1e-9));
    }
  }

  TEST_CASE("degenerate states") {
    NetworkConfig c = table1_config();
    SUBCASE("zero power leaves only the shares") {
      NetworkState s = initialize(c);
      std::fill(s.p.begin(), s.p.end(), 0.0);
      s.share(30, 1, 1) = 0.25;
      const RateReport r = evaluate(s, c);
      CHECK(r.sum_rate == doctest::Approx(0.25));
      CHECK(has_kind(check_feasibility(s, c), ConstraintKind::CommonShare));
    }
    SUBCASE("nobody in coverage") {
      c.t_arrival = {1000.0, 1000.0, 1000.0, 1000.0};
      const NetworkState s = initialize(c);
      CHECK(evaluate(s, c).sum_rate == 0.0);
    }
  }

  TEST_CASE("feasibility checks") {
    NetworkConfig c = table1_config();
    NetworkState s = initialize(c);
    CHECK(check_feasibility(s, c).ok());

    SUBCASE("energy threshold alone binds with zero shares and rho = 0") {
      s.rho = 0.0;
      const RateReport r = evaluate(s, c);
      const double least = *std::min_element(r.energy_per_vehicle.begin(), r.energy_per_vehicle.end());
      c.E_th_dbm = 10.0 * std::log10(least * 0.999) + 30.0;
      CHECK(check_feasibility(s, c).ok());
      c.E_th_dbm = 10.0 * std::log10(least * 1.001) + 30.0;
      const FeasibilityReport f = check_feasibility(s, c);
      CHECK_FALSE(f.ok());
      for (const auto& v : f.violations) CHECK(v.kind == ConstraintKind::EnergyHarvest);
    }
    SUBCASE("budget met with equality") {
      const Association a = associate(c, 30);
      for (int i = 0; i < c.I; ++i) {
        if (a[i].empty()) continue;
        s.common_power(30, i) = c.P_max();
        for (int k : a[i]) s.private_power(30, i, k) = 0.0;
      }
      CHECK(check_feasibility(s, c, 1e-9).ok());
      for (int i = 0; i < c.I; ++i)
        if (!a[i].empty()) s.common_power(30, i) = c.P_max() * 1.001;
      CHECK(has_kind(check_feasibility(s, c, 1e-9), ConstraintKind::PowerBudget));
    }
    SUBCASE("share above the weakest common rate") {
      const RateReport r = evaluate(s, c);
      const Association a = associate(c, 30);
      int cell = -1;
      for (int i = 0; i < c.I; ++i)
        if (!a[i].empty()) cell = i;
      REQUIRE(cell >= 0);
      s.share(30, cell, a[cell][0]) = r.R_c_min[static_cast<std::size_t>(30) * c.I + cell] + 1e-3;
      const FeasibilityReport f = check_feasibility(s, c);
      REQUIRE(has_kind(f, ConstraintKind::CommonShare));
      bool located = false;
      for (const auto& v : f.violations)
        if (v.kind == ConstraintKind::CommonShare) located = v.n == 30 && v.i == cell;
      CHECK(located);
    }
    SUBCASE("other constraint families") {
      NetworkState t = s;
      t.rho = 1.2;
      CHECK(has_kind(check_feasibility(t, c), ConstraintKind::SplitRatio));
      t = s;
      t.p[t.power_index(10, 0, 1)] = -0.1;
      CHECK(has_kind(check_feasibility(t, c), ConstraintKind::Negativity));
      t = s;
      t.theta[0] = 7.0;
      CHECK(has_kind(check_feasibility(t, c), ConstraintKind::PhaseRange));
      t = s;
      t.q[3].z = 30.0;
      CHECK(has_kind(check_feasibility(t, c), ConstraintKind::Trajectory));
      t = s;
      // Vehicle 2 has not arrived in slot 0.
      t.private_power(0, 0, 2) = 0.1;
      CHECK(has_kind(check_feasibility(t, c), ConstraintKind::UnservedAllocation));
    }
  }

  TEST_CASE("dimension mismatch is reported") {
    const NetworkConfig c = table1_config();
    NetworkState s = initialize(c);
    s.C.pop_back();
    CHECK_THROWS_AS(evaluate(s, c), Error);
  }
}
