// SPDX-License-Identifier: Apache-2.0
// Shared helpers for the unit and acceptance binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "airs/config.hpp"
#include "airs/scenario.hpp"

namespace airs::testing {

inline bool rel_close(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

// Five-point central difference of f at x with step h.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// One served (RSU, vehicle) pair of the reference scenario, seen from a random
// AIRS position in a random slot, plus a random power split of its cell.
struct RandomPair {
  SlotGeometry geom;
  int i = -1;
  int k = -1;
  int served = 0;             // vehicles in the cell
  int pos = 0;                // position of k within the cell
  double d_direct = 0.0;
  double a = 0.0;             // d_av^2
  double b = 0.0;             // d_ra^2
  std::vector<double> cell_p; // [common, privates of the served vehicles]
  double rho = 0.5;
};

inline RandomPair random_pair(const NetworkConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    RandomPair r;
    const int n = static_cast<int>(U(rng) * cfg.N) % cfg.N;
    const Vec3 q{cfg.q0.x - 200.0 + U(rng) * (cfg.qf.x - cfg.q0.x + 400.0),
                 -60.0 + 120.0 * U(rng), cfg.H_U};
    r.geom = slot_geometry(cfg, n, q);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < cfg.I; ++i)
      for (int k : r.geom.assoc[i]) pairs.emplace_back(i, k);
    if (pairs.empty()) continue;
    const auto [i, k] = pairs[static_cast<std::size_t>(U(rng) * pairs.size()) % pairs.size()];
    r.i = i;
    r.k = k;
    const auto& cell = r.geom.assoc[i];
    r.served = static_cast<int>(cell.size());
    r.pos = static_cast<int>(std::find(cell.begin(), cell.end(), k) - cell.begin());
    r.d_direct = r.geom.direct(i, k);
    r.a = r.geom.d_av[k] * r.geom.d_av[k];
    r.b = r.geom.d_ra[i] * r.geom.d_ra[i];
    // Random point of the power simplex scaled by a random budget fraction.
    std::vector<double> e(r.served + 1);
    double sum = 0.0;
    for (double& x : e) sum += (x = -std::log(1.0 - U(rng)));
    const double budget = cfg.P_max() * (0.05 + 0.95 * U(rng));
    for (double& x : e) x *= budget / sum;
    r.cell_p = e;
    r.rho = 0.01 + 0.98 * U(rng);
    return r;
  }
}

}  // namespace airs::testing
