// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "airs/config.hpp"

namespace airs {

// Indices are zero based throughout: RSU i in [0, I), vehicle k in [0, K),
// slot n in [0, N). Slot n ends at time (n + 1) * delta.

Vec2 rsu_position(const NetworkConfig& cfg, int i);

// Negative x means the vehicle has not reached the first coverage edge yet.
Vec2 vehicle_position(const NetworkConfig& cfg, int k, int n);

// Serving RSU of vehicle k in slot n: nearest by horizontal distance, ties to
// the lower index, -1 when the vehicle is outside every coverage disc or has
// not arrived.
int serving_rsu(const NetworkConfig& cfg, int k, int n);

// Per-RSU lists of served vehicles, each sorted ascending.
using Association = std::vector<std::vector<int>>;
Association associate(const NetworkConfig& cfg, int n);

struct SlotGeometry {
  int n = 0;
  int I = 0;
  int K = 0;
  Vec3 airs;
  std::vector<Vec2> vehicle_pos;  // K
  std::vector<Vec2> rsu_pos;      // I
  Association assoc;              // I lists
  std::vector<int> serving;       // K, -1 if unserved
  std::vector<double> d_direct;   // I*K, floored at d_ref
  std::vector<double> d_ra;       // I
  std::vector<double> d_av;       // K
  std::vector<double> cos_phi_in;   // I, arrival angle at the AIRS
  std::vector<double> cos_phi_out;  // K, departure angle from the AIRS

  double direct(int i, int k) const { return d_direct[static_cast<std::size_t>(i) * K + k]; }
};

SlotGeometry slot_geometry(const NetworkConfig& cfg, int n, const Vec3& airs);

// Uniform straight line from q0 to qf over N slots.
std::vector<Vec3> straight_line(const NetworkConfig& cfg);

enum class TrajectoryCheck { Length, InitialEndpoint, FinalEndpoint, Altitude, Speed };

struct TrajectoryViolation {
  TrajectoryCheck check;
  int slot = -1;
  double magnitude = 0.0;
  std::string describe() const;
};

// First violated trajectory constraint, or nullopt when q is admissible.
std::optional<TrajectoryViolation> validate_trajectory(const std::vector<Vec3>& q,
                                                       const NetworkConfig& cfg,
                                                       double tol_feas = 1e-6);

}  // namespace airs
