// SPDX-License-Identifier: Apache-2.0
#include "airs/scenario.hpp"

#include <cmath>

#include "airs/error.hpp"

namespace airs {

Vec2 rsu_position(const NetworkConfig& cfg, int i) {
  if (i < 0 || i >= cfg.I)
    throw Error(ErrorCode::InvalidArgument, "RSU index " + std::to_string(i) + " out of range");
  return {cfg.r_rsu + i * cfg.d_rsu, 0.0};
}

Vec2 vehicle_position(const NetworkConfig& cfg, int k, int n) {
  const int lane = cfg.lane_of.at(k);
  const double t = (n + 1) * cfg.delta - cfg.t_arrival.at(k);
  return {t * cfg.v.at(lane - 1), (lane - 1) * cfg.d_lane};
}

int serving_rsu(const NetworkConfig& cfg, int k, int n) {
  const double x = vehicle_position(cfg, k, n).x;
  if (x < 0) return -1;
  int best = -1;
  double best_d = 0.0;
  for (int i = 0; i < cfg.I; ++i) {
    const double d = std::abs(x - (cfg.r_rsu + i * cfg.d_rsu));
    if (d <= cfg.r_rsu && (best < 0 || d < best_d)) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

Association associate(const NetworkConfig& cfg, int n) {
  Association a(cfg.I);
  for (int k = 0; k < cfg.K; ++k) {
    const int i = serving_rsu(cfg, k, n);
    if (i >= 0) a[i].push_back(k);
  }
  return a;
}

SlotGeometry slot_geometry(const NetworkConfig& cfg, int n, const Vec3& airs) {
  SlotGeometry g;
  g.n = n;
  g.I = cfg.I;
  g.K = cfg.K;
  g.airs = airs;
  g.assoc.assign(cfg.I, {});
  g.serving.assign(cfg.K, -1);
  for (int i = 0; i < cfg.I; ++i) {
    const Vec2 p = rsu_position(cfg, i);
    g.rsu_pos.push_back(p);
    const double d = distance(airs, Vec3{p.x, p.y, 0.0});
    g.d_ra.push_back(d);
    g.cos_phi_in.push_back((p.x - airs.x) / d);
  }
  for (int k = 0; k < cfg.K; ++k) {
    const Vec2 p = vehicle_position(cfg, k, n);
    g.vehicle_pos.push_back(p);
    const double d = distance(airs, Vec3{p.x, p.y, 0.0});
    g.d_av.push_back(d);
    g.cos_phi_out.push_back((p.x - airs.x) / d);
    const int i = serving_rsu(cfg, k, n);
    g.serving[k] = i;
    if (i >= 0) g.assoc[i].push_back(k);
  }
  g.d_direct.resize(static_cast<std::size_t>(cfg.I) * cfg.K);
  for (int i = 0; i < cfg.I; ++i)
    for (int k = 0; k < cfg.K; ++k) {
      const double dx = g.rsu_pos[i].x - g.vehicle_pos[k].x;
      const double dy = g.rsu_pos[i].y - g.vehicle_pos[k].y;
      g.d_direct[static_cast<std::size_t>(i) * cfg.K + k] =
          std::max(cfg.d_ref, std::sqrt(dx * dx + dy * dy));
    }
  return g;
}

std::vector<Vec3> straight_line(const NetworkConfig& cfg) {
  std::vector<Vec3> q(cfg.N);
  for (int n = 0; n < cfg.N; ++n) {
    const double s = static_cast<double>(n) / (cfg.N - 1);
    q[n] = {cfg.q0.x + s * (cfg.qf.x - cfg.q0.x), cfg.q0.y + s * (cfg.qf.y - cfg.q0.y),
            cfg.q0.z + s * (cfg.qf.z - cfg.q0.z)};
  }
  return q;
}

std::string TrajectoryViolation::describe() const {
  const auto mag = std::to_string(magnitude);
  switch (check) {
    case TrajectoryCheck::Length:
      return "trajectory length mismatch";
    case TrajectoryCheck::InitialEndpoint:
      return "initial endpoint off by " + mag + " m";
    case TrajectoryCheck::FinalEndpoint:
      return "final endpoint off by " + mag + " m";
    case TrajectoryCheck::Altitude:
      return "altitude, slot " + std::to_string(slot) + " off by " + mag + " m";
    case TrajectoryCheck::Speed:
      return "speed, slot " + std::to_string(slot) + " exceeds limit by " + mag + " m";
  }
  return "unknown";
}

std::optional<TrajectoryViolation> validate_trajectory(const std::vector<Vec3>& q,
                                                       const NetworkConfig& cfg, double tol) {
  if (static_cast<int>(q.size()) != cfg.N)
    return TrajectoryViolation{TrajectoryCheck::Length, -1,
                               std::abs(static_cast<double>(q.size()) - cfg.N)};
  if (const double e = distance(q.front(), cfg.q0); e > tol)
    return TrajectoryViolation{TrajectoryCheck::InitialEndpoint, 0, e};
  if (const double e = distance(q.back(), cfg.qf); e > tol)
    return TrajectoryViolation{TrajectoryCheck::FinalEndpoint, cfg.N - 1, e};
  for (int n = 0; n < cfg.N; ++n)
    if (const double e = std::abs(q[n].z - cfg.H_U); e > tol)
      return TrajectoryViolation{TrajectoryCheck::Altitude, n, e};
  const double step = cfg.V_max * cfg.delta;
  for (int n = 1; n < cfg.N; ++n)
    if (const double e = distance(q[n], q[n - 1]) - step; e > tol)
      return TrajectoryViolation{TrajectoryCheck::Speed, n, e};
  return std::nullopt;
}

}  // namespace airs
