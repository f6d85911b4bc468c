// SPDX-License-Identifier: Apache-2.0
#include "airs/channel.hpp"

#include <cmath>
#include <numbers>

#include "airs/error.hpp"

namespace airs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double d, const char* what) {
  if (!(d > 0)) throw Error(ErrorCode::InvalidArgument, std::string("zero ") + what + " distance");
}

}  // namespace

double direct_channel(double d_direct, const NetworkConfig& cfg) {
  require_positive(d_direct, "direct-path");
  return std::sqrt(cfg.h0()) / d_direct;
}

std::vector<cplx> steering_vector(double d, double cos_phi, const NetworkConfig& cfg) {
  require_positive(d, "AIRS link");
  const double mag = std::sqrt(cfg.h1()) / d;
  const double ramp = kTwoPi / cfg.lambda * cfg.d_M * cos_phi;
  std::vector<cplx> a(cfg.M);
  for (int m = 0; m < cfg.M; ++m) a[m] = std::polar(mag, -ramp * m);
  return a;
}

SteeringPair steering_channels(const SlotGeometry& geom, int i, int k, const NetworkConfig& cfg) {
  return {steering_vector(geom.d_ra[i], geom.cos_phi_in[i], cfg),
          steering_vector(geom.d_av[k], geom.cos_phi_out[k], cfg)};
}

cplx effective_channel(const SlotGeometry& geom, int i, int k, std::span<const double> theta,
                       const NetworkConfig& cfg) {
  if (static_cast<int>(theta.size()) != cfg.M)
    throw Error(ErrorCode::Dimension, "phase vector must have M entries");
  cplx h = direct_channel(geom.direct(i, k), cfg);
  if (cfg.M == 0) return h;
  const auto [h_ra, g_av] = steering_channels(geom, i, k, cfg);
  for (int m = 0; m < cfg.M; ++m) h += std::conj(g_av[m]) * std::polar(1.0, theta[m]) * h_ra[m];
  return h;
}

double normalize_phase(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2 pi
  if (t >= kTwoPi) t = 0.0;
  return t;
}

std::vector<double> optimal_phase(const SlotGeometry& geom, int i, int k, const NetworkConfig& cfg) {
  const double ramp =
      kTwoPi / cfg.lambda * cfg.d_M * (geom.cos_phi_in[i] - geom.cos_phi_out[k]);
  std::vector<double> theta(cfg.M);
  for (int m = 0; m < cfg.M; ++m) theta[m] = normalize_phase(ramp * m);
  return theta;
}

double aligned_gain(double d_direct, double d_ra, double d_av, const NetworkConfig& cfg) {
  require_positive(d_direct, "direct-path");
  require_positive(d_ra, "RSU-AIRS");
  require_positive(d_av, "AIRS-vehicle");
  return std::sqrt(cfg.h0()) / d_direct + cfg.h1() * cfg.M / (d_ra * d_av);
}

double aligned_effective_gain(const SlotGeometry& geom, int i, int k, const NetworkConfig& cfg) {
  return aligned_gain(geom.direct(i, k), geom.d_ra[i], geom.d_av[k], cfg);
}

std::optional<ServingPair> alignment_target(const SlotGeometry& geom) {
  std::optional<ServingPair> best;
  double best_d = 0.0;
  for (int i = 0; i < geom.I; ++i) {
    if (geom.assoc[i].empty()) continue;
    if (!best || geom.d_ra[i] < best_d) {
      best = ServingPair{i, -1};
      best_d = geom.d_ra[i];
    }
  }
  if (!best) return best;
  double worst = -1.0;
  for (int k : geom.assoc[best->rsu]) {
    if (geom.direct(best->rsu, k) > worst) {
      worst = geom.direct(best->rsu, k);
      best->vehicle = k;
    }
  }
  return best;
}

std::vector<double> slot_phase_profile(const SlotGeometry& geom, const NetworkConfig& cfg) {
  if (const auto target = alignment_target(geom))
    return optimal_phase(geom, target->rsu, target->vehicle, cfg);
  return std::vector<double>(cfg.M, 0.0);
}

}  // namespace airs
