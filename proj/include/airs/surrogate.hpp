// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "airs/config.hpp"

namespace airs {

// |h_aligned|^2 written as a function of squared distances a = d_av^2 and
// b = d_ra^2:  A + B / sqrt(a b) + C / (a b), with
//   A = h0 / d_ik^2,  B = 2 sqrt(h0) h1 M / d_ik,  C = h1^2 M^2.
// This is a convex function, decreasing in both arguments.
struct GainConstants {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  double operator()(double a, double b) const;
  double d_da(double a, double b) const;
  double d_db(double a, double b) const;
};

GainConstants gain_constants(double d_direct, const NetworkConfig& cfg);

struct SlackVars {
  double u = 0.0;  // >= d_av^2
  double v = 0.0;  // >= d_ra^2
  double w = 0.0;  // <= linearized d_av^2
  double o = 0.0;  // <= linearized d_ra^2
};

struct GainBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// lower <= |h|^2 <= upper whenever u, v >= the true squared distances >= w, o.
GainBounds gain_bounds(const SlackVars& s, const GainConstants& g);

// Power sums of one served pair: total = common + all private streams of the
// cell, privates = all private streams, own = this vehicle's private stream.
struct PairPowers {
  double total = 0.0;
  double privates = 0.0;
  double own = 0.0;
};

// rho (P * g(a, b) + sigma2) + eps2 together with its partials in a and b.
struct TaylorFamily {
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
};

TaylorFamily log_argument(const GainConstants& g, double power, double a, double b, double rho,
                          double sigma2, double eps2);

// Coefficients of the trajectory-block surrogates for one (i, k, n), built at
// an expansion point where u = w = d_av^2 and v = o = d_ra^2.
//   common_dag   (X/Y/Z dagger):  signal-inclusive log, all streams, in (u, v)
//   common_ddag  (X/Y/Z ddagger): interference log, private streams, in (w, o)
//   private_dag  (F/G/I dagger):  all private streams, in (u, v)
//   private_ddag (F/G/I ddagger): private streams except own, in (w, o)
//   J, K, L: harvested-energy value and its partials in u and v (joules).
struct SurrogateCoeffs {
  GainConstants gain;
  TaylorFamily common_dag;
  TaylorFamily common_ddag;
  TaylorFamily private_dag;
  TaylorFamily private_ddag;
  double J = 0.0;
  double K = 0.0;
  double L = 0.0;
  SlackVars expansion;
  PairPowers powers;
  double rho = 0.0;
};

SurrogateCoeffs trajectory_coeffs(const GainConstants& g, const PairPowers& powers,
                                  const SlackVars& expansion, double rho, const NetworkConfig& cfg);

// c + du u + dv v + dw w + dout o, in bit/s/Hz (rates) or joules (energy).
struct SlackAffine {
  double constant = 0.0;
  double du = 0.0;
  double dv = 0.0;
  double dw = 0.0;
  double dout = 0.0;

  double operator()(const SlackVars& s) const {
    return constant + du * s.u + dv * s.v + dw * s.w + dout * s.o;
  }
};

struct RateSurrogates {
  SlackAffine common;
  SlackAffine priv;
};

// First-order expansions of both logs of the common and private rates.
RateSurrogates trajectory_rate_surrogates(const SurrogateCoeffs& c);

// Affine lower bound on harvested energy in (u, v).
SlackAffine eh_lower_bound(const SurrogateCoeffs& c);

// Rate lower bounds that keep the interference log exact instead of
// linearizing it. The signal log is linearized as above; the interference
// log -log2 X(w, o) is concave in (w, o), so the result is concave and a
// global minorizer of the exact rate on the slack-feasible set.
double common_rate_lb_concave(const SurrogateCoeffs& c, const SlackVars& s,
                              const NetworkConfig& cfg);
double private_rate_lb_concave(const SurrogateCoeffs& c, const SlackVars& s,
                               const NetworkConfig& cfg);

// log2(arg_constant + arg . x) - (lin_constant + lin . x): a concave minorant
// of a rate, produced by linearizing the subtracted log at an expansion point.
struct DcRate {
  double arg_constant = 0.0;
  std::vector<double> arg;
  double lin_constant = 0.0;
  std::vector<double> lin;

  double value(std::span<const double> x) const;
};

struct CellDc {
  std::vector<DcRate> common;  // one per served vehicle
  std::vector<DcRate> priv;
};

// Power block. Variables x = [p_common, p_1, ..., p_Ki] of one cell; gains are
// |h_eff|^2 of the served vehicles in the same order; p_expansion has the
// layout of x.
CellDc dc1_rates(std::span<const double> gains, std::span<const double> p_expansion, double rho,
                 double sigma2, double eps2);

// Split-ratio block. Variable x = [rho]; powers p are fixed (layout as above).
CellDc dc2_rates(std::span<const double> gains, std::span<const double> p, double rho_expansion,
                 double sigma2, double eps2);

}  // namespace airs
