// SPDX-License-Identifier: Apache-2.0
#include "airs/surrogate.hpp"

#include <cmath>
#include <numbers>

#include "airs/error.hpp"

namespace airs {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_positive_slacks(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorCode::InvalidArgument, "non-positive slack variable");
}

}  // namespace

double GainConstants::operator()(double a, double b) const {
  const double s = a * b;
  return A + B / std::sqrt(s) + C / s;
}

double GainConstants::d_da(double a, double b) const {
  return -(B / (2.0 * a * std::sqrt(a * b)) + C / (a * a * b));
}

double GainConstants::d_db(double a, double b) const {
  return -(B / (2.0 * b * std::sqrt(a * b)) + C / (a * b * b));
}

GainConstants gain_constants(double d_direct, const NetworkConfig& cfg) {
  if (!(d_direct > 0)) throw Error(ErrorCode::InvalidArgument, "zero direct-path distance");
  const double h0 = cfg.h0();
  const double h1 = cfg.h1();
  const double M = cfg.M;
  return {h0 / (d_direct * d_direct), 2.0 * std::sqrt(h0) * h1 * M / d_direct, h1 * h1 * M * M};
}

GainBounds gain_bounds(const SlackVars& s, const GainConstants& g) {
  require_positive_slacks(s.u, s.v);
  require_positive_slacks(s.w, s.o);
  return {g(s.u, s.v), g(s.w, s.o)};
}

TaylorFamily log_argument(const GainConstants& g, double power, double a, double b, double rho,
                          double sigma2, double eps2) {
  require_positive_slacks(a, b);
  return {rho * (power * g(a, b) + sigma2) + eps2, rho * power * g.d_da(a, b),
          rho * power * g.d_db(a, b)};
}

SurrogateCoeffs trajectory_coeffs(const GainConstants& g, const PairPowers& powers,
                                  const SlackVars& e, double rho, const NetworkConfig& cfg) {
  const double sigma2 = cfg.sigma2();
  const double eps2 = cfg.eps2();
  SurrogateCoeffs c;
  c.gain = g;
  c.expansion = e;
  c.powers = powers;
  c.rho = rho;
  c.common_dag = log_argument(g, powers.total, e.u, e.v, rho, sigma2, eps2);
  c.common_ddag = log_argument(g, powers.privates, e.w, e.o, rho, sigma2, eps2);
  c.private_dag = log_argument(g, powers.privates, e.u, e.v, rho, sigma2, eps2);
  c.private_ddag = log_argument(g, powers.privates - powers.own, e.w, e.o, rho, sigma2, eps2);
  const double eh = cfg.zeta * (1.0 - rho) * cfg.delta * powers.total;
  c.J = eh * g(e.u, e.v);
  c.K = eh * g.d_da(e.u, e.v);
  c.L = eh * g.d_db(e.u, e.v);
  return c;
}

namespace {

// log2 X_dag(u, v) - log2 X_ddag(w, o), both linearized.
SlackAffine linearized_difference(const TaylorFamily& dag, const TaylorFamily& ddag,
                                  const SlackVars& e) {
  SlackAffine a;
  a.du = dag.Y / (dag.X * kLn2);
  a.dv = dag.Z / (dag.X * kLn2);
  a.dw = -ddag.Y / (ddag.X * kLn2);
  a.dout = -ddag.Z / (ddag.X * kLn2);
  a.constant = std::log2(dag.X) - std::log2(ddag.X) - a.du * e.u - a.dv * e.v - a.dw * e.w -
               a.dout * e.o;
  return a;
}

double linearized_signal(const TaylorFamily& dag, const SlackVars& e, const SlackVars& s) {
  return std::log2(dag.X) + dag.Y / (dag.X * kLn2) * (s.u - e.u) +
         dag.Z / (dag.X * kLn2) * (s.v - e.v);
}

}  // namespace

RateSurrogates trajectory_rate_surrogates(const SurrogateCoeffs& c) {
  return {linearized_difference(c.common_dag, c.common_ddag, c.expansion),
          linearized_difference(c.private_dag, c.private_ddag, c.expansion)};
}

SlackAffine eh_lower_bound(const SurrogateCoeffs& c) {
  SlackAffine a;
  a.du = c.K;
  a.dv = c.L;
  a.constant = c.J - c.K * c.expansion.u - c.L * c.expansion.v;
  return a;
}

double common_rate_lb_concave(const SurrogateCoeffs& c, const SlackVars& s,
                              const NetworkConfig& cfg) {
  const TaylorFamily x = log_argument(c.gain, c.powers.privates, s.w, s.o, c.rho, cfg.sigma2(),
                                      cfg.eps2());
  return linearized_signal(c.common_dag, c.expansion, s) - std::log2(x.X);
}

double private_rate_lb_concave(const SurrogateCoeffs& c, const SlackVars& s,
                               const NetworkConfig& cfg) {
  const TaylorFamily x = log_argument(c.gain, c.powers.privates - c.powers.own, s.w, s.o, c.rho,
                                      cfg.sigma2(), cfg.eps2());
  return linearized_signal(c.private_dag, c.expansion, s) - std::log2(x.X);
}

double DcRate::value(std::span<const double> x) const {
  if (x.size() != arg.size() || x.size() != lin.size())
    throw Error(ErrorCode::Dimension, "DC form evaluated with wrong variable count");
  double a = arg_constant;
  double l = lin_constant;
  for (std::size_t j = 0; j < x.size(); ++j) {
    a += arg[j] * x[j];
    l += lin[j] * x[j];
  }
  return std::log2(a) - l;
}

namespace {

// Linearization of log2(rho (sum_{j in S} p_j g + sigma2) + eps2) in p at pe,
// S given by the mask.
void linearize_power_log(DcRate& out, double g, std::span<const double> pe,
                         const std::vector<bool>& in_set, double rho, double sigma2, double eps2) {
  double base = rho * sigma2 + eps2;
  for (std::size_t j = 0; j < pe.size(); ++j)
    if (in_set[j]) base += rho * g * pe[j];
  out.lin.assign(pe.size(), 0.0);
  out.lin_constant = std::log2(base);
  for (std::size_t j = 0; j < pe.size(); ++j)
    if (in_set[j]) {
      out.lin[j] = rho * g / (kLn2 * base);
      out.lin_constant -= out.lin[j] * pe[j];
    }
}

}  // namespace

CellDc dc1_rates(std::span<const double> gains, std::span<const double> pe, double rho,
                 double sigma2, double eps2) {
  const std::size_t served = gains.size();
  if (pe.size() != served + 1) throw Error(ErrorCode::Dimension, "cell power vector size mismatch");
  CellDc out;
  for (std::size_t k = 0; k < served; ++k) {
    const double g = gains[k];
    DcRate c;
    c.arg_constant = rho * sigma2 + eps2;
    c.arg.assign(served + 1, rho * g);
    std::vector<bool> privates(served + 1, true);
    privates[0] = false;
    linearize_power_log(c, g, pe, privates, rho, sigma2, eps2);
    out.common.push_back(std::move(c));

    DcRate r;
    r.arg_constant = rho * sigma2 + eps2;
    r.arg.assign(served + 1, rho * g);
    r.arg[0] = 0.0;
    std::vector<bool> others = privates;
    others[k + 1] = false;
    linearize_power_log(r, g, pe, others, rho, sigma2, eps2);
    out.priv.push_back(std::move(r));
  }
  return out;
}

CellDc dc2_rates(std::span<const double> gains, std::span<const double> p, double rho_e,
                 double sigma2, double eps2) {
  const std::size_t served = gains.size();
  if (p.size() != served + 1) throw Error(ErrorCode::Dimension, "cell power vector size mismatch");
  double privates = 0.0;
  for (std::size_t j = 1; j <= served; ++j) privates += p[j];
  const double total = privates + p[0];
  auto make = [&](double signal_power, double interference_power, double g) {
    DcRate d;
    d.arg_constant = eps2;
    d.arg = {signal_power * g + sigma2};
    const double b = interference_power * g + sigma2;
    const double base = rho_e * b + eps2;
    d.lin = {b / (kLn2 * base)};
    d.lin_constant = std::log2(base) - d.lin[0] * rho_e;
    return d;
  };
  CellDc out;
  for (std::size_t k = 0; k < served; ++k) {
    out.common.push_back(make(total, privates, gains[k]));
    out.priv.push_back(make(privates, privates - p[k + 1], gains[k]));
  }
  return out;
}

}  // namespace airs
