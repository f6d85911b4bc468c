// SPDX-License-Identifier: Apache-2.0
#include "airs/convex.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "airs/error.hpp"

namespace airs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Constraints whose gradient touches more variables than this contribute
// their rank-one barrier curvature through a Woodbury correction instead of
// a dense block in the sparse factor.
constexpr std::size_t kDenseSupport = 48;

using SparseVec = std::vector<std::pair<int, double>>;
using Triplets = std::vector<Eigen::Triplet<double>>;

void merge(SparseVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (out > 0 && v[out - 1].first == v[i].first)
      v[out - 1].second += v[i].second;
    else
      v[out++] = v[i];
  }
  v.resize(out);
}

void normalize(LinearForm& f) { merge(f.terms); }

void normalize(ConcaveExpr& e) {
  normalize(e.affine);
  for (auto& l : e.logs) normalize(l.arg);
  for (auto& s : e.squares) normalize(s.arg);
}

// Lower-triangular outer product scale * a a^T for a sorted, merged form.
void push_outer(Triplets& h, const SparseVec& a, double scale) {
  for (std::size_t p = 0; p < a.size(); ++p)
    for (std::size_t q = 0; q <= p; ++q)
      h.emplace_back(a[p].first, a[q].first, scale * a[p].second * a[q].second);
}

struct InvProductDerivs {
  double value = 0.0;  // -w ln h
  double da = 0.0;
  double db = 0.0;
  double daa = 0.0;
  double dab = 0.0;
  double dbb = 0.0;
};

bool inv_product(const InvProductLogTerm& t, double xa, double xb, InvProductDerivs& d) {
  if (!(xa > 0) || !(xb > 0)) return false;
  const double s = xa * xb;
  const double rs = 1.0 / std::sqrt(s);
  const double h = t.c0 + t.c1 * rs + t.c2 / s;
  if (!(h > 0)) return false;
  // h as a function of ln(xa xb): first and second derivatives -P and R.
  const double P = 0.5 * t.c1 * rs + t.c2 / s;
  const double R = 0.25 * t.c1 * rs + t.c2 / s;
  const double F1 = -P / h;
  const double F2 = (R * h - P * P) / (h * h);
  d.value = -t.weight * std::log(h);
  d.da = -t.weight * F1 / xa;
  d.db = -t.weight * F1 / xb;
  d.daa = -t.weight * (F2 - F1) / (xa * xa);
  d.dbb = -t.weight * (F2 - F1) / (xb * xb);
  d.dab = -t.weight * F2 / s;
  return true;
}

void gradient(const ConcaveExpr& e, std::span<const double> x, double scale, SparseVec& out) {
  for (const auto& [j, c] : e.affine.terms) out.emplace_back(j, scale * c);
  for (const auto& l : e.logs) {
    const double f = scale * l.weight / l.arg(x);
    for (const auto& [j, c] : l.arg.terms) out.emplace_back(j, f * c);
  }
  for (const auto& s : e.squares) {
    const double f = -2.0 * scale * s.weight * s.arg(x);
    for (const auto& [j, c] : s.arg.terms) out.emplace_back(j, f * c);
  }
  for (const auto& t : e.inv_logs) {
    InvProductDerivs d;
    inv_product(t, x[t.a], x[t.b], d);
    out.emplace_back(t.a, scale * d.da);
    out.emplace_back(t.b, scale * d.db);
  }
}

void hessian(const ConcaveExpr& e, std::span<const double> x, double scale, Triplets& out) {
  for (const auto& l : e.logs) {
    const double a = l.arg(x);
    push_outer(out, l.arg.terms, -scale * l.weight / (a * a));
  }
  for (const auto& s : e.squares) push_outer(out, s.arg.terms, -2.0 * scale * s.weight);
  for (const auto& t : e.inv_logs) {
    InvProductDerivs d;
    inv_product(t, x[t.a], x[t.b], d);
    out.emplace_back(t.a, t.a, scale * d.daa);
    out.emplace_back(t.b, t.b, scale * d.dbb);
    if (t.a > t.b)
      out.emplace_back(t.a, t.b, scale * d.dab);
    else if (t.b > t.a)
      out.emplace_back(t.b, t.a, scale * d.dab);
    else
      out.emplace_back(t.a, t.a, 2.0 * scale * d.dab);
  }
}

// Log-barrier function phi_t(x) = -t f(x) - sum ln g_j(x) - box logs.
class Barrier {
 public:
  Barrier(const ConvexSubproblem& p, const ConcaveExpr* guard) : p_(p), guard_(guard) {
    for (int i = 0; i < p.num_vars; ++i) {
      if (std::isfinite(p.lower[i])) ++m_;
      if (std::isfinite(p.upper[i])) ++m_;
    }
    m_ += static_cast<int>(p.constraints.size());
  }

  int m() const { return m_; }

  double phi(std::span<const double> x, double t) const {
    const int n = p_.num_vars;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double lo = x[i] - p_.lower[i];
      const double hi = p_.upper[i] - x[i];
      if (!(lo > 0) || !(hi > 0)) return kInf;
      if (std::isfinite(lo)) sum -= std::log(lo);
      if (std::isfinite(hi)) sum -= std::log(hi);
    }
    if (guard_ && !std::isfinite((*guard_)(x))) return kInf;
    const double f = p_.objective(x);
    if (!std::isfinite(f)) return kInf;
    for (const auto& c : p_.constraints) {
      const double g = c(x);
      if (!(g > 0)) return kInf;
      sum -= std::log(g);
    }
    return sum - t * f;
  }

  // Newton direction d and gradient of phi_t at x. Returns false if the
  // linear system could not be solved.
  bool newton(std::span<const double> x, double t, Eigen::VectorXd& grad, Eigen::VectorXd& d) {
    const int n = p_.num_vars;
    grad.setZero(n);
    Triplets trip;
    std::vector<SparseVec> low_rank;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);

    SparseVec gv;
    gradient(p_.objective, x, -t, gv);
    for (const auto& [j, c] : gv) grad[j] += c;
    hessian(p_.objective, x, -t, trip);

    for (const auto& c : p_.constraints) {
      const double g = c(x);
      gv.clear();
      gradient(c, x, 1.0, gv);
      merge(gv);
      for (const auto& [j, v] : gv) grad[j] -= v / g;
      if (gv.size() <= kDenseSupport) {
        push_outer(trip, gv, 1.0 / (g * g));
      } else {
        for (auto& e : gv) e.second /= g;
        low_rank.push_back(gv);
      }
      hessian(c, x, -1.0 / g, trip);
    }
    for (int i = 0; i < n; ++i) {
      double h = 0.0;
      if (std::isfinite(p_.lower[i])) {
        const double r = 1.0 / (x[i] - p_.lower[i]);
        grad[i] -= r;
        h += r * r;
      }
      if (std::isfinite(p_.upper[i])) {
        const double r = 1.0 / (p_.upper[i] - x[i]);
        grad[i] += r;
        h += r * r;
      }
      trip.emplace_back(i, i, h);
    }
    for (const auto& tr : trip)
      if (tr.row() == tr.col()) diag[tr.row()] += tr.value();

    Eigen::SparseMatrix<double> S(n, n);
    S.setFromTriplets(trip.begin(), trip.end());
    S.makeCompressed();
    if (!analyzed_) {
      ldlt_.analyzePattern(S);
      analyzed_ = true;
    }
    const double scale = 1.0 + diag.cwiseAbs().maxCoeff();
    Eigen::SparseMatrix<double> I(n, n);
    I.setIdentity();
    ldlt_.factorize(S);
    // Each pivot is judged against its own diagonal entry: near-active
    // constraints spread the diagonal over many orders of magnitude.
    bool ok = ldlt_.info() == Eigen::Success;
    if (ok) {
      const Eigen::VectorXd pd = ldlt_.permutationP() * diag;
      const Eigen::VectorXd& D = ldlt_.vectorD();
      for (int i = 0; i < n && ok; ++i) ok = D[i] > 1e-14 * std::max(pd[i], 1e-300);
    }
    double reg = 1e-12 * scale;
    for (int attempt = 0; attempt < 8 && !ok; ++attempt, reg *= 100.0) {
      Eigen::SparseMatrix<double> Sr = S + reg * I;
      ldlt_.factorize(Sr);
      ok = ldlt_.info() == Eigen::Success && ldlt_.vectorD().minCoeff() > 0;
    }
    if (!ok) return false;

    d = ldlt_.solve(-grad);
    if (!low_rank.empty()) {
      const int r = static_cast<int>(low_rank.size());
      Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, r);
      for (int c = 0; c < r; ++c)
        for (const auto& [j, v] : low_rank[c]) U(j, c) = v;
      const Eigen::MatrixXd Z = ldlt_.solve(U);
      Eigen::MatrixXd cap = Eigen::MatrixXd::Identity(r, r) + U.transpose() * Z;
      d -= Z * cap.ldlt().solve(U.transpose() * d);
    }
    return d.allFinite();
  }

 private:
  const ConvexSubproblem& p_;
  const ConcaveExpr* guard_;
  int m_ = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  bool analyzed_ = false;
};

struct BarrierRun {
  std::vector<double> x;
  double t = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stopped_early = false;
};

template <class EarlyExit>
BarrierRun run_barrier(const ConvexSubproblem& p, std::vector<double> x, const SolveOptions& opt,
                       const ConcaveExpr* guard, EarlyExit early_exit) {
  Barrier bar(p, guard);
  BarrierRun run;
  const int n = p.num_vars;
  const int m = bar.m();
  const double f0 = p.objective(x);
  run.t = m > 0 ? std::max(1e-8, m / (1.0 + std::abs(f0))) : 1.0;
  Eigen::VectorXd grad(n), d(n);
  std::vector<double> trial(n);
  const double newton_tol = 1e-9;

  for (;;) {
    // centering
    for (;;) {
      if (run.iterations >= opt.max_iter) {
        run.x = std::move(x);
        return run;
      }
      if (!bar.newton(x, run.t, grad, d)) break;
      const double slope = grad.dot(d);
      const double phi0 = bar.phi(x, run.t);
      // Below this the decrement is lost in the rounding of phi itself.
      if (-slope / 2.0 <= std::max(newton_tol, 1e-13 * std::abs(phi0))) break;
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-10) {
        for (int i = 0; i < n; ++i) trial[i] = x[i] + alpha * d[i];
        const double phi1 = bar.phi(trial, run.t);
        if (std::isfinite(phi1) && phi1 <= phi0 + 0.01 * alpha * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
      x.swap(trial);
      ++run.iterations;
      if (early_exit(x)) {
        run.stopped_early = true;
        run.x = std::move(x);
        return run;
      }
    }
    if (m == 0 || m / run.t <= opt.tol * (1.0 + std::abs(p.objective(x)))) {
      run.converged = true;
      run.x = std::move(x);
      return run;
    }
    run.t *= opt.mu;
  }
}

// Pull a start point strictly inside its box.
void interiorize(const ConvexSubproblem& p, std::vector<double>& x) {
  for (int i = 0; i < p.num_vars; ++i) {
    const double lo = p.lower[i];
    const double hi = p.upper[i];
    const double width = hi - lo;
    double margin = 1e-9 * (1.0 + std::max(std::abs(std::isfinite(lo) ? lo : 0.0),
                                           std::abs(std::isfinite(hi) ? hi : 0.0)));
    if (std::isfinite(width)) margin = std::min(margin, 0.25 * width);
    if (x[i] < lo + margin) x[i] = lo + margin;
    if (x[i] > hi - margin) x[i] = hi - margin;
  }
}

ConcaveExpr scaled(const ConcaveExpr& e, double tau) {
  ConcaveExpr out = e;
  out.affine.constant *= tau;
  for (auto& t : out.affine.terms) t.second *= tau;
  for (auto& l : out.logs) l.weight *= tau;
  for (auto& q : out.squares) q.weight *= tau;
  for (auto& t : out.inv_logs) t.weight *= tau;
  return out;
}

double min_constraint(const ConvexSubproblem& p, std::span<const double> x) {
  double g = kInf;
  for (const auto& c : p.constraints) g = std::min(g, c(x));
  return g;
}

}  // namespace

double LinearForm::operator()(std::span<const double> x) const {
  double s = constant;
  for (const auto& [j, c] : terms) s += c * x[j];
  return s;
}

double ConcaveExpr::operator()(std::span<const double> x) const {
  double s = affine(x);
  for (const auto& l : logs) {
    const double a = l.arg(x);
    if (!(a > 0)) return -kInf;
    s += l.weight * std::log(a);
  }
  for (const auto& q : squares) {
    const double a = q.arg(x);
    s -= q.weight * a * a;
  }
  for (const auto& t : inv_logs) {
    InvProductDerivs d;
    if (!inv_product(t, x[t.a], x[t.b], d)) return -kInf;
    s += d.value;
  }
  return s;
}

int ConcaveExpr::max_index() const {
  int m = -1;
  auto scan = [&m](const LinearForm& f) {
    for (const auto& [j, c] : f.terms) m = std::max(m, j);
  };
  scan(affine);
  for (const auto& l : logs) scan(l.arg);
  for (const auto& q : squares) scan(q.arg);
  for (const auto& t : inv_logs) m = std::max({m, t.a, t.b});
  return m;
}

int ConvexSubproblem::add_var(std::string name, double lo, double hi, double x0) {
  names.push_back(std::move(name));
  lower.push_back(lo);
  upper.push_back(hi);
  start.push_back(x0);
  return num_vars++;
}

void check_well_formed(const ConvexSubproblem& p) {
  const auto n = static_cast<std::size_t>(p.num_vars);
  if (p.lower.size() != n || p.upper.size() != n || p.start.size() != n)
    throw Error(ErrorCode::Dimension, "variable arrays do not match num_vars");
  for (std::size_t i = 0; i < n; ++i)
    if (!(p.lower[i] < p.upper[i]))
      throw Error(ErrorCode::InvalidArgument, "empty box for variable " + std::to_string(i));
  auto check = [&](const ConcaveExpr& e) {
    if (e.max_index() >= p.num_vars)
      throw Error(ErrorCode::Dimension, "expression '" + e.label + "' references an undeclared variable");
    for (const auto& [j, c] : e.affine.terms)
      if (j < 0) throw Error(ErrorCode::Dimension, "negative variable index");
    for (const auto& l : e.logs)
      if (!(l.weight >= 0)) throw Error(ErrorCode::InvalidArgument, "log atom with negative weight");
    for (const auto& q : e.squares)
      if (!(q.weight >= 0)) throw Error(ErrorCode::InvalidArgument, "square atom with negative weight");
    for (const auto& t : e.inv_logs)
      if (!(t.weight >= 0) || t.c0 < 0 || t.c1 < 0 || t.c2 < 0 || t.a < 0 || t.b < 0)
        throw Error(ErrorCode::InvalidArgument, "malformed inverse-product log atom");
  };
  check(p.objective);
  for (const auto& c : p.constraints) check(c);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

double max_violation(const ConvexSubproblem& p, std::span<const double> x) {
  double v = 0.0;
  for (int i = 0; i < p.num_vars; ++i)
    v = std::max({v, p.lower[i] - x[i], x[i] - p.upper[i]});
  for (const auto& c : p.constraints) {
    const double g = c(x);
    v = std::max(v, std::isfinite(g) ? -g : kInf);
  }
  return v;
}

std::vector<double> expr_gradient(const ConcaveExpr& e, std::span<const double> x, int n) {
  SparseVec g;
  gradient(e, x, 1.0, g);
  std::vector<double> out(n, 0.0);
  for (const auto& [j, v] : g) out.at(j) += v;
  return out;
}

std::vector<double> expr_hessian(const ConcaveExpr& e, std::span<const double> x, int n) {
  Triplets t;
  hessian(e, x, 1.0, t);
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& tr : t) {
    out.at(static_cast<std::size_t>(tr.row()) * n + tr.col()) += tr.value();
    if (tr.row() != tr.col()) out.at(static_cast<std::size_t>(tr.col()) * n + tr.row()) += tr.value();
  }
  return out;
}

SolveResult solve(const ConvexSubproblem& input, const SolveOptions& opt) {
  check_well_formed(input);
  ConvexSubproblem p = input;
  normalize(p.objective);
  for (auto& c : p.constraints) normalize(c);
  const int n = p.num_vars;

  const double start_obj = p.objective(p.start);
  const bool start_feasible = max_violation(p, p.start) == 0.0 && std::isfinite(start_obj);

  std::vector<double> x = p.start;
  interiorize(p, x);
  SolveResult res;
  int phase1_iters = 0;

  const bool strictly_feasible =
      min_constraint(p, x) > 0 && std::isfinite(p.objective(x));
  if (!strictly_feasible) {
    // Phase one: maximize -s + tau f(x) subject to g_j(x) + s >= 0, s >= -1.
    // The small multiple of the original objective keeps the barrier bounded
    // below along directions the constraints alone leave open.
    ConvexSubproblem aux;
    aux.num_vars = n + 1;
    aux.names = p.names;
    aux.names.push_back("phase1_slack");
    aux.lower = p.lower;
    aux.lower.push_back(-1.0);
    aux.upper = p.upper;
    aux.upper.push_back(kInf);
    const double gmin = min_constraint(p, x);
    aux.start = x;
    aux.start.push_back(std::isfinite(gmin) ? 2.0 * std::max(0.0, -gmin) + 1e-4 : kInf);
    const double f0 = p.objective(x);
    aux.objective = scaled(p.objective, 1e-3 / (1.0 + std::abs(f0)));
    aux.objective.affine.add(n, -1.0);
    aux.constraints = p.constraints;
    for (auto& c : aux.constraints) c.affine.add(n, 1.0);
    if (!std::isfinite(aux.start[n]) || !std::isfinite(p.objective(x))) {
      res.x = p.start;
      res.status = SolveStatus::Infeasible;
      res.max_violation = max_violation(p, p.start);
      res.objective = start_obj;
      return res;
    }
    for (auto& c : aux.constraints) normalize(c);
    const BarrierRun r1 = run_barrier(aux, aux.start, opt, &p.objective,
                                      [n](const std::vector<double>& z) { return z[n] < -1e-8; });
    phase1_iters = r1.iterations;
    const bool found = r1.stopped_early || r1.x[n] < 0.0;
    if (!found) {
      std::vector<double> xr(r1.x.begin(), r1.x.begin() + n);
      res.iterations = phase1_iters;
      if (start_feasible) {
        res.x = p.start;
        res.objective = start_obj;
        res.status = SolveStatus::MaxIter;
        res.max_violation = 0.0;
      } else {
        res.x = std::move(xr);
        res.objective = p.objective(res.x);
        res.status = SolveStatus::Infeasible;
        res.max_violation = max_violation(p, res.x);
      }
      return res;
    }
    x.assign(r1.x.begin(), r1.x.begin() + n);
  }

  const BarrierRun r2 = run_barrier(p, x, opt, nullptr, [](const std::vector<double>&) { return false; });
  res.x = r2.x;
  res.objective = p.objective(res.x);
  res.iterations = phase1_iters + r2.iterations;
  res.kkt_residual = Barrier(p, nullptr).m() / r2.t / (1.0 + std::abs(res.objective));
  res.status = r2.converged ? SolveStatus::Optimal : SolveStatus::MaxIter;
  res.max_violation = max_violation(p, res.x);
  if (start_feasible && !(res.objective > start_obj)) {
    res.x = p.start;
    res.objective = start_obj;
    res.max_violation = 0.0;
  }
  return res;
}

namespace {

void write_form(std::ostream& out, const LinearForm& f) {
  out << f.constant;
  for (const auto& [j, c] : f.terms) out << ' ' << j << ':' << c;
}

void write_expr(std::ostream& out, const ConcaveExpr& e) {
  out << "affine ";
  write_form(out, e.affine);
  out << '\n';
  for (const auto& l : e.logs) {
    out << "log " << l.weight << ' ';
    write_form(out, l.arg);
    out << '\n';
  }
  for (const auto& q : e.squares) {
    out << "square " << q.weight << ' ';
    write_form(out, q.arg);
    out << '\n';
  }
  for (const auto& t : e.inv_logs)
    out << "invprodlog " << t.weight << ' ' << t.a << ' ' << t.b << ' ' << t.c0 << ' ' << t.c1
        << ' ' << t.c2 << '\n';
  out << ".\n";
}

}  // namespace

void write_canonical(std::ostream& out, const ConvexSubproblem& p) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  out << "problem " << p.num_vars << ' ' << p.constraints.size() << '\n';
  for (int i = 0; i < p.num_vars; ++i) {
    const std::string& name = i < static_cast<int>(p.names.size()) && !p.names[i].empty()
                                  ? p.names[i]
                                  : "x" + std::to_string(i);
    out << "var " << i << ' ' << name << ' ' << p.lower[i] << ' ' << p.upper[i] << ' '
        << p.start[i] << '\n';
  }
  out << "maximize\n";
  write_expr(out, p.objective);
  for (const auto& c : p.constraints) {
    out << "constraint " << (c.label.empty() ? "-" : c.label) << '\n';
    write_expr(out, c);
  }
  out << "end\n";
  out.flags(flags);
  out.precision(prec);
}

}  // namespace airs
