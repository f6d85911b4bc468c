// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace airs {

// constant + sum coef * x[index]
struct LinearForm {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  LinearForm& add(int index, double coef) {
    terms.emplace_back(index, coef);
    return *this;
  }
  double operator()(std::span<const double> x) const;
};

// weight * ln(arg), weight > 0
struct LogTerm {
  double weight = 1.0;
  LinearForm arg;
};

// -weight * arg^2, weight > 0
struct SquareTerm {
  double weight = 1.0;
  LinearForm arg;
};

// -weight * ln(c0 + c1 / sqrt(x_a x_b) + c2 / (x_a x_b)), weight > 0 and
// c0, c1, c2 >= 0. Concave on x_a, x_b > 0.
struct InvProductLogTerm {
  double weight = 1.0;
  int a = -1;
  int b = -1;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

// Sum of concave atoms. Used both as an objective (maximized) and as a
// constraint (expr >= 0).
struct ConcaveExpr {
  LinearForm affine;
  std::vector<LogTerm> logs;
  std::vector<SquareTerm> squares;
  std::vector<InvProductLogTerm> inv_logs;
  std::string label;

  // -inf outside the domain of any log atom.
  double operator()(std::span<const double> x) const;
  int max_index() const;
};

struct ConvexSubproblem {
  int num_vars = 0;
  std::vector<std::string> names;
  std::vector<double> lower;  // may be -inf
  std::vector<double> upper;  // may be +inf
  std::vector<double> start;
  ConcaveExpr objective;
  std::vector<ConcaveExpr> constraints;

  int add_var(std::string name, double lo, double hi, double x0);
};

// Throws Error(Dimension / InvalidArgument) on references to undeclared
// variables, negative atom weights or empty boxes.
void check_well_formed(const ConvexSubproblem& prob);

enum class SolveStatus { Optimal, MaxIter, Infeasible };
std::string to_string(SolveStatus s);

struct SolveOptions {
  double tol = 1e-6;     // bound on the relative duality gap m / (t (1 + |f|))
  int max_iter = 200;    // Newton steps per phase
  double mu = 20.0;      // barrier parameter growth
};

struct SolveResult {
  std::vector<double> x;
  double objective = -std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::Infeasible;
  // Relative duality gap m / (t (1 + |f|)) of the last centering.
  double kkt_residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  // Largest violation of a constraint or box at x (zero when feasible).
  double max_violation = 0.0;
};

double max_violation(const ConvexSubproblem& prob, std::span<const double> x);

// Dense first and second derivatives of e at x over n variables; the Hessian
// is returned row-major and symmetric. Used for diagnostics and tests.
std::vector<double> expr_gradient(const ConcaveExpr& e, std::span<const double> x, int n);
std::vector<double> expr_hessian(const ConcaveExpr& e, std::span<const double> x, int n);

// Primal log-barrier method with Newton centering. A phase-one problem finds a
// strictly feasible point when the start is not. The start point is returned
// instead of the barrier solution when it is feasible and scores higher.
SolveResult solve(const ConvexSubproblem& prob, const SolveOptions& opt = {});

// Text dump of the canonical form for external verification. Grammar:
//   problem <num_vars> <num_constraints>
//   var <index> <name> <lower> <upper> <start>     (one per variable)
//   maximize
//   <expr>
//   constraint <label>                              (one block per constraint,
//   <expr>                                           meaning expr >= 0)
//   end
// where <expr> is a sequence of atom lines
//   affine <constant> [<index>:<coef>]...
//   log <weight> <constant> [<index>:<coef>]...
//   square <weight> <constant> [<index>:<coef>]...
//   invprodlog <weight> <a> <b> <c0> <c1> <c2>
// terminated by a line "."; numbers use 17 significant digits.
void write_canonical(std::ostream& out, const ConvexSubproblem& prob);

}  // namespace airs
