// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "../support.hpp"
#include "airs/convex.hpp"
#include "airs/error.hpp"
#include "doctest.h"

using namespace airs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// max c.x subject to A x <= b and the box, by enumerating every vertex.
double lp_by_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                      double lo, double hi) {
  const int n = static_cast<int>(c.size());
  // Rows: the general constraints, then x_j <= hi and -x_j <= -lo.
  Eigen::MatrixXd G(A.rows() + 2 * n, n);
  Eigen::VectorXd h(A.rows() + 2 * n);
  G.topRows(A.rows()) = A;
  h.head(A.rows()) = b;
  for (int j = 0; j < n; ++j) {
    G.row(A.rows() + 2 * j) = Eigen::VectorXd::Unit(n, j).transpose();
    h(A.rows() + 2 * j) = hi;
    G.row(A.rows() + 2 * j + 1) = -Eigen::VectorXd::Unit(n, j).transpose();
    h(A.rows() + 2 * j + 1) = -lo;
  }
  const int m = static_cast<int>(G.rows());
  double best = -kInf;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd S(n, n);
      Eigen::VectorXd t(n);
      for (int r = 0; r < n; ++r) {
        S.row(r) = G.row(pick[r]);
        t(r) = h(pick[r]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(t);
      if (((G * x - h).array() <= 1e-9).all()) best = std::max(best, c.dot(x));
      return;
    }
    for (int r = start; r < m; ++r) {
      pick[depth] = r;
      rec(r + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

ConcaveExpr random_expr(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ConcaveExpr e;
  e.affine.constant = U(rng);
  for (int j = 0; j < n; ++j) e.affine.add(j, U(rng) - 0.5);
  LogTerm l;
  l.weight = 0.5 + U(rng);
  l.arg.constant = 1.0;
  for (int j = 0; j < n; ++j) l.arg.add(j, U(rng));
  e.logs.push_back(l);
  SquareTerm s;
  s.weight = U(rng);
  s.arg.constant = U(rng) - 0.5;
  s.arg.add(0, U(rng)).add(n - 1, -U(rng));
  e.squares.push_back(s);
  InvProductLogTerm t;
  t.weight = 0.3 + U(rng);
  t.a = 0;
  t.b = n - 1;
  t.c0 = U(rng);
  t.c1 = U(rng);
  t.c2 = U(rng);
  e.inv_logs.push_back(t);
  InvProductLogTerm same = t;  // both arguments on one variable
  same.b = 0;
  same.weight = 0.2;
  e.inv_logs.push_back(same);
  return e;
}

}  // namespace

TEST_SUITE("convex") {
  TEST_CASE("negative square peaks at zero") {
    ConvexSubproblem p;
    p.num_vars = 0;
    p.add_var("x", -1.0, 1.0, 0.5);
    SquareTerm s;
    s.arg.add(0, 1.0);
    p.objective.squares.push_back(s);
    const SolveResult r = solve(p);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(std::abs(r.x[0]) <= 1e-4);
    CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-6));
  }

  TEST_CASE("increasing log goes to its upper limit") {
    ConvexSubproblem p;
    p.add_var("x", 0.0, kInf, 1.0);
    LogTerm l;
    l.arg.constant = 1.0;
    l.arg.add(0, 1.0);
    p.objective.logs.push_back(l);
    ConcaveExpr cap;
    cap.affine.constant = 3.0;
    cap.affine.add(0, -1.0);
    cap.label = "x <= 3";
    p.constraints.push_back(cap);
    const SolveResult r = solve(p);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(r.objective == doctest::Approx(std::log(4.0)).epsilon(1e-6));
    CHECK(r.max_violation == 0.0);
  }

  TEST_CASE("random linear programs match vertex enumeration") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> Z(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + trial % 3;
      const int m = 3 + trial % 4;
      Eigen::MatrixXd A(m, n);
      Eigen::VectorXd b(m), c(n);
      for (int r = 0; r < m; ++r) {
        for (int j = 0; j < n; ++j) A(r, j) = Z(rng);
        b(r) = 0.5 + std::abs(Z(rng));  // the origin is strictly feasible
      }
      for (int j = 0; j < n; ++j) c(j) = Z(rng);
      const double lo = -5.0, hi = 5.0;

      ConvexSubproblem p;
      for (int j = 0; j < n; ++j) p.add_var("x" + std::to_string(j), lo, hi, 0.0);
      for (int j = 0; j < n; ++j) p.objective.affine.add(j, c(j));
      for (int r = 0; r < m; ++r) {
        ConcaveExpr e;
        e.affine.constant = b(r);
        for (int j = 0; j < n; ++j) e.affine.add(j, -A(r, j));
        p.constraints.push_back(e);
      }
      const SolveResult res = solve(p, SolveOptions{1e-9, 200, 20.0});
      const double ref = lp_by_vertices(A, b, c, lo, hi);
      CAPTURE(trial);
      CHECK(res.status == SolveStatus::Optimal);
      CHECK(std::abs(res.objective - ref) <= 1e-6 * (1.0 + std::abs(ref)));
      CHECK(res.max_violation == 0.0);
    }
  }

  TEST_CASE("infeasible start points are repaired") {
    ConvexSubproblem p;
    p.add_var("x", -10.0, 10.0, -8.0);
    p.add_var("y", -10.0, 10.0, 9.0);
    p.objective.affine.add(0, 1.0).add(1, 1.0);
    ConcaveExpr disc;  // 4 - x^2 - y^2 >= 0
    disc.affine.constant = 4.0;
    SquareTerm sx, sy;
    sx.arg.add(0, 1.0);
    sy.arg.add(1, 1.0);
    disc.squares = {sx, sy};
    p.constraints.push_back(disc);
    const SolveResult r = solve(p);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-5));
  }

  TEST_CASE("an empty feasible set is reported, not thrown") {
    ConvexSubproblem p;
    p.add_var("x", 0.0, 1.0, 0.5);
    ConcaveExpr e;
    e.affine.constant = -2.0;
    e.affine.add(0, 1.0);  // x >= 2
    p.constraints.push_back(e);
    const SolveResult r = solve(p);
    CHECK(r.status == SolveStatus::Infeasible);
    CHECK(r.max_violation > 0.9);
  }

  TEST_CASE("malformed problems throw") {
    ConvexSubproblem p;
    p.add_var("x", 0.0, 1.0, 0.5);
    SUBCASE("undeclared variable") {
      p.objective.affine.add(3, 1.0);
      CHECK_THROWS_AS(check_well_formed(p), Error);
    }
    SUBCASE("negative weight") {
      LogTerm l;
      l.weight = -1.0;
      l.arg.constant = 1.0;
      p.objective.logs.push_back(l);
      CHECK_THROWS_AS(check_well_formed(p), Error);
    }
    SUBCASE("empty box") {
      p.upper[0] = 0.0;
      CHECK_THROWS_AS(check_well_formed(p), Error);
    }
  }

  TEST_CASE("derivatives of every atom match finite differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.2, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
      const int n = 2 + trial % 3;
      const ConcaveExpr e = random_expr(n, rng);
      std::vector<double> x(n);
      for (double& v : x) v = U(rng);
      const auto g = expr_gradient(e, x, n);
      const auto H = expr_hessian(e, x, n);
      for (int j = 0; j < n; ++j) {
        const double h = 1e-4 * x[j];
        auto f = [&](double t) {
          std::vector<double> y = x;
          y[j] = t;
          return e(y);
        };
        CHECK(testing::rel_close(g[j], testing::central_diff(f, x[j], h), 1e-6, 1e-9));
        for (int l = 0; l < n; ++l) {
          auto gl = [&](double t) {
            std::vector<double> y = x;
            y[j] = t;
            return expr_gradient(e, y, n)[l];
          };
          CHECK(testing::rel_close(H[static_cast<std::size_t>(l) * n + j],
                                   testing::central_diff(gl, x[j], h), 1e-5, 1e-8));
        }
      }
      // Concavity: the Hessian is negative semidefinite.
      Eigen::MatrixXd Hm(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) Hm(r, c) = H[static_cast<std::size_t>(r) * n + c];
      const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hm).eigenvalues().maxCoeff();
      CHECK(top <= 1e-10 * (1.0 + Hm.norm()));
    }
  }

  TEST_CASE("log atoms are -inf outside their domain") {
    ConcaveExpr e;
    LogTerm l;
    l.arg.add(0, 1.0);
    e.logs.push_back(l);
    const std::vector<double> x{-1.0};
    CHECK(e(x) == -kInf);
  }

  TEST_CASE("solves are deterministic") {
    std::mt19937_64 rng(9);
    ConvexSubproblem p;
    for (int j = 0; j < 3; ++j) p.add_var("x", 0.1, 5.0, 1.0);
    p.objective = random_expr(3, rng);
    ConcaveExpr cap;
    cap.affine.constant = 6.0;
    cap.affine.add(0, -1.0).add(1, -1.0).add(2, -1.0);
    p.constraints.push_back(cap);
    const SolveResult a = solve(p);
    const SolveResult b = solve(p);
    CHECK(a.x == b.x);
    CHECK(a.objective == b.objective);
    CHECK(a.iterations == b.iterations);
  }

  TEST_CASE("canonical dump grammar") {
    ConvexSubproblem p;
    p.add_var("x", 0.0, 1.0, 0.5);
    p.add_var("y", 0.5, kInf, 1.0);
    p.objective.affine.add(0, 2.0);
    InvProductLogTerm t;
    t.a = 0;
    t.b = 1;
    t.c0 = 1.0;
    p.objective.inv_logs.push_back(t);
    ConcaveExpr c;
    c.label = "cap";
    c.affine.constant = 1.0;
    c.affine.add(1, -1.0);
    p.constraints.push_back(c);
    std::ostringstream out;
    write_canonical(out, p);
    const std::string s = out.str();
    CHECK(s.rfind("problem 2 1\n", 0) == 0);
    CHECK(s.find("var 0 x ") != std::string::npos);
    CHECK(s.find("maximize\n") != std::string::npos);
    CHECK(s.find("invprodlog ") != std::string::npos);
    CHECK(s.find("constraint cap\n") != std::string::npos);
    CHECK(s.size() >= 4);
    CHECK(s.substr(s.size() - 4) == "end\n");
  }
}
