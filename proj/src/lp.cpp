#include "pkahler/lp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pkahler::lp {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Optimal: return "optimal";
    case Outcome::Infeasible: return "infeasible";
    case Outcome::Unbounded: return "unbounded";
    case Outcome::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

// Revised simplex on  min c.x, A x = b (b >= 0), x >= 0, with an explicit basis inverse
// refactored from scratch every few pivots.
struct Revised {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<int> basis;
  std::vector<bool> blocked;
  Eigen::MatrixXd Binv;
  Eigen::VectorXd xB;
  double eps;
  long pivots = 0;

  void refactor() {
    const int m = static_cast<int>(A.rows());
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = A.col(basis[i]);
    Binv = B.partialPivLu().inverse();
    xB = Binv * b;
    for (int i = 0; i < m; ++i)
      if (xB(i) < 0 && xB(i) > -1e-9) xB(i) = 0;
  }

  void pivot(int r, int enter, const Eigen::VectorXd& u) {
    const int m = static_cast<int>(A.rows());
    double theta = std::max(0.0, xB(r)) / u(r);
    for (int i = 0; i < m; ++i) xB(i) -= theta * u(i);
    xB(r) = theta;
    for (int i = 0; i < m; ++i)
      if (xB(i) < 0 && xB(i) > -1e-8) xB(i) = 0;
    Eigen::RowVectorXd pr = Binv.row(r) / u(r);
    for (int i = 0; i < m; ++i)
      if (i != r && u(i) != 0) Binv.row(i) -= u(i) * pr;
    Binv.row(r) = pr;
    basis[r] = enter;
    ++pivots;
    if (pivots % 30 == 0) refactor();
  }

  Outcome run(const Eigen::VectorXd& c, long max_pivots) {
    const int m = static_cast<int>(A.rows()), cols = static_cast<int>(A.cols());
    refactor();
    int degenerate = 0;
    std::vector<bool> in_basis(cols, false);
    while (true) {
      std::fill(in_basis.begin(), in_basis.end(), false);
      for (int j : basis) in_basis[j] = true;
      Eigen::VectorXd cB(m);
      for (int i = 0; i < m; ++i) cB(i) = c(basis[i]);
      Eigen::VectorXd y = Binv.transpose() * cB;
      Eigen::RowVectorXd d = c.transpose() - y.transpose() * A;
      const bool bland = degenerate > 30;
      int enter = -1;
      double best = -eps;
      for (int j = 0; j < cols; ++j) {
        if (in_basis[j] || blocked[j] || d(j) >= -eps) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (d(j) < best) {
          best = d(j);
          enter = j;
        }
      }
      if (enter < 0) return Outcome::Optimal;
      Eigen::VectorXd u = Binv * A.col(enter);
      // Harris ratio test: bound the step with a small feasibility allowance, then take
      // the largest pivot among the rows that block within that bound
      const double piv_tol = std::max(1e-9, 1e-7 * u.cwiseAbs().maxCoeff());
      const double delta = 1e-9;
      double bound = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i)
        if (u(i) > piv_tol) bound = std::min(bound, (std::max(0.0, xB(i)) + delta) / u(i));
      int leave = -1;
      double ratio = 0;
      for (int i = 0; i < m; ++i) {
        if (u(i) <= piv_tol) continue;
        double r = std::max(0.0, xB(i)) / u(i);
        if (r > bound) continue;
        if (leave < 0 || u(i) > u(leave) || (u(i) == u(leave) && basis[i] < basis[leave])) {
          leave = i;
          ratio = r;
        }
      }
      if (leave < 0) return Outcome::Unbounded;
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter, u);
      if (pivots > max_pivots) return Outcome::IterationLimit;
    }
  }
};

}  // namespace

Solution solve(const Problem& prob, long max_pivots, double eps) {
  const int nv = prob.nvars;
  if (static_cast<int>(prob.c.size()) != nv) throw std::invalid_argument("lp: objective size");
  std::vector<bool> is_free = prob.free;
  is_free.resize(nv, false);

  std::vector<int> neg_col(nv, -1);
  int ncol = nv;
  for (int j = 0; j < nv; ++j)
    if (is_free[j]) neg_col[j] = ncol++;
  const int m = static_cast<int>(prob.rows.size());
  int nslack = 0;
  for (const auto& r : prob.rows)
    if (r.sense != Sense::EQ) ++nslack;
  const int slack0 = ncol, art0 = ncol + nslack, cols = art0 + m;

  Revised R;
  R.eps = eps;
  R.A = Eigen::MatrixXd::Zero(m, cols);
  R.b = Eigen::VectorXd::Zero(m);
  std::vector<bool> flipped(m, false);
  int s = slack0;
  for (int i = 0; i < m; ++i) {
    const auto& r = prob.rows[i];
    if (static_cast<int>(r.a.size()) != nv) throw std::invalid_argument("lp: row size");
    for (int j = 0; j < nv; ++j) {
      R.A(i, j) = r.a[j];
      if (neg_col[j] >= 0) R.A(i, neg_col[j]) = -r.a[j];
    }
    if (r.sense == Sense::LE) R.A(i, s++) = 1;
    if (r.sense == Sense::GE) R.A(i, s++) = -1;
    R.b(i) = r.b;
    if (r.b < 0) {
      R.A.row(i) *= -1;
      R.b(i) = -r.b;
      flipped[i] = true;
    }
    R.A(i, art0 + i) = 1;
  }
  R.basis.resize(m);
  for (int i = 0; i < m; ++i) R.basis[i] = art0 + i;
  R.blocked.assign(cols, false);

  Solution sol;
  // phase 1: minimize the sum of artificials
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < m; ++i) c1(art0 + i) = 1;
  Outcome o = R.run(c1, max_pivots);
  sol.pivots = R.pivots;
  if (o == Outcome::IterationLimit) return sol;
  double infeas = 0;
  for (int i = 0; i < m; ++i)
    if (R.basis[i] >= art0) infeas += R.xB(i);
  if (infeas > 1e-7 * std::max(1.0, R.b.cwiseAbs().maxCoeff())) {
    sol.outcome = Outcome::Infeasible;
    return sol;
  }
  // move artificials left at level zero out of the basis where a pivot exists
  for (int i = 0; i < m; ++i) {
    if (R.basis[i] < art0) continue;
    Eigen::RowVectorXd row = R.Binv.row(i) * R.A;
    for (int j = 0; j < art0; ++j) {
      bool basic = false;
      for (int k : R.basis) basic |= (k == j);
      if (basic || std::abs(row(j)) <= 1e-7) continue;
      Eigen::VectorXd u = R.Binv * R.A.col(j);
      R.xB(i) = 0;
      R.pivot(i, j, u);
      break;
    }
  }
  for (int j = art0; j < cols; ++j) R.blocked[j] = true;

  // phase 2
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(cols);
  for (int j = 0; j < nv; ++j) {
    c2(j) = prob.c[j];
    if (neg_col[j] >= 0) c2(neg_col[j]) = -prob.c[j];
  }
  o = R.run(c2, max_pivots);
  sol.pivots = R.pivots;
  sol.outcome = o;
  if (o != Outcome::Optimal) return sol;

  R.refactor();
  std::vector<double> col_val(cols, 0.0);
  for (int i = 0; i < m; ++i) col_val[R.basis[i]] = std::max(0.0, R.xB(i));
  sol.x.assign(nv, 0.0);
  for (int j = 0; j < nv; ++j) sol.x[j] = col_val[j] - (neg_col[j] >= 0 ? col_val[neg_col[j]] : 0.0);
  sol.value = 0;
  for (int j = 0; j < nv; ++j) sol.value += prob.c[j] * sol.x[j];
  Eigen::VectorXd cB(m);
  for (int i = 0; i < m; ++i) cB(i) = c2(R.basis[i]);
  Eigen::VectorXd y = R.Binv.transpose() * cB;
  sol.duals.resize(m);
  for (int i = 0; i < m; ++i) sol.duals[i] = flipped[i] ? -y(i) : y(i);
  return sol;
}

}  // namespace pkahler::lp
