#pragma once

// Shared fixtures and the Eigen-based oracles used by the test suites. The
// oracles deliberately go through a different algebraic route (column-pivoted
// Householder QR on the weighted design matrix) than the library.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "mlsop/basis_selection.hpp"
#include "mlsop/multi_index.hpp"
#include "mlsop/point_set.hpp"
#include "mlsop/rng.hpp"

namespace testutil {

inline mlsop::PointSet grid9() {
  std::vector<double> pts;
  for (double y : {-1.0, 0.0, 1.0})
    for (double x : {-1.0, 0.0, 1.0}) {
      pts.push_back(x);
      pts.push_back(y);
    }
  return mlsop::PointSet(2, pts);
}

inline mlsop::PointSet circle6() {
  std::vector<double> pts;
  for (int k = 0; k < 6; ++k) {
    pts.push_back(std::cos(k * M_PI / 3));
    pts.push_back(std::sin(k * M_PI / 3));
  }
  return mlsop::PointSet(2, pts);
}

/// Design matrix: row i = accepted monomials evaluated at point i.
inline Eigen::MatrixXd design_matrix(const mlsop::PointSet& pts,
                                     const std::vector<mlsop::MultiIndex>& monomials) {
  Eigen::MatrixXd v(pts.size(), monomials.size());
  for (int i = 0; i < pts.size(); ++i) {
    const std::vector<double> x = pts.point(i);
    for (std::size_t j = 0; j < monomials.size(); ++j)
      v(i, j) = mlsop::monomial_eval(x, monomials[j]);
  }
  return v;
}

/// Rank of the monomial evaluation matrix via column-pivoted QR.
inline int oracle_rank(const mlsop::PointSet& pts,
                       const std::vector<mlsop::MultiIndex>& monomials, double tol) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design_matrix(pts, monomials));
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

/// Weighted least-squares coefficients over the given monomials.
inline Eigen::VectorXd oracle_wls(const mlsop::PointSet& pts,
                                  const std::vector<mlsop::MultiIndex>& monomials,
                                  const std::vector<double>& f) {
  Eigen::MatrixXd a = design_matrix(pts, monomials);
  Eigen::VectorXd b(pts.size());
  for (int i = 0; i < pts.size(); ++i) {
    const double sw = std::sqrt(pts.weight(i));
    a.row(i) *= sw;
    b(i) = sw * f[i];
  }
  return a.colPivHouseholderQr().solve(b);
}

/// Oracle prediction of d^beta fit at x (beta all zeros = plain evaluation).
inline double oracle_predict(const mlsop::PointSet& pts,
                             const std::vector<mlsop::MultiIndex>& monomials,
                             const std::vector<double>& f, const std::vector<double>& x,
                             const mlsop::MultiIndex& beta) {
  const Eigen::VectorXd c = oracle_wls(pts, monomials, f);
  double out = 0.0;
  for (std::size_t j = 0; j < monomials.size(); ++j) {
    const mlsop::Monomial dm = mlsop::monomial_derivative(monomials[j], beta);
    if (dm.coefficient != 0.0) out += c(j) * dm.coefficient * mlsop::monomial_eval(x, dm.index);
  }
  return out;
}

inline mlsop::PointSet random_disc(mlsop::Rng& rng, int n) {
  std::vector<double> pts;
  for (int i = 0; i < n; ++i) {
    const double th = rng.uniform(0, 2 * M_PI), r = rng.uniform01();
    pts.push_back(r * std::cos(th));
    pts.push_back(r * std::sin(th));
  }
  return mlsop::PointSet(2, pts);
}

inline mlsop::PointSet random_ball(mlsop::Rng& rng, int n) {
  std::vector<double> pts;
  for (int i = 0; i < n; ++i) {
    const double az = rng.uniform(0, 2 * M_PI), pol = rng.uniform(0, M_PI), r = rng.uniform01();
    pts.push_back(r * std::sin(pol) * std::cos(az));
    pts.push_back(r * std::sin(pol) * std::sin(az));
    pts.push_back(r * std::cos(pol));
  }
  return mlsop::PointSet(3, pts);
}

}  // namespace testutil
