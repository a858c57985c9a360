#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mlsop/basis_selection.hpp"
#include "mlsop/matrix.hpp"
#include "mlsop/multi_index.hpp"
#include "mlsop/point_set.hpp"

namespace mlsop {

/// Gram matrix of the accepted monomials under the discrete inner product
/// <f,g> = sum_i f(x_i) g(x_i) w_i, on the coordinates as given.
/// Exactly symmetric by construction.
Matrix gram_matrix(const PointSet& points, const MonomialBasis& basis);

/// M = S D S^T with unit lower-triangular S and positive diagonal D.
struct LdlFactors {
  Matrix unit_lower;             // S
  std::vector<double> diagonal;  // D
};

/// Throws numerical_error (with the pivot index) when a pivot is not
/// positive, which signals a rank tolerance too loose for the data.
LdlFactors ldl_decompose(const Matrix& m);

/// Polynomials orthonormal under the discrete inner product on a point set.
/// Row i of coefficients() expands P_i over the accepted monomials (in frame
/// coordinates); the matrix is lower triangular with positive diagonal.
class OrthonormalBasis {
 public:
  OrthonormalBasis(PointSet points, PointSet frame_points, ScaleFrame frame,
                   MonomialBasis basis, Matrix coeffs, Matrix node_values);

  int size() const { return coeffs_.rows(); }
  const Matrix& coefficients() const { return coeffs_; }
  const MonomialBasis& basis() const { return basis_; }
  const PointSet& points() const { return points_; }
  const PointSet& frame_points() const { return frame_points_; }
  const ScaleFrame& frame() const { return frame_; }

  /// P_i(x_j) table, n x N, in frame coordinates.
  const Matrix& node_values() const { return node_values_; }

  /// P_i at a raw-coordinate point (mapped through the frame).
  std::vector<double> values_at(std::span<const double> x) const;

  /// d^beta P_i at a raw-coordinate point, as derivatives with respect to
  /// the frame coordinates (callers rescale by frame.scale^-|beta| to get
  /// raw-coordinate derivatives).
  std::vector<double> frame_derivative_values_at(std::span<const double> x,
                                                 const MultiIndex& beta) const;

 private:
  PointSet points_;        // as supplied
  PointSet frame_points_;  // in frame coordinates
  ScaleFrame frame_;
  MonomialBasis basis_;
  Matrix coeffs_;       // R
  Matrix node_values_;  // P_i(x_j)
};

/// Solve the triangular system for the coefficient matrix and rescale so the
/// discrete Gram matrix of the P_i is the identity (a data-side Cholesky
/// pass); diagonal coefficients come out positive. `points` must be the
/// coordinates the Gram matrix was built on.
OrthonormalBasis orthonormal_coefficients(const LdlFactors& factors, const PointSet& points,
                                          const MonomialBasis& basis);

/// One-call pipeline: frame, monomial selection, Gram matrix, factorization,
/// coefficients. x0 (default origin) centers the normalization frame.
OrthonormalBasis build_orthonormal_basis(const PointSet& points, const SelectionConfig& config,
                                         std::span<const double> x0 = {});

/// Coefficient matrix and accepted exponents as CSV, 17 significant digits.
void write_basis_csv(const OrthonormalBasis& onb, std::ostream& out);

}  // namespace mlsop
