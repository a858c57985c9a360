#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mlsop/basis_selection.hpp"
#include "mlsop/multi_index.hpp"
#include "mlsop/orthonormal_basis.hpp"
#include "mlsop/point_set.hpp"

namespace mlsop {

/// Projection coefficients of sampled data onto an orthonormal basis.
struct FitCoefficients {
  std::vector<double> c;
};

/// Per-node weights realizing interpolation (derivative all zeros) or a
/// derivative estimate at eval_point, in the original coordinates of the
/// point set (any frame rescaling is already folded in).
struct Stencil {
  std::vector<double> node_weights;
  MultiIndex derivative;
  std::vector<double> eval_point;
  ScaleFrame frame;
  /// Every basis polynomial was annihilated by the requested derivative;
  /// the weights are all zero and the fit's derivative genuinely vanishes.
  bool fit_derivative_vanishes = false;
};

/// c_i = sum_j f_j w_j P_i(x_j); by orthonormality the weighted
/// least-squares minimizer over the span.
FitCoefficients fit_coefficients(const OrthonormalBasis& onb, std::span<const double> f_values);

/// sum_i c_i P_i(x) at a raw-coordinate point.
double evaluate_fit(const OrthonormalBasis& onb, const FitCoefficients& fit,
                    std::span<const double> x);

/// v_j = w_j sum_i P_i(x_j) P_i(x); applying it to samples of any spanned
/// polynomial reproduces that polynomial at x.
Stencil interpolation_weights(const OrthonormalBasis& onb, std::span<const double> x);

/// v_j = w_j sum_i P_i(x_j) d^beta P_i(x), rescaled by frame.scale^-|beta|
/// so the weighted sum estimates the derivative in original coordinates.
Stencil derivative_stencil(const OrthonormalBasis& onb, std::span<const double> x,
                           const MultiIndex& beta);

/// sum_j v_j f_j.
double apply_stencil(const Stencil& st, std::span<const double> f_values);

struct EstimateOptions {
  SelectionConfig selection;
  /// Number of nearest points to use; 0 means every supplied point.
  int neighborhood = 0;
};

struct DerivativeEstimate {
  double value = 0.0;
  Stencil stencil;
  MonomialBasis basis;
  /// Completeness of the accepted monomials through |beta|; when incomplete
  /// the estimate is a configuration-dependent combination of derivatives.
  bool derivative_complete = false;
  std::vector<MultiIndex> missing;
  int points_used = 0;
};

/// End-to-end estimate of d^beta f at x0: neighborhood selection,
/// normalization, basis construction, stencil, weighted sum.
DerivativeEstimate estimate_derivative(const PointSet& points, std::span<const double> f_values,
                                       std::span<const double> x0, const MultiIndex& beta,
                                       const EstimateOptions& options);

/// Stencil export: header with eval point, derivative, frame scale and N,
/// then one row per node (index, coordinates, weight), 17 significant digits.
void write_stencil_csv(const Stencil& st, const PointSet& points, std::ostream& out);

}  // namespace mlsop
