#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mlsop {

/// N points in R^d with strictly positive weights. Coordinates are stored
/// one dimension per contiguous column so the inner-product kernels can
/// stream them. Immutable after construction.
class PointSet {
 public:
  /// points given row-wise (point i = points[i*dim .. i*dim+dim)).
  /// Empty weights means unit weights.
  PointSet(int dim, std::span<const double> points_rowmajor,
           std::span<const double> weights = {});

  int dim() const { return dim_; }
  int size() const { return n_; }

  double coord(int i, int j) const { return cols_[static_cast<std::size_t>(j) * n_ + i]; }
  double weight(int i) const { return w_[i]; }

  /// All i-th coordinates of every point (length size()).
  std::span<const double> column(int j) const {
    return {cols_.data() + static_cast<std::size_t>(j) * n_, static_cast<std::size_t>(n_)};
  }
  std::span<const double> weights() const { return {w_.data(), w_.size()}; }

  /// Copy of point i as a dense vector.
  std::vector<double> point(int i) const;

  /// FNV-1a over coordinates and weights; binds derived objects to this set.
  std::uint64_t fingerprint() const;

 private:
  int dim_ = 0, n_ = 0;
  std::vector<double> cols_;  // dim columns of length n
  std::vector<double> w_;
};

/// Affine frame x -> center + scale * (x - center); scale > 0.
struct ScaleFrame {
  std::vector<double> center;
  double scale = 1.0;
};

/// Validating constructor used by callers holding row-major data plus
/// optional weights (unit weights substituted when omitted).
PointSet make_pointset(int dim, std::span<const double> points_rowmajor,
                       std::span<const double> weights = {});

/// All point indices ordered by ascending Euclidean distance from x0;
/// distance ties keep the lower original index first.
std::vector<int> neighborhood_order(const PointSet& ps, std::span<const double> x0);

/// The n points nearest x0 by Euclidean distance, sorted ascending;
/// distance ties keep the lower original index first.
PointSet select_neighborhood(const PointSet& ps, std::span<const double> x0, int n);

/// Map every point through the frame: x -> center + scale * (x - center).
/// Weights are unchanged.
PointSet apply_scale(const PointSet& ps, const ScaleFrame& frame);

/// Translate to the frame center and divide by the frame scale:
/// y = (x - center) / scale. Inverse of the frame for fitting-side use.
PointSet to_frame_coords(const PointSet& ps, const ScaleFrame& frame);

/// Frame centered at x0 with scale = max distance from x0 to any point
/// (scale 1 when all points coincide with x0).
ScaleFrame normalization_frame(const PointSet& ps, std::span<const double> x0);

ScaleFrame identity_frame(int dim);

/// Text format: one point per line, d whitespace-separated coordinates and
/// an optional trailing weight column; '#' starts a comment line.
PointSet read_pointset(std::istream& in, int dim);
PointSet read_pointset_file(const std::string& path, int dim);

}  // namespace mlsop
