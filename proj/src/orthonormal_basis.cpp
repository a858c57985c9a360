#include "mlsop/orthonormal_basis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "mlsop/errors.hpp"
#include "mlsop/simd.hpp"

namespace mlsop {

namespace {

// n x N table of accepted monomial values on the given coordinates.
Matrix monomial_values(const PointSet& pts, const MonomialBasis& basis) {
  const int n = basis.size();
  const std::size_t N = static_cast<std::size_t>(pts.size());
  const auto& k = simd::kernels();
  Matrix v(n, pts.size(), 1.0);
  for (int i = 0; i < n; ++i) {
    const MultiIndex& a = basis.accepted()[i];
    for (int j = 0; j < pts.dim(); ++j)
      if (a[j] > 0) k.pow_mul(v.row(i), pts.column(j).data(), static_cast<unsigned>(a[j]), N);
  }
  return v;
}

}  // namespace

Matrix gram_matrix(const PointSet& points, const MonomialBasis& basis) {
  if (basis.size() == 0) throw invalid_input("gram_matrix: empty basis");
  const Matrix v = monomial_values(points, basis);
  const auto& k = simd::kernels();
  const std::size_t N = static_cast<std::size_t>(points.size());
  Matrix m(basis.size(), basis.size());
  for (int i = 0; i < basis.size(); ++i)
    for (int j = i; j < basis.size(); ++j) {
      const double s = k.dot3(v.row(i), v.row(j), points.weights().data(), N);
      m(i, j) = s;
      m(j, i) = s;
    }
  return m;
}

LdlFactors ldl_decompose(const Matrix& m) {
  if (m.rows() != m.cols()) throw invalid_input("ldl_decompose: matrix must be square");
  const int n = m.rows();
  LdlFactors f{Matrix::identity(n), std::vector<double>(n, 0.0)};
  Matrix& s = f.unit_lower;
  std::vector<double>& d = f.diagonal;
  for (int j = 0; j < n; ++j) {
    double dj = m(j, j);
    for (int k = 0; k < j; ++k) dj -= s(j, k) * s(j, k) * d[k];
    if (!(dj > 0.0))
      throw numerical_error("ldl_decompose: non-positive pivot at index " + std::to_string(j) +
                                " (rank tolerance too loose for this data)",
                            j);
    d[j] = dj;
    for (int i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (int k = 0; k < j; ++k) v -= s(i, k) * s(j, k) * d[k];
      s(i, j) = v / dj;
    }
  }
  return f;
}

OrthonormalBasis::OrthonormalBasis(PointSet points, PointSet frame_points, ScaleFrame frame,
                                   MonomialBasis basis, Matrix coeffs, Matrix node_values)
    : points_(std::move(points)),
      frame_points_(std::move(frame_points)),
      frame_(std::move(frame)),
      basis_(std::move(basis)),
      coeffs_(std::move(coeffs)),
      node_values_(std::move(node_values)) {}

std::vector<double> OrthonormalBasis::values_at(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != points_.dim())
    throw invalid_input("values_at: point dimension mismatch");
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    y[j] = (x[j] - frame_.center[j]) / frame_.scale;
  const int n = size();
  std::vector<double> mono(n), out(n, 0.0);
  for (int j = 0; j < n; ++j) mono[j] = monomial_eval(y, basis_.accepted()[j]);
  for (int i = 0; i < n; ++i)
    out[i] = simd::kernels().dot(coeffs_.row(i), mono.data(), static_cast<std::size_t>(i) + 1);
  return out;
}

std::vector<double> OrthonormalBasis::frame_derivative_values_at(std::span<const double> x,
                                                                 const MultiIndex& beta) const {
  if (static_cast<int>(x.size()) != points_.dim())
    throw invalid_input("derivative values: point dimension mismatch");
  if (beta.dim() != points_.dim())
    throw invalid_input("derivative values: derivative index dimension mismatch");
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    y[j] = (x[j] - frame_.center[j]) / frame_.scale;
  const int n = size();
  std::vector<double> dmono(n);
  for (int j = 0; j < n; ++j) {
    const Monomial dm = monomial_derivative(basis_.accepted()[j], beta);
    dmono[j] = dm.coefficient == 0.0 ? 0.0 : dm.coefficient * monomial_eval(y, dm.index);
  }
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    out[i] = simd::kernels().dot(coeffs_.row(i), dmono.data(), static_cast<std::size_t>(i) + 1);
  return out;
}

namespace {

OrthonormalBasis assemble(const PointSet& original, const PointSet& frame_pts,
                          const ScaleFrame& frame, const MonomialBasis& basis,
                          const LdlFactors& factors) {
  const int n = basis.size();
  const std::size_t N = static_cast<std::size_t>(frame_pts.size());
  const auto& k = simd::kernels();
  const Matrix& s = factors.unit_lower;

  // R = D^{-1/2} S^{-1} by forward substitution; lower triangular, positive
  // diagonal.
  Matrix r(n, n);
  for (int col = 0; col < n; ++col) {
    r(col, col) = 1.0;
    for (int i = col + 1; i < n; ++i) {
      double v = 0.0;
      for (int k2 = col; k2 < i; ++k2) v -= s(i, k2) * r(k2, col);
      r(i, col) = v;
    }
  }
  for (int i = 0; i < n; ++i) {
    const double scale = 1.0 / std::sqrt(factors.diagonal[i]);
    for (int j = 0; j <= i; ++j) r(i, j) *= scale;
  }

  // Node values and the data-side Gram of the provisional polynomials.
  Matrix mono = monomial_values(frame_pts, basis);
  Matrix p(n, frame_pts.size());
  for (int i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < N; ++c) p(i, static_cast<int>(c)) = 0.0;
    for (int j = 0; j <= i; ++j) k.axpy(r(i, j), mono.row(j), p.row(i), N);
  }
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = k.dot3(p.row(i), p.row(j), frame_pts.weights().data(), N);
      g(i, j) = v;
      g(j, i) = v;
    }

  // Cholesky of the Gram and a forward-substitution correction R <- L^{-1} R,
  // P <- L^{-1} P. This enforces the Gram identity against the data itself
  // and subsumes the per-row renormalization.
  Matrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = g(j, j);
    for (int k2 = 0; k2 < j; ++k2) diag -= l(j, k2) * l(j, k2);
    if (!(diag > 0.0))
      throw numerical_error("orthonormal_coefficients: vanishing polynomial norm at index " +
                                std::to_string(j),
                            j);
    l(j, j) = std::sqrt(diag);
    for (int i = j + 1; i < n; ++i) {
      double v = g(i, j);
      for (int k2 = 0; k2 < j; ++k2) v -= l(i, k2) * l(j, k2);
      l(i, j) = v / l(j, j);
    }
  }
  for (int sys = 0; sys < 2; ++sys) {
    Matrix& target = sys == 0 ? r : p;
    const std::size_t cols = static_cast<std::size_t>(target.cols());
    for (int i = 0; i < n; ++i) {
      for (int k2 = 0; k2 < i; ++k2) k.axpy(-l(i, k2), target.row(k2), target.row(i), cols);
      const double inv = 1.0 / l(i, i);
      for (std::size_t c = 0; c < cols; ++c) target.row(i)[c] *= inv;
    }
  }

  return OrthonormalBasis(original, frame_pts, frame, basis, std::move(r), std::move(p));
}

}  // namespace

OrthonormalBasis orthonormal_coefficients(const LdlFactors& factors, const PointSet& points,
                                          const MonomialBasis& basis) {
  if (factors.unit_lower.rows() != basis.size())
    throw invalid_input("orthonormal_coefficients: factor/basis size mismatch");
  return assemble(points, points, identity_frame(points.dim()), basis, factors);
}

OrthonormalBasis build_orthonormal_basis(const PointSet& points, const SelectionConfig& config,
                                         std::span<const double> x0) {
  std::vector<double> origin;
  if (x0.empty()) {
    origin.assign(points.dim(), 0.0);
    x0 = origin;
  }
  const ScaleFrame frame =
      config.normalize ? normalization_frame(points, x0) : identity_frame(points.dim());
  const PointSet work = to_frame_coords(points, frame);
  const MonomialBasis basis = select_basis(points, config, x0);
  const Matrix m = gram_matrix(work, basis);
  const LdlFactors factors = ldl_decompose(m);
  return assemble(points, work, frame, basis, factors);
}

void write_basis_csv(const OrthonormalBasis& onb, std::ostream& out) {
  char buf[64];
  const MonomialBasis& basis = onb.basis();
  for (int j = 0; j < basis.size(); ++j) {
    out << "monomial," << j;
    for (int d = 0; d < basis.accepted()[j].dim(); ++d) out << ',' << basis.accepted()[j][d];
    out << '\n';
  }
  for (int i = 0; i < onb.size(); ++i) {
    out << "coeff," << i;
    for (int j = 0; j < onb.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", onb.coefficients()(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace mlsop
