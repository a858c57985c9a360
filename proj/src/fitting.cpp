#include "mlsop/fitting.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "mlsop/errors.hpp"
#include "mlsop/simd.hpp"

namespace mlsop {

namespace {

void check_values(const OrthonormalBasis& onb, std::span<const double> f) {
  if (static_cast<int>(f.size()) != onb.points().size())
    throw invalid_input("sample count does not match point count");
  for (double v : f)
    if (!std::isfinite(v)) throw invalid_input("non-finite sample value");
}

// v_j = w_j * sum_i P_i(x_j) * coef_i
std::vector<double> node_combination(const OrthonormalBasis& onb, std::span<const double> coef) {
  const int n = onb.size();
  const std::size_t N = static_cast<std::size_t>(onb.points().size());
  const auto& k = simd::kernels();
  std::vector<double> v(N, 0.0);
  for (int i = 0; i < n; ++i) k.axpy(coef[i], onb.node_values().row(i), v.data(), N);
  const auto w = onb.points().weights();
  for (std::size_t j = 0; j < N; ++j) v[j] *= w[j];
  return v;
}

}  // namespace

FitCoefficients fit_coefficients(const OrthonormalBasis& onb, std::span<const double> f_values) {
  check_values(onb, f_values);
  const std::size_t N = static_cast<std::size_t>(onb.points().size());
  const auto& k = simd::kernels();
  FitCoefficients fit;
  fit.c.resize(onb.size());
  for (int i = 0; i < onb.size(); ++i)
    fit.c[i] = k.dot3(f_values.data(), onb.points().weights().data(), onb.node_values().row(i), N);
  return fit;
}

double evaluate_fit(const OrthonormalBasis& onb, const FitCoefficients& fit,
                    std::span<const double> x) {
  if (static_cast<int>(fit.c.size()) != onb.size())
    throw invalid_input("evaluate_fit: coefficient count mismatch");
  const std::vector<double> p = onb.values_at(x);
  return simd::kernels().dot(fit.c.data(), p.data(), p.size());
}

Stencil interpolation_weights(const OrthonormalBasis& onb, std::span<const double> x) {
  const std::vector<double> p = onb.values_at(x);
  Stencil st;
  st.node_weights = node_combination(onb, p);
  st.derivative = MultiIndex::zeros(onb.points().dim());
  st.eval_point.assign(x.begin(), x.end());
  st.frame = onb.frame();
  return st;
}

Stencil derivative_stencil(const OrthonormalBasis& onb, std::span<const double> x,
                           const MultiIndex& beta) {
  if (beta.total_degree() < 1)
    throw invalid_input("derivative_stencil: |beta| must be >= 1 (use interpolation_weights)");
  const std::vector<double> dp = onb.frame_derivative_values_at(x, beta);
  Stencil st;
  st.derivative = beta;
  st.eval_point.assign(x.begin(), x.end());
  st.frame = onb.frame();

  bool all_zero = true;
  for (double v : dp)
    if (v != 0.0) all_zero = false;
  if (all_zero) {
    st.node_weights.assign(onb.points().size(), 0.0);
    st.fit_derivative_vanishes = true;
    return st;
  }
  st.node_weights = node_combination(onb, dp);
  const double rescale = std::pow(onb.frame().scale, -beta.total_degree());
  for (double& v : st.node_weights) v *= rescale;
  return st;
}

double apply_stencil(const Stencil& st, std::span<const double> f_values) {
  if (f_values.size() != st.node_weights.size())
    throw invalid_input("apply_stencil: sample count mismatch");
  return simd::kernels().dot(st.node_weights.data(), f_values.data(), f_values.size());
}

DerivativeEstimate estimate_derivative(const PointSet& points, std::span<const double> f_values,
                                       std::span<const double> x0, const MultiIndex& beta,
                                       const EstimateOptions& options) {
  if (static_cast<int>(f_values.size()) != points.size())
    throw invalid_input("estimate_derivative: sample count does not match point count");

  const int n_use = options.neighborhood > 0 ? options.neighborhood : points.size();
  PointSet sel = select_neighborhood(points, x0, n_use);

  // carry the samples along with the neighborhood reordering
  const std::vector<int> order = neighborhood_order(points, x0);
  std::vector<double> f_sel(n_use);
  for (int k = 0; k < n_use; ++k) f_sel[k] = f_values[order[k]];

  const OrthonormalBasis onb = build_orthonormal_basis(sel, options.selection, x0);

  DerivativeEstimate est;
  est.basis = onb.basis();
  est.points_used = n_use;
  est.stencil = derivative_stencil(onb, x0, beta);
  est.value = apply_stencil(est.stencil, f_sel);
  const CompletenessReport comp = check_derivative_completeness(onb.basis(), beta.total_degree());
  est.derivative_complete = comp.complete;
  est.missing = comp.missing;
  return est;
}

void write_stencil_csv(const Stencil& st, const PointSet& points, std::ostream& out) {
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  out << "eval_point";
  for (double v : st.eval_point) {
    out << ',';
    put(v);
  }
  out << "\nderivative";
  for (int j = 0; j < st.derivative.dim(); ++j) out << ',' << st.derivative[j];
  out << "\nframe_scale,";
  put(st.frame.scale);
  out << "\nnodes," << st.node_weights.size() << '\n';
  out << "index";
  for (int j = 0; j < points.dim(); ++j) out << ",x" << j + 1;
  out << ",weight\n";
  for (std::size_t i = 0; i < st.node_weights.size(); ++i) {
    out << i;
    for (int j = 0; j < points.dim(); ++j) {
      out << ',';
      put(points.coord(static_cast<int>(i), j));
    }
    out << ',';
    put(st.node_weights[i]);
    out << '\n';
  }
}

}  // namespace mlsop
