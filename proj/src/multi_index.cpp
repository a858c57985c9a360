#include "mlsop/multi_index.hpp"

#include <numeric>

#include "mlsop/errors.hpp"

namespace mlsop {

MultiIndex::MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
  if (e_.empty()) throw invalid_input("multi-index needs dimension >= 1");
  for (int v : e_)
    if (v < 0) throw invalid_input("multi-index exponents must be non-negative");
}

int MultiIndex::total_degree() const {
  return std::accumulate(e_.begin(), e_.end(), 0);
}

std::string MultiIndex::to_string() const {
  std::string s;
  for (int j = 0; j < dim(); ++j) {
    if (e_[j] == 0) continue;
    if (!s.empty()) s += ' ';
    s += "x" + std::to_string(j + 1);
    if (e_[j] > 1) s += "^" + std::to_string(e_[j]);
  }
  return s.empty() ? "1" : s;
}

namespace {

// Emit the degree-`deg` block in descending lexicographic order: the exponent
// of the first variable runs from deg down to 0, recursing on the remainder.
void emit_degree_block(int dim, int deg, std::vector<int>& cur, int pos,
                       std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    cur[pos] = deg;
    out.emplace_back(cur);
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur[pos] = e;
    emit_degree_block(dim, deg - e, cur, pos + 1, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int dim, int max_degree) {
  if (dim < 1) throw invalid_input("dimension must be >= 1");
  if (max_degree < 0) throw invalid_input("max_degree must be >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur(dim, 0);
  for (int deg = 0; deg <= max_degree; ++deg) emit_degree_block(dim, deg, cur, 0, out);
  return out;
}

std::vector<MultiIndex> enumerate_degree_block(int dim, int degree) {
  if (dim < 1) throw invalid_input("dimension must be >= 1");
  if (degree < 0) throw invalid_input("degree must be >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur(dim, 0);
  emit_degree_block(dim, degree, cur, 0, out);
  return out;
}

double monomial_eval(std::span<const double> x, const MultiIndex& alpha) {
  if (static_cast<int>(x.size()) != alpha.dim())
    throw invalid_input("monomial_eval: point/index dimension mismatch");
  double v = 1.0;
  for (int j = 0; j < alpha.dim(); ++j) {
    double p = 1.0, b = x[j];
    unsigned e = static_cast<unsigned>(alpha[j]);
    while (e) {
      if (e & 1u) p *= b;
      e >>= 1u;
      if (e) b *= b;
    }
    v *= p;
  }
  return v;
}

Monomial monomial_derivative(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.dim() != beta.dim())
    throw invalid_input("monomial_derivative: index dimension mismatch");
  std::vector<int> rest(alpha.dim());
  double coeff = 1.0;
  for (int j = 0; j < alpha.dim(); ++j) {
    if (beta[j] > alpha[j]) return Monomial{0.0, MultiIndex::zeros(alpha.dim())};
    for (int t = alpha[j]; t > alpha[j] - beta[j]; --t) coeff *= t;
    rest[j] = alpha[j] - beta[j];
  }
  return Monomial{coeff, MultiIndex(std::move(rest))};
}

}  // namespace mlsop
