#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mlsop {

/// Exponent vector of a monomial x^alpha in d variables.
/// Immutable after construction; total degree |alpha| = sum of exponents.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  static MultiIndex zeros(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }

  int dim() const { return static_cast<int>(e_.size()); }
  int operator[](int j) const { return e_[j]; }
  int total_degree() const;
  const std::vector<int>& exponents() const { return e_; }

  bool operator==(const MultiIndex& o) const = default;

  /// "x1^2 x2" style; the constant index prints as "1".
  std::string to_string() const;

 private:
  std::vector<int> e_;
};

/// Monomial with a real coefficient: c * x^alpha.
struct Monomial {
  double coefficient = 0.0;
  MultiIndex index;
};

/// All multi-indices with |alpha| <= max_degree, grouped by ascending total
/// degree and, within each degree, in descending lexicographic order of the
/// exponent tuple (the fixed convention; in 2D the degree-2 block reads
/// x1^2, x1 x2, x2^2).
std::vector<MultiIndex> enumerate_multiindices(int dim, int max_degree);

/// The |alpha| == degree block alone, in the same within-degree order.
std::vector<MultiIndex> enumerate_degree_block(int dim, int degree);

/// Value of x^alpha with the 0^0 = 1 convention.
double monomial_eval(std::span<const double> x, const MultiIndex& alpha);

/// Formal derivative d^beta x^alpha: coefficient prod_j alpha_j!/(alpha_j-beta_j)!
/// and index alpha - beta. Over-differentiation yields the zero monomial
/// (coefficient 0, all-zero index).
Monomial monomial_derivative(const MultiIndex& alpha, const MultiIndex& beta);

}  // namespace mlsop
