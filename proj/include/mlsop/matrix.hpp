#pragma once

#include <cstddef>
#include <vector>

namespace mlsop {

/// Minimal dense row-major matrix; just enough for the small factorizations
/// and basis value tables used here.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * c_; }
  const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * c_; }

  const std::vector<double>& data() const { return a_; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<double> a_;
};

}  // namespace mlsop
