#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mlsop/errors.hpp"
#include "mlsop/orthonormal_basis.hpp"
#include "test_helpers.hpp"

using namespace mlsop;
using testutil::circle6;
using testutil::grid9;

namespace {

MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }

SelectionConfig raw_square() {
  SelectionConfig cfg;
  cfg.stop = StopRule::square_full_rank;
  cfg.normalize = false;  // worked examples are in raw coordinates
  return cfg;
}

double inner(const OrthonormalBasis& onb, int i, int j) {
  double s = 0.0;
  for (int k = 0; k < onb.frame_points().size(); ++k)
    s += onb.node_values()(i, k) * onb.node_values()(j, k) * onb.frame_points().weight(k);
  return s;
}

double max_gram_defect(const OrthonormalBasis& onb) {
  double worst = 0.0;
  for (int i = 0; i < onb.size(); ++i)
    for (int j = 0; j <= i; ++j)
      worst = std::max(worst, std::abs(inner(onb, i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST_CASE("gram matrix worked examples") {
  SelectionConfig one;
  one.stop = StopRule::max_count;
  one.max_count = 1;
  one.normalize = false;

  const MonomialBasis gb = select_basis(grid9(), one);
  const Matrix mg = gram_matrix(grid9(), gb);
  CHECK(mg.rows() == 1);
  CHECK(mg(0, 0) == doctest::Approx(9.0));

  SelectionConfig two = one;
  two.max_count = 2;
  const MonomialBasis cb = select_basis(circle6(), two);
  REQUIRE(cb.accepted() == std::vector<MultiIndex>{mi({0, 0}), mi({1, 0})});
  const Matrix mc = gram_matrix(circle6(), cb);
  CHECK(mc(0, 0) == doctest::Approx(6.0));
  CHECK(mc(0, 1) == doctest::Approx(0.0));
  CHECK(mc(1, 0) == doctest::Approx(0.0));
  CHECK(mc(1, 1) == doctest::Approx(3.0));

  const PointSet single(3, std::vector<double>{0, 0, 0});
  SelectionConfig sc = one;
  const MonomialBasis sb = select_basis(single, sc);
  const Matrix ms = gram_matrix(single, sb);
  CHECK(ms(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("ldl closed forms and reconstruction") {
  Matrix eye = Matrix::identity(3);
  const LdlFactors fi = ldl_decompose(eye);
  for (int i = 0; i < 3; ++i) {
    CHECK(fi.diagonal[i] == doctest::Approx(1.0));
    for (int j = 0; j < i; ++j) CHECK(fi.unit_lower(i, j) == doctest::Approx(0.0));
  }

  Matrix m(2, 2);
  m(0, 0) = 4;
  m(0, 1) = 2;
  m(1, 0) = 2;
  m(1, 1) = 3;
  const LdlFactors f2 = ldl_decompose(m);
  CHECK(f2.unit_lower(1, 0) == doctest::Approx(0.5));
  CHECK(f2.diagonal[0] == doctest::Approx(4.0));
  CHECK(f2.diagonal[1] == doctest::Approx(2.0));

  // gram of {1, x1} on the circle is already diagonal
  SelectionConfig two;
  two.stop = StopRule::max_count;
  two.max_count = 2;
  two.normalize = false;
  const MonomialBasis cb = select_basis(circle6(), two);
  const LdlFactors fc = ldl_decompose(gram_matrix(circle6(), cb));
  CHECK(fc.unit_lower(1, 0) == doctest::Approx(0.0));
  CHECK(fc.diagonal[0] == doctest::Approx(6.0));
  CHECK(fc.diagonal[1] == doctest::Approx(3.0));

  // random SPD reconstruction to relative 1e-12
  Rng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + (int)(rng.uniform01() * 6);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1, 1);
    Matrix spd(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = i == j ? 0.5 : 0.0;  // small diagonal shift keeps it PD
        for (int k = 0; k < n; ++k) s += a(i, k) * a(j, k);
        spd(i, j) = s;
      }
    const LdlFactors f = ldl_decompose(spd);
    double scale = 0.0, defect = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double r = 0.0;
        for (int k = 0; k < n; ++k)
          r += f.unit_lower(i, k) * f.diagonal[k] * f.unit_lower(j, k);
        defect = std::max(defect, std::abs(r - spd(i, j)));
        scale = std::max(scale, std::abs(spd(i, j)));
      }
    CHECK(defect <= 1e-12 * scale);
  }

  Matrix indef(2, 2);
  indef(0, 0) = 1;
  indef(0, 1) = 2;
  indef(1, 0) = 2;
  indef(1, 1) = 1;  // second pivot negative
  CHECK_THROWS_AS(ldl_decompose(indef), numerical_error);
}

TEST_CASE("grid basis reproduces the nine worked polynomials") {
  const OrthonormalBasis onb = build_orthonormal_basis(grid9(), raw_square());
  REQUIRE(onb.size() == 9);
  const Matrix& r = onb.coefficients();
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);

  // expected rows over (1, x1, x2, x1^2, x1x2, x2^2, x1^2x2, x1x2^2, x1^2x2^2)
  const double expect[9][9] = {
      {1.0 / 3, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 1 / s6, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 1 / s6, 0, 0, 0, 0, 0, 0},
      {-s2 / 3, 0, 0, 1 / s2, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0.5, 0, 0, 0, 0},
      {-s2 / 3, 0, 0, 0, 0, 1 / s2, 0, 0, 0},
      {0, 0, -1 / s3, 0, 0, 0, s3 / 2, 0, 0},
      {0, -1 / s3, 0, 0, 0, 0, 0, s3 / 2, 0},
      // numerically orthogonal variant: ... + (3/2) x1^2 x2^2
      {2.0 / 3, 0, 0, -1.0, 0, -1.0, 0, 0, 1.5},
  };
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) CHECK(std::abs(r(i, j) - expect[i][j]) <= 1e-10);
  CHECK(max_gram_defect(onb) <= 1e-10);
}

TEST_CASE("circle basis reproduces the six worked polynomials") {
  const OrthonormalBasis onb = build_orthonormal_basis(circle6(), raw_square());
  REQUIRE(onb.size() == 6);
  const Matrix& r = onb.coefficients();
  const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);

  // rows over (1, x1, x2, x1^2, x1x2, x1^3)
  const double expect[6][6] = {
      {1 / s6, 0, 0, 0, 0, 0},
      {0, 1 / s3, 0, 0, 0, 0},
      {0, 0, 1 / s3, 0, 0, 0},
      {-1 / s3, 0, 0, 2 / s3, 0, 0},
      {0, 0, 0, 0, 2 / s3, 0},
      {0, -std::sqrt(1.5), 0, 0, 0, 2 * std::sqrt(2.0 / 3.0)},
  };
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(std::abs(r(i, j) - expect[i][j]) <= 1e-10);
}

TEST_CASE("single point normalizes the constant by its weight") {
  const PointSet p(2, std::vector<double>{0.0, 0.0}, std::vector<double>{4.0});
  SelectionConfig cfg = raw_square();
  cfg.hard_degree_cap = 4;
  const OrthonormalBasis onb = build_orthonormal_basis(p, cfg);
  REQUIRE(onb.size() == 1);
  CHECK(onb.coefficients()(0, 0) == doctest::Approx(0.5));  // 1/sqrt(w)
}

TEST_CASE("gram identity and triangular structure on random clouds") {
  Rng rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    const bool threed = rep % 2 == 1;
    const int n = 6 + (int)(rng.uniform01() * 122);
    const PointSet pts =
        threed ? testutil::random_ball(rng, n) : testutil::random_disc(rng, n);
    SelectionConfig cfg;
    cfg.stop = StopRule::max_degree;
    cfg.max_degree = 2 + rep % 3;
    const OrthonormalBasis onb = build_orthonormal_basis(pts, cfg);

    CHECK(max_gram_defect(onb) <= 1e-10);
    for (int i = 0; i < onb.size(); ++i) {
      CHECK(onb.coefficients()(i, i) > 0.0);
      for (int j = i + 1; j < onb.size(); ++j) CHECK(onb.coefficients()(i, j) == 0.0);
    }
  }
}

TEST_CASE("span reproduction: accepted monomials expand exactly") {
  const OrthonormalBasis onb = build_orthonormal_basis(grid9(), raw_square());
  const PointSet& pts = onb.frame_points();
  for (int j = 0; j < onb.size(); ++j) {
    // projection coefficients of the monomial onto the basis
    std::vector<double> proj(onb.size(), 0.0);
    for (int i = 0; i < onb.size(); ++i)
      for (int k = 0; k < pts.size(); ++k)
        proj[i] += monomial_eval(pts.point(k), onb.basis().accepted()[j]) *
                   onb.node_values()(i, k) * pts.weight(k);
    for (int k = 0; k < pts.size(); ++k) {
      double rec = 0.0;
      for (int i = 0; i < onb.size(); ++i) rec += proj[i] * onb.node_values()(i, k);
      CHECK(std::abs(rec - monomial_eval(pts.point(k), onb.basis().accepted()[j])) <= 1e-10);
    }
  }
}

TEST_CASE("128 random disc points with an order-2 cap give six polynomials") {
  Rng rng(31);
  const PointSet pts = testutil::random_disc(rng, 128);
  SelectionConfig cfg;
  cfg.stop = StopRule::max_degree;
  cfg.max_degree = 2;
  const OrthonormalBasis onb = build_orthonormal_basis(pts, cfg);
  CHECK(onb.size() == 6);
  CHECK(max_gram_defect(onb) <= 1e-10);
}

TEST_CASE("basis csv export carries exponents and coefficients") {
  const OrthonormalBasis onb = build_orthonormal_basis(circle6(), raw_square());
  std::ostringstream out;
  write_basis_csv(onb, out);
  const std::string s = out.str();
  CHECK(s.find("monomial,0,0,0") != std::string::npos);
  CHECK(s.find("coeff,0,") != std::string::npos);
  CHECK(std::count(s.begin(), s.end(), '\n') == 12);
}

TEST_CASE("values_at matches node tables") {
  const OrthonormalBasis onb = build_orthonormal_basis(grid9(), raw_square());
  for (int k = 0; k < 9; ++k) {
    const std::vector<double> v = onb.values_at(onb.points().point(k));
    for (int i = 0; i < onb.size(); ++i)
      CHECK(v[i] == doctest::Approx(onb.node_values()(i, k)).epsilon(1e-12));
  }
}
