#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "mlsop/errors.hpp"
#include "mlsop/point_set.hpp"
#include "mlsop/rng.hpp"

using namespace mlsop;

namespace {

PointSet grid9() {
  std::vector<double> pts;
  for (double y : {-1.0, 0.0, 1.0})
    for (double x : {-1.0, 0.0, 1.0}) {
      pts.push_back(x);
      pts.push_back(y);
    }
  return PointSet(2, pts);
}

}  // namespace

TEST_CASE("construction validates input") {
  // omitted weights become unit weights
  const PointSet g = grid9();
  CHECK(g.size() == 9);
  CHECK(g.dim() == 2);
  for (int i = 0; i < 9; ++i) CHECK(g.weight(i) == 1.0);

  std::vector<double> pts = {0, 0, 1, 1};
  std::vector<double> wbad = {1.0, 0.0};
  CHECK_THROWS_AS(PointSet(2, pts, wbad), invalid_input);
  std::vector<double> wneg = {1.0, -2.0};
  CHECK_THROWS_AS(PointSet(2, pts, wneg), invalid_input);
  CHECK_THROWS_AS(PointSet(2, std::vector<double>{}), invalid_input);
  CHECK_THROWS_AS(PointSet(2, std::vector<double>{1.0, 2.0, 3.0}), invalid_input);
  CHECK_THROWS_AS(PointSet(2, std::vector<double>{1.0, std::nan("")}), invalid_input);
}

TEST_CASE("six points on the unit circle") {
  std::vector<double> pts;
  for (int k = 0; k < 6; ++k) {
    pts.push_back(std::cos(k * M_PI / 3));
    pts.push_back(std::sin(k * M_PI / 3));
  }
  const PointSet c(2, pts);
  CHECK(c.size() == 6);
  for (int i = 0; i < 6; ++i) {
    const double r2 = c.coord(i, 0) * c.coord(i, 0) + c.coord(i, 1) * c.coord(i, 1);
    CHECK(r2 == doctest::Approx(1.0));
  }
}

TEST_CASE("neighborhood selection sorts by distance with index tie-break") {
  Rng rng(5);
  std::vector<double> pts;
  for (int i = 0; i < 20; ++i) {
    pts.push_back(rng.uniform(-1, 1));
    pts.push_back(rng.uniform(-1, 1));
  }
  const PointSet ps(2, pts);
  const std::vector<double> origin = {0.0, 0.0};

  const PointSet six = select_neighborhood(ps, origin, 6);
  CHECK(six.size() == 6);
  double prev = -1.0;
  for (int i = 0; i < 6; ++i) {
    const double d = std::hypot(six.coord(i, 0), six.coord(i, 1));
    CHECK(d >= prev);
    prev = d;
  }

  // full set is a permutation sorted by distance
  const PointSet all = select_neighborhood(ps, origin, 20);
  prev = -1.0;
  for (int i = 0; i < 20; ++i) {
    const double d = std::hypot(all.coord(i, 0), all.coord(i, 1));
    CHECK(d >= prev);
    prev = d;
  }

  CHECK_THROWS_AS(select_neighborhood(ps, origin, 21), invalid_input);

  // duplicate distances: lower original index first
  std::vector<double> dup = {1, 0, 0, 1, -1, 0};
  std::vector<double> w = {1, 2, 3};
  const PointSet d3(2, dup, w);
  const PointSet sel = select_neighborhood(d3, origin, 3);
  CHECK(sel.weight(0) == 1.0);
  CHECK(sel.weight(1) == 2.0);
  CHECK(sel.weight(2) == 3.0);
}

TEST_CASE("apply_scale contracts toward the center") {
  std::vector<double> pts = {1, 0, 0, 1};
  const PointSet ps(2, pts);

  const PointSet same = apply_scale(ps, ScaleFrame{{0, 0}, 1.0});
  CHECK(same.coord(0, 0) == doctest::Approx(1.0));

  const PointSet half = apply_scale(ps, ScaleFrame{{0, 0}, 0.5});
  CHECK(half.coord(0, 0) == doctest::Approx(0.5));
  CHECK(half.coord(0, 1) == doctest::Approx(0.0));
  CHECK(half.coord(1, 1) == doctest::Approx(0.5));

  // radius bound transforms linearly
  Rng rng(3);
  std::vector<double> rnd;
  for (int i = 0; i < 50; ++i) {
    const double th = rng.uniform(0, 2 * M_PI), r = rng.uniform01();
    rnd.push_back(r * std::cos(th));
    rnd.push_back(r * std::sin(th));
  }
  const PointSet disc(2, rnd);
  const double s = std::pow(2.0, -4);
  const PointSet scaled = apply_scale(disc, ScaleFrame{{0, 0}, s});
  for (int i = 0; i < scaled.size(); ++i)
    CHECK(std::hypot(scaled.coord(i, 0), scaled.coord(i, 1)) <= s + 1e-15);
}

TEST_CASE("scaling round-trips to relative 1e-12") {
  Rng rng(17);
  std::vector<double> pts;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 3; ++j) pts.push_back(rng.uniform(-5, 5));
  const PointSet ps(3, pts);
  const ScaleFrame f{{0.3, -1.0, 2.0}, 0.37};
  const ScaleFrame finv{{0.3, -1.0, 2.0}, 1.0 / 0.37};
  const PointSet back = apply_scale(apply_scale(ps, f), finv);
  for (int i = 0; i < ps.size(); ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(back.coord(i, j) == doctest::Approx(ps.coord(i, j)).epsilon(1e-12));
}

TEST_CASE("point file parsing") {
  std::istringstream in(
      "# a grid with comments\n"
      "0 0\n"
      "1 0  # trailing comment\n"
      "\n"
      "0 1\n");
  const PointSet ps = read_pointset(in, 2);
  CHECK(ps.size() == 3);
  CHECK(ps.weight(2) == 1.0);

  std::istringstream weighted("0 0 2.5\n1 0 0.5\n");
  const PointSet wp = read_pointset(weighted, 2);
  CHECK(wp.weight(0) == doctest::Approx(2.5));
  CHECK(wp.weight(1) == doctest::Approx(0.5));

  std::istringstream empty("# nothing\n\n");
  CHECK_THROWS_AS(read_pointset(empty, 2), invalid_input);

  std::istringstream bad("1 2 3 4\n");
  CHECK_THROWS_AS(read_pointset(bad, 2), io_error);

  std::istringstream mixed("0 0\n1 0 2.0\n");
  CHECK_THROWS_AS(read_pointset(mixed, 2), io_error);

  CHECK_THROWS_AS(read_pointset_file("/nonexistent/file.txt", 2), io_error);
}

TEST_CASE("fingerprint distinguishes point sets") {
  const PointSet a(2, std::vector<double>{0, 0, 1, 1});
  const PointSet b(2, std::vector<double>{0, 0, 1, 1.0000001});
  CHECK(a.fingerprint() != b.fingerprint());
  CHECK(a.fingerprint() == PointSet(2, std::vector<double>{0, 0, 1, 1}).fingerprint());
}
