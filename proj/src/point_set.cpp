#include "mlsop/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mlsop/errors.hpp"

namespace mlsop {

PointSet::PointSet(int dim, std::span<const double> points, std::span<const double> weights)
    : dim_(dim) {
  if (dim < 1) throw invalid_input("point set dimension must be >= 1");
  if (points.empty() || points.size() % static_cast<std::size_t>(dim) != 0)
    throw invalid_input("empty point set or point data not a multiple of the dimension");
  n_ = static_cast<int>(points.size() / static_cast<std::size_t>(dim));
  if (!weights.empty() && static_cast<int>(weights.size()) != n_)
    throw invalid_input("weight count does not match point count");

  for (double v : points)
    if (!std::isfinite(v)) throw invalid_input("non-finite point coordinate");

  cols_.resize(points.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < dim_; ++j)
      cols_[static_cast<std::size_t>(j) * n_ + i] = points[static_cast<std::size_t>(i) * dim_ + j];

  if (weights.empty()) {
    w_.assign(n_, 1.0);
  } else {
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw invalid_input("weights must be strictly positive and finite");
    w_.assign(weights.begin(), weights.end());
  }
}

std::vector<double> PointSet::point(int i) const {
  std::vector<double> p(dim_);
  for (int j = 0; j < dim_; ++j) p[j] = coord(i, j);
  return p;
}

std::uint64_t PointSet::fingerprint() const {
  auto mix = [](std::uint64_t h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h ^= bits;
    return h * 0x100000001b3ull;
  };
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = mix(h, static_cast<double>(dim_));
  for (double v : cols_) h = mix(h, v);
  for (double v : w_) h = mix(h, v);
  return h;
}

PointSet make_pointset(int dim, std::span<const double> points, std::span<const double> weights) {
  return PointSet(dim, points, weights);
}

std::vector<int> neighborhood_order(const PointSet& ps, std::span<const double> x0) {
  if (static_cast<int>(x0.size()) != ps.dim())
    throw invalid_input("neighborhood_order: evaluation point dimension mismatch");
  std::vector<std::pair<double, int>> order(ps.size());
  for (int i = 0; i < ps.size(); ++i) {
    double d2 = 0.0;
    for (int j = 0; j < ps.dim(); ++j) {
      double t = ps.coord(i, j) - x0[j];
      d2 += t * t;
    }
    order[i] = {d2, i};
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> idx(ps.size());
  for (int i = 0; i < ps.size(); ++i) idx[i] = order[i].second;
  return idx;
}

PointSet select_neighborhood(const PointSet& ps, std::span<const double> x0, int n) {
  if (n < 1 || n > ps.size())
    throw invalid_input("select_neighborhood: requested count exceeds available points");
  const std::vector<int> order = neighborhood_order(ps, x0);

  std::vector<double> pts(static_cast<std::size_t>(n) * ps.dim()), w(n);
  for (int k = 0; k < n; ++k) {
    int i = order[k];
    for (int j = 0; j < ps.dim(); ++j) pts[static_cast<std::size_t>(k) * ps.dim() + j] = ps.coord(i, j);
    w[k] = ps.weight(i);
  }
  return PointSet(ps.dim(), pts, w);
}

namespace {

PointSet map_points(const PointSet& ps, const ScaleFrame& frame, bool forward) {
  if (static_cast<int>(frame.center.size()) != ps.dim())
    throw invalid_input("frame center dimension mismatch");
  if (!(frame.scale > 0.0)) throw invalid_input("frame scale must be positive");
  std::vector<double> pts(static_cast<std::size_t>(ps.size()) * ps.dim());
  for (int i = 0; i < ps.size(); ++i)
    for (int j = 0; j < ps.dim(); ++j) {
      double v = ps.coord(i, j);
      pts[static_cast<std::size_t>(i) * ps.dim() + j] =
          forward ? frame.center[j] + frame.scale * (v - frame.center[j])
                  : (v - frame.center[j]) / frame.scale;
    }
  std::vector<double> w(ps.weights().begin(), ps.weights().end());
  return PointSet(ps.dim(), pts, w);
}

}  // namespace

PointSet apply_scale(const PointSet& ps, const ScaleFrame& frame) {
  return map_points(ps, frame, true);
}

PointSet to_frame_coords(const PointSet& ps, const ScaleFrame& frame) {
  return map_points(ps, frame, false);
}

ScaleFrame normalization_frame(const PointSet& ps, std::span<const double> x0) {
  if (static_cast<int>(x0.size()) != ps.dim())
    throw invalid_input("normalization_frame: point dimension mismatch");
  double r2max = 0.0;
  for (int i = 0; i < ps.size(); ++i) {
    double d2 = 0.0;
    for (int j = 0; j < ps.dim(); ++j) {
      double t = ps.coord(i, j) - x0[j];
      d2 += t * t;
    }
    r2max = std::max(r2max, d2);
  }
  double s = std::sqrt(r2max);
  return ScaleFrame{std::vector<double>(x0.begin(), x0.end()), s > 0.0 ? s : 1.0};
}

ScaleFrame identity_frame(int dim) {
  return ScaleFrame{std::vector<double>(dim, 0.0), 1.0};
}

PointSet read_pointset(std::istream& in, int dim) {
  if (dim < 1) throw invalid_input("read_pointset: dimension must be >= 1");
  std::vector<double> pts, w;
  bool has_weights = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (!ls.eof())
      throw io_error("point file: unparsable token on line " + std::to_string(lineno));
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) == dim + 1) {
      if (!w.empty() && !has_weights)
        throw io_error("point file: inconsistent column count on line " + std::to_string(lineno));
      has_weights = true;
      w.push_back(vals.back());
      vals.pop_back();
    } else if (static_cast<int>(vals.size()) == dim) {
      if (has_weights)
        throw io_error("point file: inconsistent column count on line " + std::to_string(lineno));
      w.push_back(1.0);
    } else {
      throw io_error("point file: expected " + std::to_string(dim) + " or " +
                     std::to_string(dim + 1) + " columns on line " + std::to_string(lineno));
    }
    pts.insert(pts.end(), vals.begin(), vals.end());
  }
  if (pts.empty()) throw invalid_input("empty point set");
  return PointSet(dim, pts, w);
}

PointSet read_pointset_file(const std::string& path, int dim) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open point file: " + path);
  return read_pointset(f, dim);
}

}  // namespace mlsop
