#include "mlsop/basis_selection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mlsop/errors.hpp"
#include "mlsop/matrix.hpp"
#include "mlsop/simd.hpp"

namespace mlsop {

MonomialBasis::MonomialBasis(std::vector<CandidateRecord> trace, std::uint64_t fingerprint,
                             bool exhausted)
    : trace_(std::move(trace)), fingerprint_(fingerprint), exhausted_(exhausted) {
  for (const auto& rec : trace_)
    (rec.accepted ? accepted_ : rejected_).push_back(rec.index);
}

bool MonomialBasis::contains(const MultiIndex& a) const {
  return std::find(accepted_.begin(), accepted_.end(), a) != accepted_.end();
}

int MonomialBasis::max_accepted_degree() const {
  int deg = 0;
  for (const auto& a : accepted_) deg = std::max(deg, a.total_degree());
  return deg;
}

namespace {

// Values of x^alpha at every point, written into row (length N).
void monomial_row(const PointSet& pts, const MultiIndex& alpha, double* row) {
  const std::size_t n = static_cast<std::size_t>(pts.size());
  std::fill(row, row + n, 1.0);
  const auto& k = simd::kernels();
  for (int j = 0; j < pts.dim(); ++j)
    if (alpha[j] > 0) k.pow_mul(row, pts.column(j).data(), static_cast<unsigned>(alpha[j]), n);
}

}  // namespace

MonomialBasis select_basis(const PointSet& points, const SelectionConfig& config,
                           std::span<const double> x0) {
  if (config.rank_tolerance <= 0.0) throw invalid_input("rank tolerance must be positive");
  std::vector<double> origin;
  if (x0.empty()) {
    origin.assign(points.dim(), 0.0);
    x0 = origin;
  }
  const ScaleFrame frame =
      config.normalize ? normalization_frame(points, x0) : identity_frame(points.dim());
  const PointSet work = to_frame_coords(points, frame);

  const int N = work.size();
  const std::size_t n = static_cast<std::size_t>(N);
  const auto& k = simd::kernels();

  int degree_limit = config.hard_degree_cap;
  if (config.stop == StopRule::max_degree) degree_limit = config.max_degree;

  Matrix q(N, N);  // orthonormalized accepted rows
  int nq = 0;
  std::vector<CandidateRecord> trace;
  std::vector<double> row(n);
  bool square = false;

  for (int deg = 0; deg <= degree_limit && !square; ++deg) {
    for (const auto& alpha : enumerate_degree_block(points.dim(), deg)) {
      monomial_row(work, alpha, row.data());
      const double nrm = std::sqrt(k.dot(row.data(), row.data(), n));
      // two projection passes keep the stored rows orthonormal to rounding
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < nq; ++i) k.axpy(-k.dot(q.row(i), row.data(), n), q.row(i), row.data(), n);
      const double res = std::sqrt(k.dot(row.data(), row.data(), n));
      const bool accept = nrm > 0.0 && res > config.rank_tolerance * nrm;
      trace.push_back({alpha, accept, nrm > 0.0 ? res / nrm : 0.0});
      if (accept) {
        const double inv = 1.0 / res;
        for (std::size_t c = 0; c < n; ++c) q(nq, static_cast<int>(c)) = row[c] * inv;
        ++nq;
        if (nq == N) {
          square = true;
          break;
        }
        if (config.stop == StopRule::max_count && nq == config.max_count) {
          square = true;  // reuse the early-out; not an exhaustion
          break;
        }
      }
    }
  }

  const bool exhausted = (config.stop == StopRule::square_full_rank) && !square;
  return MonomialBasis(std::move(trace), points.fingerprint(), exhausted);
}

CompletenessReport check_derivative_completeness(const MonomialBasis& basis, int order) {
  if (order < 0) throw invalid_input("completeness order must be >= 0");
  if (basis.accepted().empty()) throw invalid_input("completeness check on an empty basis");
  CompletenessReport rep;
  const int dim = basis.accepted().front().dim();
  for (const auto& a : enumerate_multiindices(dim, order))
    if (!basis.contains(a)) rep.missing.push_back(a);
  rep.complete = rep.missing.empty();
  return rep;
}

void write_selection_report(const MonomialBasis& basis, std::ostream& out) {
  char buf[64];
  for (const auto& rec : basis.trace()) {
    for (int j = 0; j < rec.index.dim(); ++j) out << rec.index[j] << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", rec.rel_residual);
    out << (rec.accepted ? "accepted" : "rejected") << ' ' << buf << '\n';
  }
}

}  // namespace mlsop
