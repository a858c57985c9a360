#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mlsop/multi_index.hpp"
#include "mlsop/point_set.hpp"

namespace mlsop {

/// How the incremental monomial walk terminates.
enum class StopRule {
  square_full_rank,  // stop once as many monomials are accepted as points
  max_degree,        // walk every candidate of total degree <= max_degree
  max_count          // stop once max_count monomials are accepted
};

struct SelectionConfig {
  /// A candidate row is accepted when its residual after projection onto the
  /// span of the accepted rows exceeds rank_tolerance times its own norm.
  double rank_tolerance = 1e-8;
  StopRule stop = StopRule::square_full_rank;
  int max_degree = 2;   // for StopRule::max_degree
  int max_count = 1;    // for StopRule::max_count
  /// Translate points to the evaluation point and divide by the maximum
  /// radius before rank testing and orthogonalization.
  bool normalize = true;
  /// Safety bound for square_full_rank on configurations whose polynomial
  /// space saturates below N (coincident points and the like).
  int hard_degree_cap = 40;
};

/// Outcome of testing one enumerated monomial.
struct CandidateRecord {
  MultiIndex index;
  bool accepted = false;
  double rel_residual = 0.0;  // residual norm / row norm at test time
};

/// Ordered accepted monomial powers spanning the polynomial space on a point
/// set, plus the rejected ones. accepted+rejected is a prefix of the graded
/// lexicographic enumeration.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(std::vector<CandidateRecord> trace, std::uint64_t fingerprint, bool exhausted);

  const std::vector<MultiIndex>& accepted() const { return accepted_; }
  const std::vector<MultiIndex>& rejected() const { return rejected_; }
  const std::vector<CandidateRecord>& trace() const { return trace_; }
  int size() const { return static_cast<int>(accepted_.size()); }
  std::uint64_t pointset_fingerprint() const { return fingerprint_; }

  /// True when the square_full_rank walk ran out of degrees before the
  /// evaluation matrix became square; the basis is still valid, just partial.
  bool exhausted() const { return exhausted_; }

  bool contains(const MultiIndex& a) const;
  int max_accepted_degree() const;

 private:
  std::vector<CandidateRecord> trace_;
  std::vector<MultiIndex> accepted_;
  std::vector<MultiIndex> rejected_;
  std::uint64_t fingerprint_ = 0;
  bool exhausted_ = false;
};

/// Walk the graded-lex enumeration starting from the constant monomial,
/// keeping each candidate iff the evaluation matrix retains full row rank at
/// config.rank_tolerance. x0 (default: origin) centers the normalization.
MonomialBasis select_basis(const PointSet& points, const SelectionConfig& config,
                           std::span<const double> x0 = {});

struct CompletenessReport {
  bool complete = false;
  std::vector<MultiIndex> missing;  // indices with |alpha| <= order not accepted
};

/// Does the basis contain every monomial of total degree <= order?
CompletenessReport check_derivative_completeness(const MonomialBasis& basis, int order);

/// Diagnostic dump: one line per enumerated monomial with exponents,
/// accepted/rejected flag and the relative residual at test time.
void write_selection_report(const MonomialBasis& basis, std::ostream& out);

}  // namespace mlsop
