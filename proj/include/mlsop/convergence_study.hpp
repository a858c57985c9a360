#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlsop/multi_index.hpp"
#include "mlsop/point_set.hpp"
#include "mlsop/test_functions.hpp"

namespace mlsop {

/// Configuration of a randomized convergence study: sample point clouds on
/// the unit disc/ball, contract the sampled function values by each sigma,
/// estimate d^beta at the origin and average absolute errors over trials.
///
/// The recorded error is measured in the contracted frame,
/// |sum_j v_j f(sigma x_j) - sigma^|beta| d^beta f(0)|, i.e. the error of the
/// derivative of f(sigma .) that the stencil natively estimates; rates of the
/// power-law fit |eps| = eps0 sigma^r then match for every derivative order.
struct StudyConfig {
  int dimension = 2;
  TestFn function = TestFn::f2;
  MultiIndex beta;
  std::vector<int> orders = {2, 3, 4};
  std::vector<int> point_counts = {8, 16, 32, 64, 128};
  std::vector<double> sigmas = {0.5, 0.25, 0.125, 0.0625};
  int trials = 32;
  std::uint64_t seed = 1;
  /// Rejection threshold of the study pipeline. The default is looser than
  /// the library default on purpose: it reproduces the reference rejected-
  /// monomial statistics on random small-N clouds (see README).
  double rank_tolerance = 0.2;
  bool parallel = true;
};

struct RateFit {
  double rate = 0.0;
  double eps0 = 0.0;
  int used = 0;      // (sigma, error) pairs entering the fit
  int excluded = 0;  // non-positive errors left out
};

/// Ordinary least squares of log eps against log sigma.
/// Throws invalid_input when fewer than two usable pairs remain.
RateFit fit_rate(std::span<const double> sigmas, std::span<const double> errors);

/// Aggregated results for one (order, N) pair.
struct StudyCell {
  int order = 0;
  int npoints = 0;
  std::vector<double> mean_err, min_err, max_err;  // per sigma, over trials
  double mean_rejected = 0.0;
  double mean_accepted = 0.0;
  int degenerate_trials = 0;  // basis construction failed; excluded from means
  RateFit rate;
  bool rate_valid = false;
};

struct StudyReport {
  StudyConfig config;
  std::vector<StudyCell> cells;  // orders-major, point_counts-minor
  const StudyCell& cell(int order, int npoints) const;
};

StudyReport run_convergence_study(const StudyConfig& cfg);

/// One row of the fixed-configuration study: nominal fourth-order fits on
/// the N nearest of twenty fixed random points.
struct DetailRow {
  int npoints = 0;
  int accepted = 0;
  int rejected = 0;
  std::vector<MultiIndex> quartics_included;
  bool quartic_complete = false;
  bool has_mixed_quartic = false;  // x1^2 x2^2 accepted
  // contracted-frame errors of the three second derivatives of f2
  double err_d20 = 0.0, err_d11 = 0.0, err_d02 = 0.0;
};

struct DetailReport {
  std::uint64_t seed = 0;
  double sigma = 0.0;
  double rank_tolerance = 0.0;
  std::vector<DetailRow> rows;  // N = 6..20
};

DetailReport run_detail_study(std::uint64_t seed, double sigma = 0.125,
                              double rank_tolerance = 0.2);

// --- report output ---------------------------------------------------------

/// One row per (function, order, N, sigma): mean/min/max absolute error.
void write_errors_csv(const StudyReport& rep, std::ostream& out);

/// Summary in the layout of the reference tables: one row per order with the
/// fitted rate at every N and the min/max mean error at the largest N.
void write_summary_csv(const StudyReport& rep, std::ostream& out);

/// log2(sigma) vs log2(mean error) columns for external plotting.
void write_plotdata_csv(const StudyReport& rep, std::ostream& out);

/// Mean rejected/accepted monomial counts per (order, N).
void write_rejected_csv(const StudyReport& rep, std::ostream& out);

/// Human-readable summary table.
void print_summary(const StudyReport& rep, std::ostream& out);

void write_detail_csv(const DetailReport& rep, std::ostream& out);
void print_detail(const DetailReport& rep, std::ostream& out);

}  // namespace mlsop
