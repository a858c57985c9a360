#include "mlsop/convergence_study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "mlsop/errors.hpp"
#include "mlsop/fitting.hpp"
#include "mlsop/orthonormal_basis.hpp"

namespace mlsop {

RateFit fit_rate(std::span<const double> sigmas, std::span<const double> errors) {
  if (sigmas.size() != errors.size()) throw invalid_input("fit_rate: length mismatch");
  RateFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(errors[i] > 0.0) || !(sigmas[i] > 0.0)) {
      ++fit.excluded;
      continue;
    }
    const double x = std::log(sigmas[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.used;
  }
  if (fit.used < 2) throw invalid_input("fit_rate: fewer than two usable (sigma, error) pairs");
  const double n = fit.used;
  fit.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.eps0 = std::exp((sy - fit.rate * sx) / n);
  return fit;
}

namespace {

struct TrialResult {
  // [order][N][sigma] -> abs error; degenerate[order][N] marks failures
  std::vector<std::vector<std::vector<double>>> err;
  std::vector<std::vector<int>> rejected, accepted;
  std::vector<std::vector<bool>> degenerate;
};

TrialResult run_trial(const StudyConfig& cfg, int trial) {
  const int no = static_cast<int>(cfg.orders.size());
  const int nn = static_cast<int>(cfg.point_counts.size());
  const int ns = static_cast<int>(cfg.sigmas.size());
  TrialResult r;
  r.err.assign(no, std::vector<std::vector<double>>(nn, std::vector<double>(ns, 0.0)));
  r.rejected.assign(no, std::vector<int>(nn, 0));
  r.accepted.assign(no, std::vector<int>(nn, 0));
  r.degenerate.assign(no, std::vector<bool>(nn, false));

  Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(trial));
  const std::vector<double> origin(cfg.dimension, 0.0);
  const int nbeta = cfg.beta.total_degree();
  const double exact0 = exact_derivative(cfg.function, origin, cfg.beta);

  for (int ni = 0; ni < nn; ++ni) {
    const int N = cfg.point_counts[ni];
    const PointSet cloud =
        cfg.dimension == 2 ? sample_disc(rng, N) : sample_ball(rng, N);

    // one pass of function values per sigma, shared across orders
    std::vector<std::vector<double>> gvals(ns, std::vector<double>(N));
    std::vector<double> xs(cfg.dimension);
    for (int si = 0; si < ns; ++si)
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < cfg.dimension; ++j) xs[j] = cfg.sigmas[si] * cloud.coord(i, j);
        gvals[si][i] = test_function_eval(cfg.function, xs);
      }

    for (int oi = 0; oi < no; ++oi) {
      SelectionConfig sel;
      sel.rank_tolerance = cfg.rank_tolerance;
      sel.stop = StopRule::max_degree;
      sel.max_degree = cfg.orders[oi];
      sel.normalize = true;
      try {
        const OrthonormalBasis onb = build_orthonormal_basis(cloud, sel, origin);
        const Stencil st = derivative_stencil(onb, origin, cfg.beta);
        r.rejected[oi][ni] = static_cast<int>(onb.basis().rejected().size());
        r.accepted[oi][ni] = onb.basis().size();
        for (int si = 0; si < ns; ++si) {
          const double est = apply_stencil(st, gvals[si]);
          const double target = std::pow(cfg.sigmas[si], nbeta) * exact0;
          // contracted-frame error: the stencil on the unit cloud estimates
          // the derivative of f(sigma .), whose exact value is sigma^|b| f^(b)(0)
          r.err[oi][ni][si] = std::abs(est - target);
        }
      } catch (const numerical_error&) {
        r.degenerate[oi][ni] = true;
      }
    }
  }
  return r;
}

int thread_count(const StudyConfig& cfg) {
  if (!cfg.parallel) return 1;
  unsigned hw = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("MLSOP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::max(1u, std::min(hw, static_cast<unsigned>(cfg.trials))));
}

}  // namespace

const StudyCell& StudyReport::cell(int order, int npoints) const {
  for (const auto& c : cells)
    if (c.order == order && c.npoints == npoints) return c;
  throw invalid_input("no study cell for order " + std::to_string(order) + ", N " +
                      std::to_string(npoints));
}

StudyReport run_convergence_study(const StudyConfig& cfg) {
  if (cfg.dimension != 2 && cfg.dimension != 3)
    throw invalid_input("convergence study supports dimension 2 or 3");
  if (cfg.beta.dim() != cfg.dimension)
    throw invalid_input("study beta dimension does not match the study dimension");
  if (cfg.trials < 1) throw invalid_input("study needs at least one trial");
  for (double s : cfg.sigmas)
    if (!(s > 0.0) || s > 1.0) throw invalid_input("sigma values must lie in (0, 1]");

  // independent per-trial streams; results gathered in trial order so the
  // report does not depend on scheduling
  std::vector<TrialResult> results(cfg.trials);
  const int nthreads = thread_count(cfg);
  if (nthreads <= 1) {
    for (int t = 0; t < cfg.trials; ++t) results[t] = run_trial(cfg, t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1))
          results[t] = run_trial(cfg, t);
      });
    for (auto& th : pool) th.join();
  }

  const int no = static_cast<int>(cfg.orders.size());
  const int nn = static_cast<int>(cfg.point_counts.size());
  const int ns = static_cast<int>(cfg.sigmas.size());
  StudyReport rep;
  rep.config = cfg;
  for (int oi = 0; oi < no; ++oi)
    for (int ni = 0; ni < nn; ++ni) {
      StudyCell cell;
      cell.order = cfg.orders[oi];
      cell.npoints = cfg.point_counts[ni];
      cell.mean_err.assign(ns, 0.0);
      cell.min_err.assign(ns, std::numeric_limits<double>::infinity());
      cell.max_err.assign(ns, 0.0);
      int good = 0;
      for (int t = 0; t < cfg.trials; ++t) {
        if (results[t].degenerate[oi][ni]) {
          ++cell.degenerate_trials;
          continue;
        }
        ++good;
        cell.mean_rejected += results[t].rejected[oi][ni];
        cell.mean_accepted += results[t].accepted[oi][ni];
        for (int si = 0; si < ns; ++si) {
          const double e = results[t].err[oi][ni][si];
          cell.mean_err[si] += e;
          cell.min_err[si] = std::min(cell.min_err[si], e);
          cell.max_err[si] = std::max(cell.max_err[si], e);
        }
      }
      if (good > 0) {
        cell.mean_rejected /= good;
        cell.mean_accepted /= good;
        for (int si = 0; si < ns; ++si) cell.mean_err[si] /= good;
      }
      try {
        cell.rate = fit_rate(cfg.sigmas, cell.mean_err);
        cell.rate_valid = true;
      } catch (const invalid_input&) {
        cell.rate_valid = false;
      }
      rep.cells.push_back(std::move(cell));
    }
  return rep;
}

DetailReport run_detail_study(std::uint64_t seed, double sigma, double rank_tolerance) {
  DetailReport rep;
  rep.seed = seed;
  rep.sigma = sigma;
  rep.rank_tolerance = rank_tolerance;

  Rng rng = Rng::stream(seed, 0);
  const PointSet cloud = sample_disc(rng, 20);
  const std::vector<double> origin(2, 0.0);
  const PointSet sorted = select_neighborhood(cloud, origin, 20);
  const auto quartics = enumerate_degree_block(2, 4);

  const MultiIndex b20({2, 0}), b11({1, 1}), b02({0, 2});
  const double e20 = exact_derivative(TestFn::f2, origin, b20);
  const double e11 = exact_derivative(TestFn::f2, origin, b11);
  const double e02 = exact_derivative(TestFn::f2, origin, b02);

  for (int n = 6; n <= 20; ++n) {
    const PointSet sub = select_neighborhood(sorted, origin, n);
    SelectionConfig sel;
    sel.rank_tolerance = rank_tolerance;
    sel.stop = StopRule::max_degree;
    sel.max_degree = 4;

    DetailRow row;
    row.npoints = n;
    const OrthonormalBasis onb = build_orthonormal_basis(sub, sel, origin);
    row.accepted = onb.basis().size();
    row.rejected = static_cast<int>(onb.basis().rejected().size());
    for (const auto& q : quartics)
      if (onb.basis().contains(q)) row.quartics_included.push_back(q);
    row.quartic_complete = check_derivative_completeness(onb.basis(), 4).complete;
    row.has_mixed_quartic = onb.basis().contains(MultiIndex({2, 2}));

    std::vector<double> g(n);
    std::vector<double> xs(2);
    for (int i = 0; i < n; ++i) {
      xs[0] = sigma * sub.coord(i, 0);
      xs[1] = sigma * sub.coord(i, 1);
      g[i] = test_function_eval(TestFn::f2, xs);
    }
    const double s2 = sigma * sigma;
    row.err_d20 = std::abs(apply_stencil(derivative_stencil(onb, origin, b20), g) - s2 * e20);
    row.err_d11 = std::abs(apply_stencil(derivative_stencil(onb, origin, b11), g) - s2 * e11);
    row.err_d02 = std::abs(apply_stencil(derivative_stencil(onb, origin, b02), g) - s2 * e02);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// --- output ------------------------------------------------------------

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_errors_csv(const StudyReport& rep, std::ostream& out) {
  out << "function,order,npoints,sigma,mean_abs_err,min_abs_err,max_abs_err,degenerate_trials\n";
  for (const auto& c : rep.cells)
    for (std::size_t si = 0; si < rep.config.sigmas.size(); ++si)
      out << test_fn_name(rep.config.function) << ',' << c.order << ',' << c.npoints << ','
          << g17(rep.config.sigmas[si]) << ',' << g17(c.mean_err[si]) << ','
          << g17(c.min_err[si]) << ',' << g17(c.max_err[si]) << ',' << c.degenerate_trials
          << '\n';
}

void write_summary_csv(const StudyReport& rep, std::ostream& out) {
  out << "function,order";
  for (int n : rep.config.point_counts) out << ",rate_" << n;
  out << ",eps_min,eps_max\n";
  for (int order : rep.config.orders) {
    out << test_fn_name(rep.config.function) << ',' << order;
    for (int n : rep.config.point_counts) {
      const StudyCell& c = rep.cell(order, n);
      out << ',' << (c.rate_valid ? g17(c.rate.rate) : "nan");
    }
    const StudyCell& last = rep.cell(order, rep.config.point_counts.back());
    const double lo = *std::min_element(last.mean_err.begin(), last.mean_err.end());
    const double hi = *std::max_element(last.mean_err.begin(), last.mean_err.end());
    out << ',' << g17(lo) << ',' << g17(hi) << '\n';
  }
}

void write_plotdata_csv(const StudyReport& rep, std::ostream& out) {
  out << "function,order,npoints,log2_sigma,log2_mean_err\n";
  for (const auto& c : rep.cells)
    for (std::size_t si = 0; si < rep.config.sigmas.size(); ++si)
      out << test_fn_name(rep.config.function) << ',' << c.order << ',' << c.npoints << ','
          << g17(std::log2(rep.config.sigmas[si])) << ','
          << g17(c.mean_err[si] > 0 ? std::log2(c.mean_err[si])
                                    : -std::numeric_limits<double>::infinity())
          << '\n';
}

void write_rejected_csv(const StudyReport& rep, std::ostream& out) {
  out << "order,npoints,mean_rejected,mean_accepted,degenerate_trials\n";
  for (const auto& c : rep.cells)
    out << c.order << ',' << c.npoints << ',' << g17(c.mean_rejected) << ','
        << g17(c.mean_accepted) << ',' << c.degenerate_trials << '\n';
}

void print_summary(const StudyReport& rep, std::ostream& out) {
  const StudyConfig& cfg = rep.config;
  out << "convergence study: function " << test_fn_name(cfg.function) << ", dimension "
      << cfg.dimension << ", derivative " << cfg.beta.to_string() << ", trials " << cfg.trials
      << ", seed " << cfg.seed << "\n";
  if (cfg.trials < 8) out << "warning: low statistics (trials < 8)\n";
  char line[256];
  out << "order";
  for (int n : cfg.point_counts) {
    std::snprintf(line, sizeof line, "%8d", n);
    out << line;
  }
  out << "   eps_min(N=" << cfg.point_counts.back() << ")  eps_max\n";
  for (int order : cfg.orders) {
    std::snprintf(line, sizeof line, "%5d", order);
    out << line;
    for (int n : cfg.point_counts) {
      const StudyCell& c = rep.cell(order, n);
      if (c.rate_valid)
        std::snprintf(line, sizeof line, "%8.2f", c.rate.rate);
      else
        std::snprintf(line, sizeof line, "%8s", "nan");
      out << line;
    }
    const StudyCell& last = rep.cell(order, cfg.point_counts.back());
    const double lo = *std::min_element(last.mean_err.begin(), last.mean_err.end());
    const double hi = *std::max_element(last.mean_err.begin(), last.mean_err.end());
    std::snprintf(line, sizeof line, "   %11.3g  %11.3g", lo, hi);
    out << line << '\n';
  }
  out << "mean rejected monomials per order (rows) and N (columns):\n";
  for (int order : cfg.orders) {
    std::snprintf(line, sizeof line, "%5d", order);
    out << line;
    for (int n : cfg.point_counts) {
      std::snprintf(line, sizeof line, "%8.2f", rep.cell(order, n).mean_rejected);
      out << line;
    }
    out << '\n';
  }
}

void write_detail_csv(const DetailReport& rep, std::ostream& out) {
  out << "npoints,accepted,rejected,quartic_complete,has_x1sq_x2sq,quartics,"
         "err_d2x1,err_dx1dx2,err_d2x2\n";
  for (const auto& r : rep.rows) {
    out << r.npoints << ',' << r.accepted << ',' << r.rejected << ','
        << (r.quartic_complete ? 1 : 0) << ',' << (r.has_mixed_quartic ? 1 : 0) << ',';
    for (std::size_t i = 0; i < r.quartics_included.size(); ++i) {
      if (i) out << ' ';
      out << r.quartics_included[i].to_string();
    }
    out << ',' << g17(r.err_d20) << ',' << g17(r.err_d11) << ',' << g17(r.err_d02) << '\n';
  }
}

void print_detail(const DetailReport& rep, std::ostream& out) {
  out << "fixed-configuration study: 20 points, nominal order 4, sigma " << g17(rep.sigma)
      << ", seed " << rep.seed << "\n";
  out << "    N  acc  rej  log2|err d2x1|  log2|err dx1dx2|  log2|err d2x2|  quartics\n";
  char line[256];
  for (const auto& r : rep.rows) {
    auto lg = [](double e) { return e > 0 ? std::log2(e) : -1074.0; };
    std::snprintf(line, sizeof line, "%5d %4d %4d %15.1f %17.1f %15.1f  ", r.npoints,
                  r.accepted, r.rejected, lg(r.err_d20), lg(r.err_d11), lg(r.err_d02));
    out << line;
    for (std::size_t i = 0; i < r.quartics_included.size(); ++i) {
      if (i) out << ' ';
      out << r.quartics_included[i].to_string();
    }
    out << '\n';
  }
}

}  // namespace mlsop
