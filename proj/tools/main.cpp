// Command-line front end: basis construction, stencil generation, derivative
// estimation and the two study harnesses.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlsop/basis_selection.hpp"
#include "mlsop/convergence_study.hpp"
#include "mlsop/errors.hpp"
#include "mlsop/fitting.hpp"
#include "mlsop/orthonormal_basis.hpp"
#include "mlsop/point_set.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitDegenerate = 3;

struct CommonOpts {
  std::string points_file;
  int dim = 2;
  int order = 2;
  bool stop_square = false;
  double rank_tol = 1e-8;
  bool no_normalize = false;
  std::string out_path;
};

void add_selection_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--points", o.points_file, "point file (one point per line)")->required();
  cmd->add_option("--dim", o.dim, "ambient dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--order", o.order, "nominal polynomial order (max total degree)");
  cmd->add_flag("--stop", o.stop_square,
                "stop when the evaluation matrix is square and of full rank "
                "instead of at --order");
  cmd->add_option("--rank-tol", o.rank_tol, "relative rank-rejection tolerance");
  cmd->add_flag("--no-normalize", o.no_normalize,
                "skip translation/scaling of the points before rank tests");
  cmd->add_option("--out", o.out_path, "output file (default: stdout)");
}

mlsop::SelectionConfig to_selection(const CommonOpts& o) {
  mlsop::SelectionConfig sel;
  sel.rank_tolerance = o.rank_tol;
  sel.stop = o.stop_square ? mlsop::StopRule::square_full_rank : mlsop::StopRule::max_degree;
  sel.max_degree = o.order;
  sel.normalize = !o.no_normalize;
  return sel;
}

std::vector<double> parse_vector(const std::string& csv, int expect_dim, const char* what) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    const std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw mlsop::invalid_input(std::string("cannot parse ") + what + ": '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (expect_dim > 0 && static_cast<int>(v.size()) != expect_dim)
    throw mlsop::invalid_input(std::string(what) + " needs " + std::to_string(expect_dim) +
                               " comma-separated entries");
  return v;
}

mlsop::MultiIndex parse_beta(const std::string& csv, int dim) {
  const std::vector<double> v = parse_vector(csv, dim, "--beta");
  std::vector<int> e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    e[i] = static_cast<int>(v[i]);
    if (e[i] < 0 || e[i] != v[i])
      throw mlsop::invalid_input("--beta entries must be non-negative integers");
  }
  return mlsop::MultiIndex(e);
}

std::vector<double> read_values_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw mlsop::io_error("cannot open values file: " + path);
  std::vector<double> v;
  std::string line;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x;
    while (ls >> x) v.push_back(x);
  }
  return v;
}

// run `fn` writing to --out (or stdout); returns the exit code
template <typename Fn>
int with_output(const std::string& out_path, Fn&& fn) {
  if (out_path.empty()) {
    fn(std::cout);
    return 0;
  }
  std::ofstream f(out_path);
  if (!f) throw mlsop::io_error("cannot open output file: " + out_path);
  fn(f);
  if (!f) throw mlsop::io_error("write failed: " + out_path);
  return 0;
}

int cmd_basis(const CommonOpts& o) {
  const mlsop::PointSet pts = mlsop::read_pointset_file(o.points_file, o.dim);
  const mlsop::OrthonormalBasis onb = mlsop::build_orthonormal_basis(pts, to_selection(o));

  std::cout << "points: " << pts.size() << ", accepted monomials: " << onb.basis().size()
            << ", rejected: " << onb.basis().rejected().size() << "\n";
  for (const auto& rec : onb.basis().trace())
    std::cout << (rec.accepted ? "accepted " : "rejected ") << rec.index.to_string() << "\n";
  if (onb.basis().exhausted())
    std::cout << "note: enumeration exhausted before the evaluation matrix became square\n";

  return with_output(o.out_path, [&](std::ostream& out) { mlsop::write_basis_csv(onb, out); });
}

int cmd_stencil(const CommonOpts& o, const std::string& x0_csv, const std::string& beta_csv,
                double sigma) {
  const mlsop::PointSet raw = mlsop::read_pointset_file(o.points_file, o.dim);
  const std::vector<double> x0 =
      x0_csv.empty() ? std::vector<double>(o.dim, 0.0) : parse_vector(x0_csv, o.dim, "--x0");
  mlsop::PointSet pts = raw;
  if (sigma != 1.0) pts = mlsop::apply_scale(raw, mlsop::ScaleFrame{x0, sigma});

  const mlsop::MultiIndex beta = parse_beta(beta_csv, o.dim);
  const mlsop::OrthonormalBasis onb = mlsop::build_orthonormal_basis(pts, to_selection(o), x0);

  const mlsop::Stencil st = beta.total_degree() == 0
                                ? mlsop::interpolation_weights(onb, x0)
                                : mlsop::derivative_stencil(onb, x0, beta);

  const auto comp = mlsop::check_derivative_completeness(onb.basis(), beta.total_degree());
  if (comp.complete) {
    std::cout << "derivative set complete through order " << beta.total_degree() << "\n";
  } else {
    std::cout << "warning: incomplete monomial set through order " << beta.total_degree()
              << "; the stencil realizes a configuration-dependent combination of "
                 "derivatives. missing:";
    for (const auto& m : comp.missing) std::cout << ' ' << m.to_string();
    std::cout << "\n";
  }
  if (st.fit_derivative_vanishes)
    std::cout << "note: requested derivative annihilates every basis polynomial; "
                 "stencil is all zeros\n";

  return with_output(o.out_path,
                     [&](std::ostream& out) { mlsop::write_stencil_csv(st, pts, out); });
}

int cmd_estimate(const CommonOpts& o, const std::string& x0_csv, const std::string& beta_csv,
                 const std::string& values_file) {
  const mlsop::PointSet pts = mlsop::read_pointset_file(o.points_file, o.dim);
  const std::vector<double> f = read_values_file(values_file);
  if (static_cast<int>(f.size()) != pts.size())
    throw mlsop::invalid_input("values file has " + std::to_string(f.size()) +
                               " entries for " + std::to_string(pts.size()) + " points");
  const std::vector<double> x0 =
      x0_csv.empty() ? std::vector<double>(o.dim, 0.0) : parse_vector(x0_csv, o.dim, "--x0");
  const mlsop::MultiIndex beta = parse_beta(beta_csv, o.dim);

  mlsop::EstimateOptions opts;
  opts.selection = to_selection(o);
  const auto est = mlsop::estimate_derivative(pts, f, x0, beta, opts);

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", est.value);
  std::cout << "estimate: " << buf << "\n";
  std::cout << "points used: " << est.points_used
            << ", accepted monomials: " << est.basis.size()
            << ", rejected: " << est.basis.rejected().size() << "\n";
  if (!est.derivative_complete) {
    std::cout << "warning: incomplete monomial set through order " << beta.total_degree()
              << "; missing:";
    for (const auto& m : est.missing) std::cout << ' ' << m.to_string();
    std::cout << "\n";
  }
  if (!o.out_path.empty())
    return with_output(o.out_path,
                       [&](std::ostream& out) { mlsop::write_stencil_csv(est.stencil, pts, out); });
  return 0;
}

int cmd_study_conv(const mlsop::StudyConfig& cfg, const std::string& out_prefix) {
  const mlsop::StudyReport rep = mlsop::run_convergence_study(cfg);
  mlsop::print_summary(rep, std::cout);
  if (!out_prefix.empty()) {
    struct Item {
      const char* suffix;
      void (*writer)(const mlsop::StudyReport&, std::ostream&);
    };
    const Item items[] = {{"_errors.csv", mlsop::write_errors_csv},
                          {"_summary.csv", mlsop::write_summary_csv},
                          {"_plot.csv", mlsop::write_plotdata_csv},
                          {"_rejected.csv", mlsop::write_rejected_csv}};
    for (const auto& item : items) {
      std::ofstream f(out_prefix + item.suffix);
      if (!f) throw mlsop::io_error("cannot open output file: " + out_prefix + item.suffix);
      item.writer(rep, f);
    }
  }
  return 0;
}

int cmd_study_detail(std::uint64_t seed, double sigma, double rank_tol,
                     const std::string& out_prefix) {
  const mlsop::DetailReport rep = mlsop::run_detail_study(seed, sigma, rank_tol);
  mlsop::print_detail(rep, std::cout);
  if (!out_prefix.empty()) {
    std::ofstream f(out_prefix + "_detail.csv");
    if (!f) throw mlsop::io_error("cannot open output file: " + out_prefix + "_detail.csv");
    mlsop::write_detail_csv(rep, f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moving least squares interpolation and differentiation on scattered points"};
  app.require_subcommand(1);

  CommonOpts basis_opts, stencil_opts, estimate_opts;
  std::string x0_csv, beta_csv, values_file, est_x0, est_beta;
  double stencil_sigma = 1.0;

  CLI::App* basis = app.add_subcommand("basis", "select monomials and build the basis");
  add_selection_flags(basis, basis_opts);

  CLI::App* stencil = app.add_subcommand("stencil", "emit interpolation or derivative weights");
  add_selection_flags(stencil, stencil_opts);
  stencil->add_option("--x0", x0_csv, "evaluation point (comma separated, default origin)");
  stencil->add_option("--beta", beta_csv, "derivative exponents, e.g. 1,0 (0,0 interpolates)")
      ->required();
  stencil->add_option("--sigma", stencil_sigma, "contract points toward x0 by this factor");

  CLI::App* estimate = app.add_subcommand("estimate", "estimate a derivative from samples");
  add_selection_flags(estimate, estimate_opts);
  estimate->add_option("--x0", est_x0, "evaluation point (comma separated, default origin)");
  estimate->add_option("--beta", est_beta, "derivative exponents, e.g. 1,0")->required();
  estimate->add_option("--values", values_file, "file with one sample value per point")
      ->required();

  CLI::App* study = app.add_subcommand("study", "convergence and detail studies");
  study->require_subcommand(1);

  mlsop::StudyConfig cfg;
  std::string fn_name = "f2", conv_beta, conv_out;
  std::vector<int> orders, counts;
  std::vector<double> sigmas;
  CLI::App* conv = study->add_subcommand("conv", "randomized convergence study");
  conv->add_option("--dim", cfg.dimension, "2 or 3");
  conv->add_option("--function", fn_name, "f1, f2 or f3");
  conv->add_option("--beta", conv_beta, "derivative exponents, e.g. 1,0")->required();
  conv->add_option("--orders", orders, "nominal orders (default 2 3 4)");
  conv->add_option("--counts", counts, "point counts (default 8 16 32 64 128)");
  conv->add_option("--sigmas", sigmas, "scale factors in (0,1] (default 1/2..1/16)");
  conv->add_option("--trials", cfg.trials, "random point distributions per cell");
  conv->add_option("--seed", cfg.seed, "RNG seed");
  conv->add_option("--rank-tol", cfg.rank_tolerance, "study rejection threshold");
  conv->add_option("--out", conv_out, "prefix for the report CSV files");

  std::uint64_t detail_seed = 1;
  double detail_sigma = 0.125, detail_tol = 0.2;
  std::string detail_out;
  CLI::App* detail = study->add_subcommand("detail", "fixed-configuration detail study");
  detail->add_option("--seed", detail_seed, "RNG seed");
  detail->add_option("--sigma", detail_sigma, "scale factor");
  detail->add_option("--rank-tol", detail_tol, "rejection threshold");
  detail->add_option("--out", detail_out, "prefix for the report CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (basis->parsed()) return cmd_basis(basis_opts);
    if (stencil->parsed()) return cmd_stencil(stencil_opts, x0_csv, beta_csv, stencil_sigma);
    if (estimate->parsed()) return cmd_estimate(estimate_opts, est_x0, est_beta, values_file);
    if (conv->parsed()) {
      cfg.function = mlsop::parse_test_fn(fn_name);
      cfg.beta = parse_beta(conv_beta, cfg.dimension);
      if (!orders.empty()) cfg.orders = orders;
      if (!counts.empty()) cfg.point_counts = counts;
      if (!sigmas.empty()) cfg.sigmas = sigmas;
      return cmd_study_conv(cfg, conv_out);
    }
    if (detail->parsed()) return cmd_study_detail(detail_seed, detail_sigma, detail_tol, detail_out);
  } catch (const mlsop::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const mlsop::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  }
  return kExitUsage;
}
