#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "shapeclust/curve_io.hpp"
#include "shapeclust/gibbs.hpp"
#include "shapeclust/gram.hpp"
#include "shapeclust/simulate.hpp"
#include "shapeclust/summary.hpp"
#include "shapeclust/svg.hpp"

namespace fs = std::filesystem;
using namespace shapeclust;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_meta(const fs::path& dir, const nlohmann::json& meta) {
  std::ofstream file(dir / "meta.json");
  if (!file) throw std::runtime_error("cannot write '" + (dir / "meta.json").string() + "'");
  file << meta.dump(2) << "\n";
}

void write_matrix_csv(const Eigen::MatrixXd& m, const fs::path& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      file << buf << (j + 1 < m.cols() ? "," : "\n");
    }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty()) grid.push_back(std::stod(cell));
  }
  if (grid.empty()) throw CLI::ValidationError("theta-grid", "no values parsed");
  return grid;
}

// detects which dataset family a path holds: "curves" or "points"
std::string input_kind(const std::string& path) {
  if (fs::is_directory(path)) return "curves";
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot read '" + path + "'");
  const nlohmann::json doc = nlohmann::json::parse(file);
  if (doc.contains("curves")) return "curves";
  if (doc.contains("points")) return "points";
  throw std::runtime_error("'" + path + "': neither a curve set nor a point set");
}

struct CommonOpts {
  bool ci = false;
};

void require_seed_in_ci(const CommonOpts& common, const CLI::Option* seed_opt) {
  if (common.ci && seed_opt->count() == 0)
    throw CLI::ValidationError("--seed", "required when --ci is set");
}

int cmd_simulate(const CommonOpts& common, const std::string& kind, const std::string& out,
                 std::uint64_t seed, const CLI::Option* seed_opt, int n, int components,
                 double separation, const std::string& classes_text, double noise, int per_class,
                 int samples, bool nuisance) {
  require_seed_in_ci(common, seed_opt);
  fs::create_directories(out);
  nlohmann::json meta{{"command", "simulate"}, {"kind", kind}, {"seed", seed}};

  if (kind == "gaussian") {
    const MixtureSpec spec = default_mixture(components, separation);
    const PointSet points = simulate_gaussian_mixture(spec, n, seed);
    save_points(points, (fs::path(out) / "points.json").string());
    save_labels(points.labels, (fs::path(out) / "labels.txt").string());
    meta["n"] = n;
    meta["components"] = components;
    meta["separation"] = separation;
  } else if (kind == "shapes") {
    std::vector<ShapeClassSpec> classes;
    std::stringstream ss(classes_text);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) classes.push_back({name, noise});
    ShapeSimOpts opts;
    opts.samples = samples;
    opts.nuisance = nuisance;
    const CurveSet curves = simulate_shape_classes(classes, per_class, seed, opts);
    save_curves_json(curves, (fs::path(out) / "curves.json").string());
    save_labels(curves.labels, (fs::path(out) / "labels.txt").string());
    meta["classes"] = classes_text;
    meta["noise"] = noise;
    meta["per_class"] = per_class;
    meta["samples"] = samples;
    meta["nuisance"] = nuisance;
  } else {
    throw CLI::ValidationError("--kind", "must be gaussian or shapes");
  }
  write_meta(out, meta);
  return 0;
}

int cmd_gram(const std::string& input, std::string mode, const std::string& out, int resample_to,
             double smooth_bandwidth, int smooth_passes, bool unit_length, bool center,
             const AlignOpts& align) {
  const std::string kind = input_kind(input);
  if (mode == "auto") mode = kind == "curves" ? "elastic" : "euclidean";
  if (mode == "elastic" && kind != "curves")
    throw std::runtime_error("elastic mode needs a curve set, got '" + input + "'");
  if (mode == "euclidean" && kind != "points")
    throw std::runtime_error("euclidean mode needs a point set, got '" + input + "'");
  fs::create_directories(out);

  GramMatrix gram;
  double prep_seconds = 0.0, pair_seconds = 0.0;
  if (mode == "elastic") {
    const CurveSet curves = load_curves(input);
    PrepOpts prep;
    prep.resample_to = resample_to;
    prep.smooth_bandwidth = smooth_bandwidth;
    prep.smooth_passes = smooth_passes;
    prep.unit_length = unit_length;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Srvf> srvfs = prepare_srvfs(curves, prep);
    prep_seconds = seconds_since(t0);

    std::vector<std::string> ids;
    for (const auto& c : curves.curves) ids.push_back(c.id);
    t0 = std::chrono::steady_clock::now();
    gram = gram_matrix(srvfs, align, ids);
    pair_seconds = seconds_since(t0);
  } else {
    const PointSet points = load_points(input);
    const auto t0 = std::chrono::steady_clock::now();
    gram = gram_matrix(points, center);
    pair_seconds = seconds_since(t0);
  }
  save_gram(gram, (fs::path(out) / "gram.csv").string(), mode == "elastic" ? &align : nullptr);

  nlohmann::json meta{{"command", "gram"},
                      {"input", input},
                      {"mode", mode},
                      {"n", gram.size()}};
  if (mode == "elastic") {
    meta["resample_to"] = resample_to;
    meta["smooth_bandwidth"] = smooth_bandwidth;
    meta["smooth_passes"] = smooth_passes;
    meta["unit_length"] = unit_length;
    meta["align_opts"] = {{"max_iters", align.max_iters},
                          {"tol", align.tol},
                          {"n_seeds", align.n_seeds}};
  } else {
    meta["center"] = center;
  }
  write_meta(out, meta);
  std::printf("preprocessing %.3f s, pair assembly %.3f s\n", prep_seconds, pair_seconds);
  return 0;
}

int cmd_cluster(const CommonOpts& common, const std::string& gram_path, const std::string& out,
                double xi, int k0_guess, const std::string& theta_grid_text, double r, double s,
                double d, int sweeps, int burn_in, std::uint64_t seed, const CLI::Option* seed_opt,
                const std::string& init, int init_k, int chains) {
  require_seed_in_ci(common, seed_opt);
  const GramMatrix gram = load_gram(gram_path);
  fs::create_directories(out);

  ChainConfig config;
  config.theta_grid = parse_grid(theta_grid_text);
  config.r = r;
  config.s = s;
  config.d = d;
  config.n_sweeps = sweeps;
  config.burn_in = burn_in;
  config.init = chain_init_from_string(init);
  config.init_k = init_k;

  const double resolved_d = resolve_d(config, gram);
  if (xi > 0.0) {
    config.xi = xi;
  } else {
    // initial cluster-count guess defaults to the effective rank of S
    const int guess = k0_guess > 0 ? k0_guess : static_cast<int>(std::lround(resolved_d));
    config.xi = estimate_xi(std::max(1, guess), gram.size());
  }
  config.validate();

  nlohmann::json meta{{"command", "cluster"},
                      {"gram", gram_path},
                      {"xi", config.xi},
                      {"theta_grid", config.theta_grid},
                      {"r", config.r},
                      {"s", config.s},
                      {"d", resolved_d},
                      {"n_sweeps", config.n_sweeps},
                      {"burn_in", config.burn_in},
                      {"seed", seed},
                      {"init", init},
                      {"chains", chains}};
  if (config.init == ChainInit::k_random) meta["init_k"] = config.init_k;

  for (int c = 0; c < chains; ++c) {
    config.seed = seed + static_cast<std::uint64_t>(c);
    const auto t0 = std::chrono::steady_clock::now();
    const ChainTrace trace = run_chain(gram, config);
    const double total = seconds_since(t0);
    double sweep_total = 0.0;
    for (double v : trace.sweep_seconds) sweep_total += v;
    const std::string name = chains == 1 ? "trace.jsonl" : "trace_" + std::to_string(c) + ".jsonl";
    save_trace(trace, (fs::path(out) / name).string(), config.burn_in);
    std::printf("chain %d: %d sweeps in %.2f s (%.4f ms/sweep)\n", c, config.n_sweeps, total,
                1e3 * sweep_total / config.n_sweeps);
  }
  write_meta(out, meta);
  return 0;
}

int cmd_summarize(const std::string& trace_path, const std::string& out, int min_size) {
  const ChainTrace trace = load_trace(trace_path);
  fs::create_directories(out);
  const SummaryResult result = summarize_trace(trace, min_size);

  nlohmann::json summary{{"n", trace.n},
                         {"k0", result.k0},
                         {"t_star", result.t_star},
                         {"labels", result.partition.labels},
                         {"outliers", result.outliers}};
  {
    std::ofstream file(fs::path(out) / "summary.json");
    if (!file) throw std::runtime_error("cannot write summary.json");
    file << summary.dump(2) << "\n";
  }
  {
    std::ofstream file(fs::path(out) / "khist.csv");
    if (!file) throw std::runtime_error("cannot write khist.csv");
    file << "k,count\n";
    for (const auto& [k, count] : result.histogram_k) file << k << "," << count << "\n";
  }
  // one label per line so the output feeds eval --labels directly
  save_labels(result.partition.labels, (fs::path(out) / "labels.txt").string());
  write_matrix_csv(coclustering_mean(trace).entries, fs::path(out) / "coclustering.csv");
  write_histogram_svg(result.histogram_k, (fs::path(out) / "khist.svg").string(),
                      "posterior cluster count");
  write_meta(out, nlohmann::json{{"command", "summarize"},
                                 {"trace", trace_path},
                                 {"min_size", min_size},
                                 {"samples", static_cast<int>(trace.samples.size())}});
  std::printf("k0 %d, t_star %.6g, outliers %zu\n", result.k0, result.t_star,
              result.outliers.size());
  return 0;
}

int cmd_eval(const std::string& labels_path, const std::string& truth_path) {
  const Partition estimated = Partition::from_labels(load_labels(labels_path));
  const Partition truth = Partition::from_labels(load_labels(truth_path));
  std::printf("classification_rate %.10g\n", classification_rate(estimated, truth));
  std::printf("rand_index %.10g\n", rand_index(estimated, truth));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian clustering of curves and points via elastic Gram matrices"};
  app.require_subcommand(1);
  CommonOpts common;
  app.add_flag("--ci", common.ci, "CI mode: an explicit --seed becomes mandatory");

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim->set_config("--config");
  std::string sim_kind, sim_out, sim_classes = "circle,rose4,bumpy";
  std::uint64_t sim_seed = 0;
  int sim_n = 60, sim_components = 3, sim_per_class = 10, sim_samples = 100;
  double sim_separation = 8.0, sim_noise = 0.05;
  bool sim_nuisance = true;
  sim->add_option("--kind", sim_kind, "gaussian or shapes")->required();
  sim->add_option("--out", sim_out, "output directory")->required();
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "RNG seed (default 0)");
  sim->add_option("--n", sim_n, "points to draw (gaussian)");
  sim->add_option("--components", sim_components, "mixture components (gaussian)");
  sim->add_option("--separation", sim_separation, "mean separation radius (gaussian)");
  sim->add_option("--classes", sim_classes, "comma list of templates (shapes)");
  sim->add_option("--noise", sim_noise, "radial noise amplitude (shapes)");
  sim->add_option("--per-class", sim_per_class, "curves per class (shapes)");
  sim->add_option("--samples", sim_samples, "samples per curve (shapes)");
  sim->add_flag("--nuisance,!--no-nuisance", sim_nuisance,
                "apply random rotation/translation/scale/warp (shapes)");

  // gram
  auto* gram = app.add_subcommand("gram", "compute the inner-product matrix");
  gram->set_config("--config");
  std::string gram_input, gram_mode = "auto", gram_out;
  int gram_resample = 100, gram_passes = 1;
  double gram_bandwidth = 0.0;
  bool gram_unit = true, gram_center = false;
  AlignOpts align;
  gram->add_option("--input", gram_input, "curve set, point set, or csv directory")->required();
  gram->add_option("--mode", gram_mode, "elastic, euclidean, or auto");
  gram->add_option("--out", gram_out, "output directory")->required();
  gram->add_option("--resample-to", gram_resample, "resampled grid size T");
  gram->add_option("--smooth-bandwidth", gram_bandwidth, "Gaussian kernel bandwidth, 0 = off");
  gram->add_option("--smooth-passes", gram_passes, "smoothing passes");
  gram->add_flag("--unit-length,!--no-unit-length", gram_unit, "rescale SRVFs to unit length");
  gram->add_flag("--center", gram_center, "center points before dot products (euclidean)");
  gram->add_option("--max-iters", align.max_iters, "alternation rounds");
  gram->add_option("--tol", align.tol, "alternation stop tolerance");
  gram->add_option("--n-seeds", align.n_seeds, "seam starts for closed curves, 0 = T/5");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "sample the partition posterior");
  cluster->set_config("--config");
  std::string cluster_gram, cluster_out, cluster_grid = "0.1,0.2,0.3,0.4,0.5";
  std::string cluster_init = "singletons";
  double cluster_xi = 0.0, cluster_r = 3.0, cluster_s = 4.0, cluster_d = 0.0;
  int cluster_k0 = 0, cluster_sweeps = 8000, cluster_burnin = 1000, cluster_initk = 10;
  int cluster_chains = 1;
  std::uint64_t cluster_seed = 0;
  cluster->add_option("--gram", cluster_gram, "gram.csv from the gram command")->required();
  cluster->add_option("--out", cluster_out, "output directory")->required();
  cluster->add_option("--xi", cluster_xi, "CRP precision; 0 = K0/ln(n)");
  cluster->add_option("--k0", cluster_k0, "initial cluster-count guess for xi; 0 = rank of S");
  cluster->add_option("--theta-grid", cluster_grid, "comma list of theta grid points");
  cluster->add_option("--r", cluster_r, "Inv-Gamma shape constant");
  cluster->add_option("--s", cluster_s, "Inv-Gamma scale constant");
  cluster->add_option("--d", cluster_d, "degrees of freedom; 0 = auto (spectral)");
  cluster->add_option("--sweeps", cluster_sweeps, "total Gibbs sweeps");
  cluster->add_option("--burn-in", cluster_burnin, "sweeps discarded");
  auto* cluster_seed_opt = cluster->add_option("--seed", cluster_seed, "RNG seed (default 0)");
  cluster->add_option("--init", cluster_init, "singletons, one_cluster, or k_random");
  cluster->add_option("--init-k", cluster_initk, "clusters for k_random init");
  cluster->add_option("--chains", cluster_chains, "independent chains (seeds seed, seed+1, ...)");

  // summarize
  auto* summarize = app.add_subcommand("summarize", "reduce a trace to a point estimate");
  summarize->set_config("--config");
  std::string sum_trace, sum_out;
  int sum_min_size = 3;
  summarize->add_option("--trace", sum_trace, "trace.jsonl from the cluster command")->required();
  summarize->add_option("--out", sum_out, "output directory")->required();
  summarize->add_option("--min-size", sum_min_size, "clusters below this size are outliers");

  // eval
  auto* eval = app.add_subcommand("eval", "score labels against ground truth");
  std::string eval_labels, eval_truth;
  eval->add_option("--labels", eval_labels, "estimated labels, one per line")->required();
  eval->add_option("--truth", eval_truth, "ground-truth labels, one per line")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(common, sim_kind, sim_out, sim_seed, sim_seed_opt, sim_n,
                          sim_components, sim_separation, sim_classes, sim_noise, sim_per_class,
                          sim_samples, sim_nuisance);
    if (gram->parsed())
      return cmd_gram(gram_input, gram_mode, gram_out, gram_resample, gram_bandwidth, gram_passes,
                      gram_unit, gram_center, align);
    if (cluster->parsed())
      return cmd_cluster(common, cluster_gram, cluster_out, cluster_xi, cluster_k0, cluster_grid,
                         cluster_r, cluster_s, cluster_d, cluster_sweeps, cluster_burnin,
                         cluster_seed, cluster_seed_opt, cluster_init, cluster_initk,
                         cluster_chains);
    if (summarize->parsed()) return cmd_summarize(sum_trace, sum_out, sum_min_size);
    if (eval->parsed()) return cmd_eval(eval_labels, eval_truth);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
