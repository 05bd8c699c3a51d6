#include "shapeclust/gibbs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "shapeclust/crp.hpp"

namespace shapeclust {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void ChainConfig::validate() const {
  if (!(xi > 0.0)) throw std::invalid_argument("chain config: xi must be > 0");
  if (theta_grid.empty()) throw std::invalid_argument("chain config: empty theta grid");
  for (double t : theta_grid)
    if (!(t > 0.0)) throw std::invalid_argument("chain config: theta grid must be > 0");
  if (!(r > 0.0) || !(s > 0.0)) throw std::invalid_argument("chain config: r, s must be > 0");
  if (d < 0.0) throw std::invalid_argument("chain config: d must be >= 0 (0 = auto)");
  if (n_sweeps < 1) throw std::invalid_argument("chain config: n_sweeps must be >= 1");
  if (burn_in < 0 || burn_in >= n_sweeps)
    throw std::invalid_argument("chain config: need 0 <= burn_in < n_sweeps");
  if (init == ChainInit::k_random && init_k < 1)
    throw std::invalid_argument("chain config: init_k must be >= 1");
}

double resolve_d(const ChainConfig& config, const GramMatrix& gram) {
  return config.d > 0.0 ? config.d : estimate_d_eb(gram);
}

double sample_theta(ChainState& state, const GramMatrix&, const ChainConfig& config, double d) {
  std::vector<double> logw(config.theta_grid.size(), kNegInf);
  bool any = false;
  for (std::size_t t = 0; t < config.theta_grid.size(); ++t) {
    try {
      logw[t] = log_marg_lik(state.partition, config.theta_grid[t], d, config.r, config.s,
                             state.sums);
      any = true;
    } catch (const std::domain_error&) {
      // infeasible bracket at this grid point: zero mass
    }
  }
  if (!any)
    throw std::runtime_error(
        "sample_theta: every theta grid point gives a nonpositive bracket; shrink the grid or "
        "check S");
  state.theta = config.theta_grid[state.rng.categorical_log(logw)];
  return state.theta;
}

std::vector<double> reassign_log_weights(const ChainState& state, const GramMatrix& gram, int i,
                                         const ChainConfig& config, double d) {
  const Partition& part = state.partition;
  const BlockSums& sums = state.sums;
  const int k = part.k();
  const int n = part.n();
  const double theta = state.theta;

  // aggregates over the detached state; each candidate adjusts them in O(1)
  double l0 = 0.0, t0 = 0.0;
  for (int j = 0; j < k; ++j) {
    l0 += std::log1p(theta * part.sizes[j]);
    t0 += theta * sums.sbar[j] / (1.0 + part.sizes[j] * theta);
  }

  const double sii = gram.entries(i, i);
  const double half_nr_d = 0.5 * (n + config.r) * d;
  std::vector<double> logw(k + 1, kNegInf);
  for (int j = 0; j <= k; ++j) {
    double l0j, t0j, prior;
    if (j < k) {
      const int nj = part.sizes[j];
      const double sbarj = sums.sbar[j] + 2.0 * sums.row_sums[j][i] + sii;
      l0j = l0 - std::log1p(theta * nj) + std::log1p(theta * (nj + 1));
      t0j = t0 - theta * sums.sbar[j] / (1.0 + nj * theta) +
            theta * sbarj / (1.0 + (nj + 1) * theta);
      prior = std::log(static_cast<double>(nj));
    } else {
      l0j = l0 + std::log1p(theta);
      t0j = t0 + theta * sii / (1.0 + theta);
      prior = std::log(config.xi);
    }
    const double bracket = 0.5 * d * (sums.trace_s - t0j + config.s);
    if (bracket > 0.0) logw[j] = prior - 0.5 * d * l0j - half_nr_d * std::log(bracket);
  }
  return logw;
}

void gibbs_reassign(ChainState& state, const GramMatrix& gram, int i, const ChainConfig& config,
                    double d) {
  detach_observation(gram, state.partition, state.sums, i);
  const std::vector<double> logw = reassign_log_weights(state, gram, i, config, d);
  int draw;
  try {
    draw = state.rng.categorical_log(logw);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("gibbs_reassign: every candidate cluster is infeasible");
  }
  attach_observation(gram, state.partition, state.sums, i, draw);
}

namespace {

Partition initial_partition(const ChainConfig& config, int n, Rng& rng) {
  switch (config.init) {
    case ChainInit::singletons:
      return Partition::singletons(n);
    case ChainInit::one_cluster:
      return Partition::one_cluster(n);
    case ChainInit::k_random: {
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = rng.uniform_int(config.init_k);
      return Partition::from_labels(labels);
    }
  }
  throw std::logic_error("unknown chain init");
}

}  // namespace

ChainTrace run_chain(const GramMatrix& gram, const ChainConfig& config) {
  config.validate();
  gram.validate();
  const int n = gram.size();
  const double d = resolve_d(config, gram);

  ChainState state;
  state.rng = Rng(config.seed);
  state.partition = initial_partition(config, n, state.rng);
  state.sums = BlockSums::build(gram, state.partition);
  state.theta = config.theta_grid.front();

  ChainTrace trace;
  trace.n = n;
  trace.d = d;
  trace.samples.reserve(config.n_sweeps - config.burn_in);
  trace.sweep_seconds.reserve(config.n_sweeps);

  for (int sweep = 0; sweep < config.n_sweeps; ++sweep) {
    const auto start = std::chrono::steady_clock::now();
    sample_theta(state, gram, config, d);
    for (int i = 0; i < n; ++i) gibbs_reassign(state, gram, i, config, d);
    trace.sweep_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());

    if (sweep >= config.burn_in) {
      TraceSample sample;
      sample.partition = state.partition.canonicalized();
      sample.theta = state.theta;
      sample.log_posterior =
          log_marg_lik(state.partition, state.theta, d, config.r, config.s, state.sums) +
          crp_log_prior(state.partition, config.xi);
      trace.samples.push_back(std::move(sample));
    }
  }
  return trace;
}

std::vector<std::pair<Partition, double>> enumerate_posterior(const GramMatrix& gram,
                                                              const ChainConfig& config) {
  config.validate();
  gram.validate();
  const int n = gram.size();
  if (n > 10) throw std::invalid_argument("enumerate_posterior: n > 10");
  const double d = resolve_d(config, gram);
  const double log_grid = std::log(static_cast<double>(config.theta_grid.size()));

  std::vector<std::pair<Partition, double>> out;  // second holds log mass until normalized
  std::vector<int> labels(n, 0);

  auto score = [&](const Partition& part) {
    const BlockSums sums = BlockSums::build(gram, part);
    const double log_prior = crp_log_prior(part, config.xi);
    double acc = kNegInf;
    for (double theta : config.theta_grid) {
      double lw;
      try {
        lw = log_prior - log_grid + log_marg_lik(part, theta, d, config.r, config.s, sums);
      } catch (const std::domain_error&) {
        continue;
      }
      acc = acc == kNegInf ? lw : std::max(acc, lw) + std::log1p(std::exp(-std::abs(acc - lw)));
    }
    out.emplace_back(part, acc);
  };

  // restricted growth strings enumerate every set partition exactly once
  auto recurse = [&](auto&& self, int i, int max_used) -> void {
    if (i == n) {
      score(Partition::from_labels(labels));
      return;
    }
    for (int c = 0; c <= max_used + 1; ++c) {
      labels[i] = c;
      self(self, i + 1, std::max(max_used, c));
    }
  };
  labels[0] = 0;
  recurse(recurse, 1, 0);

  double log_total = kNegInf;
  for (const auto& [part, lw] : out) {
    if (lw == kNegInf) continue;
    log_total = log_total == kNegInf
                    ? lw
                    : std::max(log_total, lw) + std::log1p(std::exp(-std::abs(log_total - lw)));
  }
  if (log_total == kNegInf)
    throw std::runtime_error("enumerate_posterior: no partition has positive mass");
  for (auto& [part, lw] : out) lw = lw == kNegInf ? 0.0 : std::exp(lw - log_total);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

void save_trace(const ChainTrace& trace, const std::string& path, int burn_in) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  for (std::size_t t = 0; t < trace.samples.size(); ++t) {
    const TraceSample& sample = trace.samples[t];
    nlohmann::json rec;
    rec["sweep"] = burn_in + static_cast<int>(t);
    rec["theta"] = sample.theta;
    rec["k"] = sample.partition.k();
    rec["labels"] = sample.partition.labels;
    rec["log_posterior"] = sample.log_posterior;
    file << rec.dump() << "\n";
  }
}

ChainTrace load_trace(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot read '" + path + "'");
  ChainTrace trace;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      std::ostringstream msg;
      msg << "'" << path << "' line " << line_no << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
    TraceSample sample;
    sample.partition = Partition::from_labels(rec.at("labels").get<std::vector<int>>());
    sample.theta = rec.at("theta").get<double>();
    sample.log_posterior = rec.at("log_posterior").get<double>();
    if (trace.n == 0) trace.n = sample.partition.n();
    if (sample.partition.n() != trace.n) {
      std::ostringstream msg;
      msg << "'" << path << "' line " << line_no << ": label vector length changed";
      throw std::runtime_error(msg.str());
    }
    trace.samples.push_back(std::move(sample));
  }
  if (trace.samples.empty()) throw std::runtime_error("'" + path + "': empty trace");
  return trace;
}

const char* to_string(ChainInit init) {
  switch (init) {
    case ChainInit::singletons: return "singletons";
    case ChainInit::one_cluster: return "one_cluster";
    case ChainInit::k_random: return "k_random";
  }
  return "unknown";
}

ChainInit chain_init_from_string(const std::string& name) {
  if (name == "singletons") return ChainInit::singletons;
  if (name == "one_cluster") return ChainInit::one_cluster;
  if (name == "k_random") return ChainInit::k_random;
  throw std::invalid_argument("unknown chain init '" + name + "'");
}

}  // namespace shapeclust
