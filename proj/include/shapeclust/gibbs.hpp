#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shapeclust/rng.hpp"
#include "shapeclust/wishart.hpp"

namespace shapeclust {

enum class ChainInit { singletons, one_cluster, k_random };

struct ChainConfig {
  double xi = 1.0;
  std::vector<double> theta_grid = {0.1, 0.2, 0.3, 0.4, 0.5};
  double r = 3.0;
  double s = 4.0;
  double d = 0.0;  // 0 means auto: estimate_d_eb(S)
  int n_sweeps = 8000;
  int burn_in = 1000;
  std::uint64_t seed = 0;
  ChainInit init = ChainInit::singletons;
  int init_k = 10;  // only for k_random

  void validate() const;
};

struct ChainState {
  Partition partition;
  double theta = 0.0;
  BlockSums sums;
  Rng rng;

  ChainState() : rng(0) {}
};

struct TraceSample {
  Partition partition;  // canonical labels
  double theta = 0.0;
  double log_posterior = 0.0;  // log_marg_lik + crp_log_prior, unnormalized
};

struct ChainTrace {
  std::vector<TraceSample> samples;       // post burn-in, length n_sweeps - burn_in
  std::vector<double> sweep_seconds;      // all sweeps; kept out of serialized output
  int n = 0;
  double d = 0.0;                          // resolved degrees of freedom
};

/// Degrees of freedom actually used: config.d, or estimate_d_eb(S) when 0.
double resolve_d(const ChainConfig& config, const GramMatrix& s);

/// Draws theta from its discrete conditional: uniform prior over the grid
/// times the marginal likelihood at the current partition, normalized by
/// log-sum-exp. Grid points with an infeasible bracket get zero mass; all
/// infeasible is an error.
double sample_theta(ChainState& state, const GramMatrix& s, const ChainConfig& config, double d);

/// Unnormalized log weight of every destination for observation i, which
/// must already be detached from state.partition: entry j < K scores
/// joining cluster j (prior weight n_j), entry K scores opening a new
/// cluster (prior weight xi). Infeasible brackets map to -inf. Each entry
/// costs O(1) on top of the detached aggregates.
std::vector<double> reassign_log_weights(const ChainState& state, const GramMatrix& s, int i,
                                         const ChainConfig& config, double d);

/// One Gibbs update of observation i: detach, score every existing cluster
/// and a fresh one via reassign_log_weights, draw, attach.
void gibbs_reassign(ChainState& state, const GramMatrix& s, int i, const ChainConfig& config,
                    double d);

/// Algorithm: per sweep, sample theta, then reassign observations 0..n-1 in
/// order. Records canonicalized samples after burn-in. Deterministic given
/// config.seed.
ChainTrace run_chain(const GramMatrix& s, const ChainConfig& config);

/// Exact posterior over all set partitions (n <= 10), marginalizing theta
/// over its grid. Returns (partition, probability) sorted by decreasing
/// probability; probabilities sum to 1.
std::vector<std::pair<Partition, double>> enumerate_posterior(const GramMatrix& s,
                                                              const ChainConfig& config);

/// Line-delimited JSON records: sweep, theta, k, labels, log_posterior.
/// Timings never enter the file, keeping reruns byte-identical.
void save_trace(const ChainTrace& trace, const std::string& path, int burn_in);
ChainTrace load_trace(const std::string& path);

const char* to_string(ChainInit init);
ChainInit chain_init_from_string(const std::string& name);

}  // namespace shapeclust
