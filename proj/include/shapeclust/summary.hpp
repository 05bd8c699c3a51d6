#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "shapeclust/gibbs.hpp"
#include "shapeclust/partition.hpp"

namespace shapeclust {

/// Entrywise posterior co-clustering probabilities.
struct CoClusterMatrix {
  Eigen::MatrixXd entries;  // symmetric, unit diagonal, values in [0,1]

  int n() const { return static_cast<int>(entries.rows()); }
  void validate() const;
};

/// Raised when no threshold reproduces the modal cluster count; the remedy
/// is a longer or fresh chain.
struct ThresholdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SummaryResult {
  int k0 = 0;
  MembershipMatrix b_star;
  Partition partition;  // clusters of b_star, canonical labels
  double t_star = 0.0;
  std::map<int, int> histogram_k;
  std::vector<int> outliers;
};

/// Most frequent cluster count across the trace, ties toward smaller K,
/// plus the full histogram.
std::pair<int, std::map<int, int>> mode_cluster_count(const ChainTrace& trace);

/// Mean of the sampled membership matrices, accumulated from label vectors.
CoClusterMatrix coclustering_mean(const ChainTrace& trace);

/// Projects the mean onto membership matrices: walks thresholds t* = iter/M
/// downward from (M-1)/M, at each greedily grouping (ascending scan, strict
/// comparison, grouped rows zeroed) until exactly k0 clusters appear. The
/// first threshold is always evaluated, even when the scan starts at k0
/// clusters. Throws ThresholdError when no threshold works.
std::pair<MembershipMatrix, double> threshold_to_membership(const CoClusterMatrix& bbar, int k0,
                                                            int m);

/// Members of clusters smaller than min_size, plus the membership matrix
/// restricted to everything else (kept in original order).
std::pair<std::vector<int>, MembershipMatrix> detect_outliers(const MembershipMatrix& b_star,
                                                              int min_size);

/// Fraction of observation pairs on which the two partitions agree
/// (together in both, or separated in both).
double rand_index(const Partition& estimated, const Partition& truth);

/// Per estimated cluster, the count of its dominant truth label, summed and
/// divided by n. Over-segmentation is not penalized.
double classification_rate(const Partition& estimated, const Partition& truth);

/// Full reduction: mode of K, co-clustering mean, thresholding, outliers.
SummaryResult summarize_trace(const ChainTrace& trace, int min_size = 3);

}  // namespace shapeclust
