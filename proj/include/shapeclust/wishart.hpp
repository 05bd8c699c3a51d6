#pragma once

#include "shapeclust/gram.hpp"
#include "shapeclust/partition.hpp"

namespace shapeclust {

struct WishartParams {
  double alpha = 1.0;
  double theta = 0.3;
  double d = 2.0;   // degrees of freedom
  double r = 3.0;   // alpha ~ Inv-Gamma(r*d/2, s*d/2)
  double s = 4.0;

  void validate() const;  // all strictly positive
};

/// Block-sum cache for Sigma = alpha(I + theta B) likelihood evaluations:
/// per-cluster totals sbar_j = sum of S over the j-th diagonal block, plus
/// row_sums[j][i] = sum of S(i, m) over m in cluster j so a single move
/// updates in O(n). Cluster slots follow the partition's labels; deleting
/// an emptied cluster swaps the last slot in.
struct BlockSums {
  double trace_s = 0.0;
  std::vector<double> sbar;
  std::vector<std::vector<double>> row_sums;  // [cluster][observation]

  static BlockSums build(const GramMatrix& s, const Partition& partition);
  /// Max absolute deviation from a from-scratch rebuild.
  double verify(const GramMatrix& s, const Partition& partition) const;
};

/// Removes observation i from its cluster, updating partition and sums. An
/// emptied cluster is deleted (last slot swapped in). While detached,
/// labels[i] = -1; the partition is invalid until attach_observation.
void detach_observation(const GramMatrix& s, Partition& partition, BlockSums& sums, int i);

/// Places detached observation i into cluster `to`; `to` equal to the
/// current K opens a new cluster. Throws on any other out-of-range index.
void attach_observation(const GramMatrix& s, Partition& partition, BlockSums& sums, int i,
                        int to);

/// detach + attach with the public-facing contract (partition stays valid).
void move_observation(const GramMatrix& s, Partition& partition, BlockSums& sums, int i, int to);

/// log |Sigma^{-1}| = -n log(alpha) - sum_j log(1 + theta n_j).
double log_det_sigma_inv(const Partition& partition, double alpha, double theta);

/// tr(Sigma^{-1} S) = (1/alpha) { tr(S) - sum_j theta/(1+n_j theta) sbar_j }.
double trace_sigma_inv_s(const Partition& partition, double alpha, double theta,
                         const BlockSums& sums);

/// Log-likelihood of S given (B, alpha, theta, d) up to the B-independent
/// additive constant (the |S| factor and the Wishart normalizer are
/// dropped): (d/2) [ log_det_sigma_inv - trace_sigma_inv_s ].
double log_lik_full(const Partition& partition, const WishartParams& params,
                    const BlockSums& sums);

/// Log-likelihood with alpha integrated out against Inv-Gamma(r d/2, s d/2):
/// -(d/2) sum_j log(1+theta n_j)
/// - ((n+r) d/2) log[ (d/2)(tr S - sum_j theta sbar_j/(1+n_j theta) + s) ].
/// Throws if the bracketed term is nonpositive.
double log_marg_lik(const Partition& partition, double theta, double d, double r, double s,
                    const BlockSums& sums);

/// Smallest count of descending nonnegative eigenvalues of S whose
/// cumulative share of the nonnegative spectral mass reaches 0.95.
/// Negative eigenvalues (alignment artifacts) are excluded entirely.
double estimate_d_eb(const GramMatrix& s);

/// CRP precision from an initial cluster-count guess: K0 / ln(n).
double estimate_xi(int k0, int n);

}  // namespace shapeclust
