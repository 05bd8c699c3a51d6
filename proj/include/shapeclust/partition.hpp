#pragma once

#include <Eigen/Dense>
#include <vector>

namespace shapeclust {

/// Set partition of {0..n-1} as dense cluster labels 0..K-1. Label order is
/// arbitrary unless canonicalized (first-appearance order).
struct Partition {
  std::vector<int> labels;
  std::vector<int> sizes;

  int n() const { return static_cast<int>(labels.size()); }
  int k() const { return static_cast<int>(sizes.size()); }

  static Partition singletons(int n);
  static Partition one_cluster(int n);
  /// Builds from raw labels (any integers); relabels to first-appearance
  /// order.
  static Partition from_labels(const std::vector<int>& raw);

  /// Relabeled copy in first-appearance order.
  Partition canonicalized() const;
  bool operator==(const Partition& other) const = default;

  /// Labels dense in 0..K-1, sizes consistent, every cluster nonempty.
  void validate() const;
};

/// Binary co-membership matrix: B_ij = 1 iff i and j share a cluster.
struct MembershipMatrix {
  Eigen::MatrixXi entries;

  int n() const { return static_cast<int>(entries.rows()); }
  /// Symmetry, unit diagonal, transitivity (same-cluster rows identical).
  void validate() const;
};

MembershipMatrix to_membership(const Partition& partition);
/// Inverse of to_membership; throws on a matrix violating the
/// MembershipMatrix invariants.
Partition to_partition(const MembershipMatrix& membership);

}  // namespace shapeclust
