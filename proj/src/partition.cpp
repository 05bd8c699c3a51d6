#include "shapeclust/partition.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace shapeclust {

Partition Partition::singletons(int n) {
  if (n < 1) throw std::invalid_argument("partition: n < 1");
  Partition p;
  p.labels.resize(n);
  for (int i = 0; i < n; ++i) p.labels[i] = i;
  p.sizes.assign(n, 1);
  return p;
}

Partition Partition::one_cluster(int n) {
  if (n < 1) throw std::invalid_argument("partition: n < 1");
  Partition p;
  p.labels.assign(n, 0);
  p.sizes.assign(1, n);
  return p;
}

Partition Partition::from_labels(const std::vector<int>& raw) {
  if (raw.empty()) throw std::invalid_argument("partition: no labels");
  Partition p;
  p.labels.reserve(raw.size());
  std::unordered_map<int, int> remap;
  for (int raw_label : raw) {
    auto [it, inserted] = remap.try_emplace(raw_label, static_cast<int>(p.sizes.size()));
    if (inserted) p.sizes.push_back(0);
    p.labels.push_back(it->second);
    ++p.sizes[it->second];
  }
  return p;
}

Partition Partition::canonicalized() const { return from_labels(labels); }

void Partition::validate() const {
  if (labels.empty()) throw std::invalid_argument("partition: no labels");
  std::vector<int> counts(sizes.size(), 0);
  for (int c : labels) {
    if (c < 0 || c >= k()) {
      std::ostringstream msg;
      msg << "partition: label " << c << " outside 0.." << k() - 1;
      throw std::invalid_argument(msg.str());
    }
    ++counts[c];
  }
  for (int j = 0; j < k(); ++j) {
    if (counts[j] == 0) throw std::invalid_argument("partition: empty cluster");
    if (counts[j] != sizes[j]) {
      std::ostringstream msg;
      msg << "partition: cluster " << j << " size " << sizes[j] << " but " << counts[j]
          << " members";
      throw std::invalid_argument(msg.str());
    }
  }
}

void MembershipMatrix::validate() const { to_partition(*this); }

MembershipMatrix to_membership(const Partition& partition) {
  partition.validate();
  const int n = partition.n();
  MembershipMatrix m;
  m.entries.setZero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.entries(i, j) = partition.labels[i] == partition.labels[j] ? 1 : 0;
  return m;
}

Partition to_partition(const MembershipMatrix& membership) {
  const auto n = membership.entries.rows();
  if (n < 1 || membership.entries.cols() != n)
    throw std::invalid_argument("membership: not square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (membership.entries(i, i) != 1)
      throw std::invalid_argument("membership: diagonal entry is not 1");
    for (Eigen::Index j = 0; j < n; ++j) {
      const int v = membership.entries(i, j);
      if (v != 0 && v != 1) throw std::invalid_argument("membership: non-binary entry");
      if (v != membership.entries(j, i))
        throw std::invalid_argument("membership: not symmetric");
    }
  }

  std::vector<int> labels(n, -1);
  int next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] >= 0) continue;
    const int cluster = next++;
    for (Eigen::Index j = i; j < n; ++j) {
      if (membership.entries(i, j) != 1) continue;
      if (labels[j] >= 0) throw std::invalid_argument("membership: not transitive");
      // rows of co-members must agree exactly
      if ((membership.entries.row(j).array() != membership.entries.row(i).array()).any())
        throw std::invalid_argument("membership: not transitive");
      labels[j] = cluster;
    }
  }
  return Partition::from_labels(labels);
}

}  // namespace shapeclust
