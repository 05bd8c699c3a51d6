#include "shapeclust/summary.hpp"

#include <algorithm>
#include <sstream>

namespace shapeclust {

void CoClusterMatrix::validate() const {
  const auto size = entries.rows();
  if (size < 1 || entries.cols() != size)
    throw std::invalid_argument("co-clustering matrix: not square");
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("co-clustering matrix: not symmetric");
  for (Eigen::Index i = 0; i < size; ++i)
    if (entries(i, i) != 1.0)
      throw std::invalid_argument("co-clustering matrix: diagonal entry is not 1");
  if (entries.minCoeff() < 0.0 || entries.maxCoeff() > 1.0)
    throw std::invalid_argument("co-clustering matrix: entry outside [0,1]");
}

std::pair<int, std::map<int, int>> mode_cluster_count(const ChainTrace& trace) {
  if (trace.samples.empty()) throw std::invalid_argument("mode_cluster_count: empty trace");
  std::map<int, int> hist;
  for (const auto& sample : trace.samples) ++hist[sample.partition.k()];
  int k0 = 0, best = -1;
  for (const auto& [k, count] : hist) {
    if (count > best) {  // map iterates ascending, so ties keep the smaller K
      best = count;
      k0 = k;
    }
  }
  return {k0, hist};
}

CoClusterMatrix coclustering_mean(const ChainTrace& trace) {
  if (trace.samples.empty()) throw std::invalid_argument("coclustering_mean: empty trace");
  const int n = trace.samples.front().partition.n();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::vector<int>> members;
  for (const auto& sample : trace.samples) {
    const Partition& part = sample.partition;
    members.assign(part.k(), {});
    for (int i = 0; i < n; ++i) members[part.labels[i]].push_back(i);
    for (const auto& cluster : members)
      for (int a : cluster)
        for (int b : cluster) counts(a, b) += 1.0;
  }
  CoClusterMatrix out;
  out.entries = counts / static_cast<double>(trace.samples.size());
  return out;
}

namespace {

// One pass of the greedy thresholding scan; returns the cluster count.
int threshold_pass(const Eigen::MatrixXd& mean, double t, Eigen::MatrixXi& b_star) {
  const int n = static_cast<int>(mean.rows());
  b_star.setZero(n, n);
  Eigen::MatrixXd work = mean;
  std::vector<char> used(n, 0);
  std::vector<int> group;
  int clusters = 0;
  for (int j = 0; j < n; ++j) {
    if (used[j]) continue;
    group.clear();
    for (int i = 0; i < n; ++i)
      if (work(j, i) > t) group.push_back(i);
    ++clusters;
    for (int i : group) {
      used[i] = 1;
      work.row(i).setZero();
      work.col(i).setZero();
    }
    for (int a : group)
      for (int b : group) b_star(a, b) = 1;
  }
  return clusters;
}

}  // namespace

std::pair<MembershipMatrix, double> threshold_to_membership(const CoClusterMatrix& bbar, int k0,
                                                            int m) {
  bbar.validate();
  if (k0 < 1 || k0 > bbar.n())
    throw std::invalid_argument("threshold_to_membership: k0 out of range");
  if (m < 1) throw std::invalid_argument("threshold_to_membership: M must be >= 1");

  MembershipMatrix b_star;
  for (int iter = m - 1; iter >= 0; --iter) {
    const double t = static_cast<double>(iter) / m;
    if (threshold_pass(bbar.entries, t, b_star.entries) == k0) return {b_star, t};
  }
  std::ostringstream msg;
  msg << "no threshold in {0.." << m - 1 << "}/" << m << " yields " << k0
      << " clusters; sample more posteriors or re-sample the chain";
  throw ThresholdError(msg.str());
}

std::pair<std::vector<int>, MembershipMatrix> detect_outliers(const MembershipMatrix& b_star,
                                                              int min_size) {
  if (min_size < 1) throw std::invalid_argument("detect_outliers: min_size must be >= 1");
  const Partition part = to_partition(b_star);

  std::vector<int> flagged, kept;
  for (int i = 0; i < part.n(); ++i)
    (part.sizes[part.labels[i]] < min_size ? flagged : kept).push_back(i);

  MembershipMatrix rest;
  const int nk = static_cast<int>(kept.size());
  rest.entries.resize(nk, nk);
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nk; ++b) rest.entries(a, b) = b_star.entries(kept[a], kept[b]);
  return {flagged, rest};
}

double rand_index(const Partition& estimated, const Partition& truth) {
  if (estimated.n() != truth.n()) throw std::invalid_argument("rand_index: length mismatch");
  const int n = estimated.n();
  if (n < 2) throw std::invalid_argument("rand_index: need n >= 2");
  long long agree = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool same_est = estimated.labels[i] == estimated.labels[j];
      const bool same_truth = truth.labels[i] == truth.labels[j];
      if (same_est == same_truth) ++agree;
    }
  return static_cast<double>(agree) / (static_cast<double>(n) * (n - 1) / 2);
}

double classification_rate(const Partition& estimated, const Partition& truth) {
  if (estimated.n() != truth.n())
    throw std::invalid_argument("classification_rate: length mismatch");
  estimated.validate();
  truth.validate();
  long long correct = 0;
  std::vector<int> tally(truth.k());
  for (int j = 0; j < estimated.k(); ++j) {
    std::fill(tally.begin(), tally.end(), 0);
    for (int i = 0; i < estimated.n(); ++i)
      if (estimated.labels[i] == j) ++tally[truth.labels[i]];
    correct += *std::max_element(tally.begin(), tally.end());
  }
  return static_cast<double>(correct) / estimated.n();
}

SummaryResult summarize_trace(const ChainTrace& trace, int min_size) {
  SummaryResult out;
  auto [k0, hist] = mode_cluster_count(trace);
  out.k0 = k0;
  out.histogram_k = std::move(hist);

  const CoClusterMatrix bbar = coclustering_mean(trace);
  auto [b_star, t_star] =
      threshold_to_membership(bbar, k0, static_cast<int>(trace.samples.size()));
  out.b_star = std::move(b_star);
  out.t_star = t_star;
  out.partition = to_partition(out.b_star);
  out.outliers = detect_outliers(out.b_star, min_size).first;
  return out;
}

}  // namespace shapeclust
