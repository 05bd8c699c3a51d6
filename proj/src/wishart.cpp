#include "shapeclust/wishart.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace shapeclust {

void WishartParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("wishart: alpha must be > 0");
  if (!(theta > 0.0)) throw std::invalid_argument("wishart: theta must be > 0");
  if (!(d > 0.0)) throw std::invalid_argument("wishart: d must be > 0");
  if (!(r > 0.0) || !(s > 0.0)) throw std::invalid_argument("wishart: r, s must be > 0");
}

BlockSums BlockSums::build(const GramMatrix& s, const Partition& partition) {
  partition.validate();
  if (s.size() != partition.n())
    throw std::invalid_argument("block sums: partition size does not match S");
  const int n = partition.n();
  const int k = partition.k();

  BlockSums sums;
  sums.trace_s = s.entries.trace();
  sums.sbar.assign(k, 0.0);
  sums.row_sums.assign(k, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    const int ci = partition.labels[i];
    for (int m = 0; m < n; ++m) sums.row_sums[ci][m] += s.entries(m, i);
  }
  for (int i = 0; i < n; ++i) sums.sbar[partition.labels[i]] += sums.row_sums[partition.labels[i]][i];
  return sums;
}

double BlockSums::verify(const GramMatrix& s, const Partition& partition) const {
  const BlockSums fresh = build(s, partition);
  if (fresh.sbar.size() != sbar.size() || fresh.row_sums.size() != row_sums.size())
    return std::numeric_limits<double>::infinity();
  double dev = std::abs(fresh.trace_s - trace_s);
  for (std::size_t j = 0; j < sbar.size(); ++j) {
    dev = std::max(dev, std::abs(fresh.sbar[j] - sbar[j]));
    for (std::size_t i = 0; i < row_sums[j].size(); ++i)
      dev = std::max(dev, std::abs(fresh.row_sums[j][i] - row_sums[j][i]));
  }
  return dev;
}

void detach_observation(const GramMatrix& s, Partition& partition, BlockSums& sums, int i) {
  const int n = partition.n();
  if (i < 0 || i >= n) throw std::invalid_argument("detach: index out of range");
  const int from = partition.labels[i];
  if (from < 0) throw std::invalid_argument("detach: observation already detached");

  sums.sbar[from] += -2.0 * sums.row_sums[from][i] + s.entries(i, i);
  for (int m = 0; m < n; ++m) sums.row_sums[from][m] -= s.entries(m, i);
  partition.labels[i] = -1;
  if (--partition.sizes[from] == 0) {
    const int last = partition.k() - 1;
    if (from != last) {
      partition.sizes[from] = partition.sizes[last];
      sums.sbar[from] = sums.sbar[last];
      sums.row_sums[from] = std::move(sums.row_sums[last]);
      for (int& c : partition.labels)
        if (c == last) c = from;
    }
    partition.sizes.pop_back();
    sums.sbar.pop_back();
    sums.row_sums.pop_back();
  }
}

void attach_observation(const GramMatrix& s, Partition& partition, BlockSums& sums, int i,
                        int to) {
  const int n = partition.n();
  if (i < 0 || i >= n) throw std::invalid_argument("attach: index out of range");
  if (partition.labels[i] != -1) throw std::invalid_argument("attach: observation not detached");
  const int k = partition.k();
  if (to < 0 || to > k) {
    std::ostringstream msg;
    msg << "attach: cluster " << to << " out of range (K=" << k << ", new cluster is " << k << ")";
    throw std::invalid_argument(msg.str());
  }

  if (to == k) {
    partition.sizes.push_back(0);
    sums.sbar.push_back(0.0);
    sums.row_sums.emplace_back(n, 0.0);
  }
  sums.sbar[to] += 2.0 * sums.row_sums[to][i] + s.entries(i, i);
  for (int m = 0; m < n; ++m) sums.row_sums[to][m] += s.entries(m, i);
  partition.labels[i] = to;
  ++partition.sizes[to];
}

void move_observation(const GramMatrix& s, Partition& partition, BlockSums& sums, int i, int to) {
  const int k_before = partition.k();
  if (to < 0 || to > k_before)
    throw std::invalid_argument("move: target cluster out of range");
  const int from = partition.labels[i];
  if (to == from) return;
  detach_observation(s, partition, sums, i);
  // account for slot motion caused by deleting an emptied source cluster
  int target = to;
  if (partition.k() < k_before) {
    if (target == k_before) {
      target = partition.k();        // "new cluster" follows the shrink
    } else if (target == partition.k()) {
      target = from;                 // last slot was swapped into `from`
    }
  }
  attach_observation(s, partition, sums, i, target);
}

double log_det_sigma_inv(const Partition& partition, double alpha, double theta) {
  if (!(alpha > 0.0) || !(theta > 0.0))
    throw std::invalid_argument("log_det_sigma_inv: alpha, theta must be > 0");
  double acc = -partition.n() * std::log(alpha);
  for (int nj : partition.sizes) acc -= std::log1p(theta * nj);
  return acc;
}

double trace_sigma_inv_s(const Partition& partition, double alpha, double theta,
                         const BlockSums& sums) {
  if (!(alpha > 0.0) || !(theta > 0.0))
    throw std::invalid_argument("trace_sigma_inv_s: alpha, theta must be > 0");
  if (static_cast<int>(sums.sbar.size()) != partition.k())
    throw std::invalid_argument("trace_sigma_inv_s: cache does not match partition");
  double acc = sums.trace_s;
  for (int j = 0; j < partition.k(); ++j)
    acc -= theta / (1.0 + partition.sizes[j] * theta) * sums.sbar[j];
  return acc / alpha;
}

double log_lik_full(const Partition& partition, const WishartParams& params,
                    const BlockSums& sums) {
  params.validate();
  return 0.5 * params.d *
         (log_det_sigma_inv(partition, params.alpha, params.theta) -
          trace_sigma_inv_s(partition, params.alpha, params.theta, sums));
}

double log_marg_lik(const Partition& partition, double theta, double d, double r, double s,
                    const BlockSums& sums) {
  if (!(theta > 0.0) || !(d > 0.0) || !(r > 0.0) || !(s > 0.0))
    throw std::invalid_argument("log_marg_lik: theta, d, r, s must be > 0");
  if (static_cast<int>(sums.sbar.size()) != partition.k())
    throw std::invalid_argument("log_marg_lik: cache does not match partition");

  double log_blocks = 0.0;
  double discount = 0.0;
  for (int j = 0; j < partition.k(); ++j) {
    log_blocks += std::log1p(theta * partition.sizes[j]);
    discount += theta * sums.sbar[j] / (1.0 + partition.sizes[j] * theta);
  }
  const double bracket = 0.5 * d * (sums.trace_s - discount + s);
  if (!(bracket > 0.0)) {
    std::ostringstream msg;
    msg << "log_marg_lik: nonpositive bracket " << bracket
        << " (theta=" << theta << "); theta too large for this S or S is badly indefinite";
    throw std::domain_error(msg.str());
  }
  return -0.5 * d * log_blocks - 0.5 * (partition.n() + r) * d * std::log(bracket);
}

double estimate_d_eb(const GramMatrix& s) {
  s.validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.entries);
  if (eig.info() != Eigen::Success) throw std::runtime_error("estimate_d_eb: eigensolver failed");

  std::vector<double> lambda;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()[i] > 0.0) lambda.push_back(eig.eigenvalues()[i]);
  std::sort(lambda.rbegin(), lambda.rend());
  double total = 0.0;
  for (double v : lambda) total += v;
  if (total <= 0.0) throw std::invalid_argument("estimate_d_eb: spectrum has no positive mass");

  double cum = 0.0;
  for (std::size_t m = 0; m < lambda.size(); ++m) {
    cum += lambda[m];
    if (cum >= 0.95 * total) return static_cast<double>(m + 1);
  }
  return static_cast<double>(lambda.size());
}

double estimate_xi(int k0, int n) {
  if (k0 < 1) throw std::invalid_argument("estimate_xi: K0 must be >= 1");
  if (n < 2) throw std::invalid_argument("estimate_xi: n must be >= 2");
  return k0 / std::log(static_cast<double>(n));
}

}  // namespace shapeclust
