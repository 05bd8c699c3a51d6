// Independent reference implementations used by the test suites. Everything
// here is deliberately written from the definitions (dense matrices, brute
// force enumeration, quadrature) rather than reusing library code paths, so
// agreement is meaningful.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// randomness for test inputs; independent of the library generator
// ---------------------------------------------------------------------------

using TestRng = std::mt19937_64;

inline double runif(TestRng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double rnorm(TestRng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline Matrix random_spd(int n, TestRng& rng, double ridge = 0.05) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rnorm(rng);
  return a * a.transpose() / n + ridge * Matrix::Identity(n, n);
}

inline std::vector<int> random_labels(int n, int max_k, TestRng& rng) {
  std::vector<int> labels(n);
  std::uniform_int_distribution<int> pick(0, max_k - 1);
  for (int& l : labels) l = pick(rng);
  return labels;
}

inline constexpr double kTau = 6.283185307179586476925286766559;

// 2x2 rotation by a uniform angle
inline Matrix random_rotation2(TestRng& rng) {
  const double a = runif(rng, 0.0, kTau);
  Matrix o(2, 2);
  o << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return o;
}

// ---------------------------------------------------------------------------
// set partitions via restricted growth strings
// ---------------------------------------------------------------------------

inline std::vector<std::vector<int>> enumerate_set_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(n, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      out.push_back(labels);
      return;
    }
    for (int c = 0; c <= used; ++c) {
      labels[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(1, 1);  // observation 0 is pinned to block 0
  return out;
}

inline std::string labels_key(const std::vector<int>& labels) {
  std::string key;
  for (int l : labels) {
    key += std::to_string(l);
    key += ',';
  }
  return key;
}

// ---------------------------------------------------------------------------
// dense-matrix Wishart algebra, straight from the density
// ---------------------------------------------------------------------------

inline Matrix membership_matrix(const std::vector<int>& labels) {
  const int n = static_cast<int>(labels.size());
  Matrix b = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = labels[i] == labels[j] ? 1.0 : 0.0;
  return b;
}

// Partition-dependent part of the log density: (d/2)(log|Sigma^-1| -
// tr(Sigma^-1 S)) for Sigma = alpha (I + theta B), computed with dense
// factorizations only.
inline double dense_loglik(const Matrix& s, const std::vector<int>& labels, double alpha,
                           double theta, double d) {
  const int n = static_cast<int>(labels.size());
  const Matrix sigma = alpha * (Matrix::Identity(n, n) + theta * membership_matrix(labels));
  Eigen::LLT<Matrix> llt(sigma);
  double log_det_sigma = 0.0;
  for (int i = 0; i < n; ++i) log_det_sigma += 2.0 * std::log(llt.matrixL()(i, i));
  const double trace = llt.solve(s).trace();
  return 0.5 * d * (-log_det_sigma - trace);
}

// log of the alpha-marginalized likelihood by 1-D quadrature against the
// Inv-Gamma(r d/2, s d/2) prior. Composite Simpson on a bracket around the
// integrand's mode, wide enough that the tails are negligible at the 1e-8
// level. Returned up to partition-independent additive constants.
inline double quadrature_log_marg(const Matrix& s, const std::vector<int>& labels, double theta,
                                  double d, double r, double sc) {
  const double a = 0.5 * r * d, b = 0.5 * sc * d;
  auto log_f = [&](double alpha) {
    // Inv-Gamma kernel (normalizer constant in the partition) times the
    // dense likelihood
    return (-a - 1.0) * std::log(alpha) - b / alpha + dense_loglik(s, labels, alpha, theta, d);
  };
  // locate the mode by golden-section on log alpha
  double lo = -12.0, hi = 12.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), e = lo + gr * (hi - lo);
  for (int it = 0; it < 200; ++it) {
    if (log_f(std::exp(c)) > log_f(std::exp(e)))
      hi = e;
    else
      lo = c;
    c = hi - gr * (hi - lo);
    e = lo + gr * (hi - lo);
  }
  const double la_mode = 0.5 * (lo + hi);
  const double peak = log_f(std::exp(la_mode));
  // integrate f dalpha = f(exp(u)) exp(u) du over a generous window in u
  const double span = 30.0;
  const int steps = 20000;  // even
  const double h = 2.0 * span / steps;
  double acc = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double u = la_mode - span + k * h;
    const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * std::exp(log_f(std::exp(u)) - peak + u);
  }
  return peak + std::log(acc * h / 3.0);
}

// ---------------------------------------------------------------------------
// pair-counting cluster metrics
// ---------------------------------------------------------------------------

inline double rand_index_oracle(const std::vector<int>& est, const std::vector<int>& truth) {
  const int n = static_cast<int>(est.size());
  long long agree = 0, pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ++pairs;
      if ((est[i] == est[j]) == (truth[i] == truth[j])) ++agree;
    }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

inline double classification_rate_oracle(const std::vector<int>& est,
                                         const std::vector<int>& truth) {
  std::map<int, std::map<int, int>> tally;  // est cluster -> truth label -> count
  for (std::size_t i = 0; i < est.size(); ++i) ++tally[est[i]][truth[i]];
  int dominant = 0;
  for (const auto& [cluster, counts] : tally) {
    int best = 0;
    for (const auto& [label, c] : counts) best = std::max(best, c);
    dominant += best;
  }
  return static_cast<double>(dominant) / static_cast<double>(est.size());
}

// ---------------------------------------------------------------------------
// synthetic Gram matrices
// ---------------------------------------------------------------------------

inline Matrix block_gram(const std::vector<int>& labels, double within, double between,
                         double diag = 1.0) {
  const int n = static_cast<int>(labels.size());
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s(i, j) = i == j ? diag : (labels[i] == labels[j] ? within : between);
  return s;
}

// ---------------------------------------------------------------------------
// total variation between empirical and exact partition distributions
// ---------------------------------------------------------------------------

inline double total_variation(const std::map<std::string, double>& p,
                              const std::map<std::string, double>& q) {
  std::map<std::string, double> merged = p;
  for (const auto& [k, v] : q) merged.emplace(k, 0.0);
  double tv = 0.0;
  for (const auto& [k, unused] : merged) {
    const double a = p.count(k) ? p.at(k) : 0.0;
    const double b = q.count(k) ? q.at(k) : 0.0;
    tv += std::abs(a - b);
  }
  return 0.5 * tv;
}

}  // namespace oracle
