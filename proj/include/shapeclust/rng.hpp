#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace shapeclust {

/// Seeded generator with the handful of draws the samplers need.
/// All draws are produced from explicit arithmetic on mt19937_64 output so
/// that a given seed yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (pair cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    return static_cast<int>(uniform() * n) % n;
  }

  /// Categorical draw from unnormalized weights.
  int categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0 || !std::isfinite(w))
        throw std::invalid_argument("categorical: weights must be finite and nonnegative");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("categorical: all weights zero");
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  /// Categorical draw from unnormalized log weights (log-sum-exp normalized).
  /// Entries of -inf carry zero probability; all -inf is an error.
  int categorical_log(const std::vector<double>& log_weights) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights) mx = std::max(mx, lw);
    if (!std::isfinite(mx))
      throw std::runtime_error("categorical_log: all log-weights are -inf");
    double total = 0.0;
    for (double lw : log_weights) total += std::exp(lw - mx);
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < log_weights.size(); ++i) {
      u -= std::exp(log_weights[i] - mx);
      if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(log_weights.size()) - 1;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace shapeclust
