#include "shapeclust/crp.hpp"

#include <cmath>
#include <stdexcept>

namespace shapeclust {

double crp_log_prior(const Partition& partition, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("crp_log_prior: xi must be > 0");
  double acc = partition.k() * std::log(xi);
  for (int nj : partition.sizes) acc += std::lgamma(static_cast<double>(nj));
  for (int i = 0; i < partition.n(); ++i) acc -= std::log(xi + i);
  return acc;
}

double expected_cluster_count(double xi, int n) {
  if (!(xi > 0.0)) throw std::invalid_argument("expected_cluster_count: xi must be > 0");
  if (n < 1) throw std::invalid_argument("expected_cluster_count: n must be >= 1");
  double acc = 0.0;
  // (i - 1) in integer arithmetic: xi + i - 1 would cancel for tiny xi and
  // misprice the first seat, which should contribute exactly 1.
  for (int i = 1; i <= n; ++i) acc += xi / (xi + (i - 1));
  return acc;
}

}  // namespace shapeclust
