#pragma once

#include "shapeclust/partition.hpp"

namespace shapeclust {

/// Log of the CRP exchangeable partition probability:
/// K log(xi) + sum_j lgamma(n_j) - sum_{i=0}^{n-1} log(xi + i).
double crp_log_prior(const Partition& partition, double xi);

/// Expected number of clusters under the CRP: sum_{i=1}^{n} xi/(xi+i-1).
double expected_cluster_count(double xi, int n);

}  // namespace shapeclust
