#pragma once

#include <vector>

#include "shapeclust/srvf.hpp"

namespace shapeclust {

struct AlignOpts {
  int max_iters = 5;     // alternation rounds per seam seed
  double tol = 1e-6;     // stop once a round improves the value by less
  int n_seeds = 0;       // closed curves: seam starts tried; 0 means T/5
};

struct DpResult {
  Reparameterization gamma;
  double value;  // discretized objective along the optimal path
};

/// Best monotone lattice warp of q2 onto q1 over paths from (0,0) to
/// (T-1,T-1) built from the slope set {(1,1),(1,2),(2,1),(1,3),(3,1),
/// (2,3),(3,2)}. The identity path is always feasible, so value >=
/// l2_inner(q1,q2) - 1e-9; ties resolve toward the identity step.
DpResult dp_reparam(const Srvf& q1, const Srvf& q2);

/// argmax over SO(p) of <q1, O q2>: SVD of the cross matrix
/// A = integral of q1 q2^T, with the last singular direction flipped when
/// needed to keep det(O) = +1.
Rotation procrustes_rotation(const Srvf& q1, const Srvf& q2);

struct AlignInfo {
  double value = 0.0;
  int seed_offset = 0;            // winning seam shift (grid cells)
  std::vector<double> history;    // best value after each round, nondecreasing
};

/// Definition of the elastic inner product: sup over warps and rotations of
/// the L2 inner product, approached by alternating dp_reparam and
/// procrustes_rotation from several starts. Closed curves search over seam
/// starts of q2; open planar curves search over rotation starts instead. The
/// result is the best value found, a lower bound on the true sup.
double elastic_inner_product(const Srvf& q1, const Srvf& q2, const AlignOpts& opts = {},
                             AlignInfo* info = nullptr);

}  // namespace shapeclust
