#pragma once

#include <Eigen/Dense>

#include "shapeclust/curve.hpp"

namespace shapeclust {

/// Square-root velocity representation of a curve, sampled on the uniform
/// grid t_k = k/(T-1). Closed SRVFs mirror the curve convention: the seam
/// sample appears at both ends.
struct Srvf {
  Eigen::MatrixXd values;  // T x p
  bool closed = false;
  bool unit_length = false;

  int samples() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
  void validate() const;
};

/// Rotation in SO(p).
struct Rotation {
  Eigen::MatrixXd matrix;

  static Rotation identity(int p);
  /// Throws unless O^T O = I within 1e-10 and det O = +1 within 1e-10.
  void validate() const;
};

/// Boundary-preserving warp of [0,1], stored as its values on the grid.
struct Reparameterization {
  Eigen::VectorXd gamma;  // gamma(0) = 0, gamma(1) = 1, nondecreasing

  static Reparameterization identity(int t);
  void validate() const;
};

/// q(t) = dbeta/dt / sqrt(|dbeta/dt|), with the zero-speed samples mapped
/// to 0. Central differences inside, one-sided at open endpoints,
/// wraparound across the seam for closed curves. Translation of the curve
/// never enters.
Srvf srvf(const Curve& curve);

/// Scales q so the trapezoidal estimate of the squared L2 norm is 1.
/// Throws on a zero-norm input ("degenerate constant curve").
Srvf rescale_unit(const Srvf& q);

/// Trapezoidal approximation of the L2 inner product. Grids must match.
double l2_inner(const Srvf& q1, const Srvf& q2);

/// ((O, gamma), q) = O (q o gamma) sqrt(gamma'). Composition is evaluated
/// by linear interpolation on the grid; gamma' by the same finite-difference
/// scheme as srvf.
Srvf apply_group(const Srvf& q, const Rotation& o, const Reparameterization& gamma);

/// Relocates the seam of a closed SRVF by `offset` grid cells.
Srvf cyclic_shift(const Srvf& q, int offset);

}  // namespace shapeclust
