#include "shapeclust/srvf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shapeclust {

void Srvf::validate() const {
  if (values.rows() < 3) throw std::invalid_argument("srvf: T < 3");
  if (values.cols() < 1) throw std::invalid_argument("srvf: p < 1");
  if (!values.allFinite()) throw std::invalid_argument("srvf: non-finite value");
  if (unit_length) {
    const double n2 = l2_inner(*this, *this);
    if (std::abs(n2 - 1.0) > 1e-8) {
      std::ostringstream msg;
      msg << "srvf: unit_length flag set but squared norm is " << n2;
      throw std::invalid_argument(msg.str());
    }
  }
}

Rotation Rotation::identity(int p) { return {Eigen::MatrixXd::Identity(p, p)}; }

void Rotation::validate() const {
  const auto p = matrix.rows();
  if (p < 1 || matrix.cols() != p) throw std::invalid_argument("rotation: not square");
  if ((matrix.transpose() * matrix - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("rotation: not orthogonal");
  if (std::abs(matrix.determinant() - 1.0) > 1e-10)
    throw std::invalid_argument("rotation: determinant is not +1");
}

Reparameterization Reparameterization::identity(int t) {
  Reparameterization g;
  g.gamma = Eigen::VectorXd::LinSpaced(t, 0.0, 1.0);
  return g;
}

void Reparameterization::validate() const {
  const auto t = gamma.size();
  if (t < 3) throw std::invalid_argument("reparameterization: T < 3");
  if (std::abs(gamma[0]) > 1e-12 || std::abs(gamma[t - 1] - 1.0) > 1e-12)
    throw std::invalid_argument("reparameterization: boundary values are not 0 and 1");
  for (Eigen::Index k = 1; k < t; ++k)
    if (gamma[k] < gamma[k - 1])
      throw std::invalid_argument("reparameterization: not nondecreasing");
}

namespace {

// Q(x) = x / sqrt(|x|), Q(0) = 0.
Eigen::RowVectorXd q_map(const Eigen::RowVectorXd& v) {
  const double speed = v.norm();
  if (speed == 0.0) return Eigen::RowVectorXd::Zero(v.size());
  return v / std::sqrt(speed);
}

// Trapezoid weight for grid index k of T points on [0,1].
double trap_weight(int k, int t) {
  const double h = 1.0 / (t - 1);
  return (k == 0 || k == t - 1) ? 0.5 * h : h;
}

}  // namespace

Srvf srvf(const Curve& curve) {
  curve.validate();
  const int t = curve.samples();
  const int p = curve.dim();
  const double h = 1.0 / (t - 1);
  const auto& pts = curve.points;

  Srvf q;
  q.closed = curve.closed;
  q.values.resize(t, p);
  if (curve.closed) {
    // distinct samples 0..t-2; circular central differences
    const int n = t - 1;
    for (int k = 0; k < n; ++k) {
      const int prev = (k - 1 + n) % n;
      const int next = (k + 1) % n;
      q.values.row(k) = q_map((pts.row(next) - pts.row(prev)) / (2.0 * h));
    }
    q.values.row(t - 1) = q.values.row(0);
  } else {
    q.values.row(0) = q_map((pts.row(1) - pts.row(0)) / h);
    for (int k = 1; k + 1 < t; ++k)
      q.values.row(k) = q_map((pts.row(k + 1) - pts.row(k - 1)) / (2.0 * h));
    q.values.row(t - 1) = q_map((pts.row(t - 1) - pts.row(t - 2)) / h);
  }
  return q;
}

Srvf rescale_unit(const Srvf& q) {
  const double n2 = l2_inner(q, q);
  if (n2 <= 0.0) throw std::invalid_argument("rescale_unit: degenerate constant curve");
  Srvf out = q;
  out.values /= std::sqrt(n2);
  out.unit_length = true;
  return out;
}

double l2_inner(const Srvf& q1, const Srvf& q2) {
  if (q1.samples() != q2.samples() || q1.dim() != q2.dim())
    throw std::invalid_argument("l2_inner: grid mismatch");
  const int t = q1.samples();
  double acc = 0.0;
  for (int k = 0; k < t; ++k)
    acc += trap_weight(k, t) * q1.values.row(k).dot(q2.values.row(k));
  return acc;
}

Srvf apply_group(const Srvf& q, const Rotation& o, const Reparameterization& gamma) {
  if (o.matrix.rows() != q.dim())
    throw std::invalid_argument("apply_group: rotation dimension mismatch");
  if (gamma.gamma.size() != q.samples())
    throw std::invalid_argument("apply_group: gamma grid mismatch");
  gamma.validate();

  const int t = q.samples();
  const double h = 1.0 / (t - 1);
  const auto& g = gamma.gamma;

  Srvf out;
  out.closed = q.closed;
  out.values.resize(t, q.dim());
  for (int k = 0; k < t; ++k) {
    double gdot;
    if (k == 0)
      gdot = (g[1] - g[0]) / h;
    else if (k == t - 1)
      gdot = (g[t - 1] - g[t - 2]) / h;
    else
      gdot = (g[k + 1] - g[k - 1]) / (2.0 * h);

    // q(gamma(t_k)) by linear interpolation
    const double u = std::clamp(g[k], 0.0, 1.0) * (t - 1);
    const int lo = std::min(static_cast<int>(u), t - 2);
    const double w = u - lo;
    Eigen::RowVectorXd interp = (1.0 - w) * q.values.row(lo) + w * q.values.row(lo + 1);
    out.values.row(k) = std::sqrt(std::max(gdot, 0.0)) * (interp * o.matrix.transpose());
  }
  return out;
}

Srvf cyclic_shift(const Srvf& q, int offset) {
  if (!q.closed) throw std::invalid_argument("cyclic_shift: SRVF is not closed");
  const int t = q.samples();
  const int n = t - 1;
  const int m = ((offset % n) + n) % n;
  Srvf out = q;
  for (int k = 0; k < n; ++k) out.values.row(k) = q.values.row((k + m) % n);
  out.values.row(t - 1) = out.values.row(0);
  return out;
}

}  // namespace shapeclust
