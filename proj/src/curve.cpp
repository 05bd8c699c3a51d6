#include "shapeclust/curve.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shapeclust {

namespace {

double closure_gap(const Eigen::MatrixXd& pts) {
  return (pts.row(0) - pts.row(pts.rows() - 1)).norm();
}

}  // namespace

void Curve::validate() const {
  if (points.rows() < 3) {
    std::ostringstream msg;
    msg << "curve '" << id << "': T < 3 (got " << points.rows() << " samples)";
    throw std::invalid_argument(msg.str());
  }
  if (points.cols() < 1)
    throw std::invalid_argument("curve '" + id + "': p < 1");
  if (!points.allFinite())
    throw std::invalid_argument("curve '" + id + "': non-finite coordinate");
  if (closed && closure_gap(points) >= 1e-9) {
    std::ostringstream msg;
    msg << "curve '" << id << "': closed but closure gap is " << closure_gap(points);
    throw std::invalid_argument(msg.str());
  }
}

void CurveSet::validate() const {
  if (curves.empty()) throw std::invalid_argument("curve set is empty");
  const int p = curves.front().dim();
  for (const auto& c : curves) {
    c.validate();
    if (c.dim() != p) {
      std::ostringstream msg;
      msg << "curve '" << c.id << "': inconsistent dimension (p=" << c.dim()
          << ", set has p=" << p << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  if (!labels.empty() && labels.size() != curves.size())
    throw std::invalid_argument("truth labels length does not match curve count");
}

void PointSet::validate() const {
  if (points.rows() < 2) throw std::invalid_argument("point set needs n >= 2");
  if (!points.allFinite()) throw std::invalid_argument("point set has non-finite entry");
  if (!labels.empty() && static_cast<int>(labels.size()) != size())
    throw std::invalid_argument("truth labels length does not match point count");
}

Curve enforce_closure(const Curve& curve) {
  Curve out = curve;
  if (!out.closed || out.points.rows() < 2) return out;
  const double diam = (out.points.colwise().maxCoeff() - out.points.colwise().minCoeff()).norm();
  const double gap = closure_gap(out.points);
  if (gap <= 1e-6 * (diam + 1.0)) {
    // file round-off: snap seam to the average of the duplicated sample
    Eigen::RowVectorXd seam = 0.5 * (out.points.row(0) + out.points.row(out.points.rows() - 1));
    out.points.row(0) = seam;
    out.points.row(out.points.rows() - 1) = seam;
  } else {
    // contour stored without the duplicate seam sample
    out.points.conservativeResize(out.points.rows() + 1, Eigen::NoChange);
    out.points.row(out.points.rows() - 1) = out.points.row(0);
  }
  return out;
}

Curve resample(const Curve& curve, int n_points) {
  if (n_points < 3) throw std::invalid_argument("resample: n_points must be >= 3");
  curve.validate();
  const int t = curve.samples();

  Eigen::VectorXd cum(t);
  cum[0] = 0.0;
  for (int k = 1; k < t; ++k)
    cum[k] = cum[k - 1] + (curve.points.row(k) - curve.points.row(k - 1)).norm();
  const double total = cum[t - 1];
  if (total <= 0.0)
    throw std::invalid_argument("resample: curve '" + curve.id + "' has zero total length");

  Curve out;
  out.id = curve.id;
  out.closed = curve.closed;
  out.points.resize(n_points, curve.dim());
  out.points.row(0) = curve.points.row(0);
  out.points.row(n_points - 1) = curve.points.row(t - 1);

  int seg = 0;
  for (int m = 1; m + 1 < n_points; ++m) {
    const double target = total * m / (n_points - 1);
    while (seg + 2 < t && cum[seg + 1] <= target) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double w = len > 0.0 ? (target - cum[seg]) / len : 0.0;
    out.points.row(m) = (1.0 - w) * curve.points.row(seg) + w * curve.points.row(seg + 1);
  }
  return out;
}

Curve smooth(const Curve& curve, double bandwidth, int passes) {
  if (bandwidth <= 0.0) throw std::invalid_argument("smooth: bandwidth must be > 0");
  if (passes < 1) throw std::invalid_argument("smooth: passes must be >= 1");
  curve.validate();

  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * bandwidth)));
  Eigen::VectorXd kernel(2 * radius + 1);
  for (int j = -radius; j <= radius; ++j)
    kernel[j + radius] = std::exp(-0.5 * (j * j) / (bandwidth * bandwidth));
  kernel /= kernel.sum();

  Curve out = curve;
  const int t = curve.samples();
  // closed curves convolve circularly over the distinct samples
  const int n = curve.closed ? t - 1 : t;
  Eigen::MatrixXd work(n, curve.dim());
  for (int pass = 0; pass < passes; ++pass) {
    for (int k = 0; k < n; ++k) {
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(curve.dim());
      for (int j = -radius; j <= radius; ++j) {
        int idx = k + j;
        if (curve.closed)
          idx = ((idx % n) + n) % n;
        else
          idx = std::clamp(idx, 0, n - 1);
        acc += kernel[j + radius] * out.points.row(idx);
      }
      work.row(k) = acc;
    }
    out.points.topRows(n) = work;
    if (curve.closed) out.points.row(t - 1) = out.points.row(0);
  }
  return out;
}

Curve extend_endpoints(const Curve& curve, int k) {
  if (curve.closed)
    throw std::invalid_argument("extend_endpoints: curve '" + curve.id + "' is closed");
  if (k < 0) throw std::invalid_argument("extend_endpoints: k must be >= 0");
  curve.validate();
  if (k == 0) return curve;

  const int t = curve.samples();
  Curve out;
  out.id = curve.id;
  out.closed = false;
  out.points.resize(t + 2 * k, curve.dim());
  const Eigen::RowVectorXd head_step = curve.points.row(1) - curve.points.row(0);
  const Eigen::RowVectorXd tail_step = curve.points.row(t - 1) - curve.points.row(t - 2);
  for (int j = 0; j < k; ++j)
    out.points.row(j) = curve.points.row(0) - (k - j) * head_step;
  out.points.middleRows(k, t) = curve.points;
  for (int j = 0; j < k; ++j)
    out.points.row(k + t + j) = curve.points.row(t - 1) + (j + 1) * tail_step;
  return out;
}

Curve trim_endpoints(const Curve& curve, int k) {
  if (k < 0) throw std::invalid_argument("trim_endpoints: k must be >= 0");
  if (k == 0) return curve;
  if (curve.samples() - 2 * k < 3)
    throw std::invalid_argument("trim_endpoints: too few samples would remain");
  Curve out;
  out.id = curve.id;
  out.closed = curve.closed;
  out.points = curve.points.middleRows(k, curve.samples() - 2 * k);
  return out;
}

}  // namespace shapeclust
