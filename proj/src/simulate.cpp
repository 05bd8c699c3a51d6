#include "shapeclust/simulate.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "shapeclust/rng.hpp"

namespace shapeclust {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& cov, int component) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "mixture component " << component << ": covariance is not positive definite";
    throw std::invalid_argument(msg.str());
  }
  return llt.matrixL();
}

}  // namespace

void MixtureSpec::validate() const {
  if (weights.empty()) throw std::invalid_argument("mixture has no components");
  if (means.size() != weights.size() || covs.size() != weights.size())
    throw std::invalid_argument("mixture weights/means/covs lengths differ");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("mixture weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("mixture weights must sum to 1");
  const auto p = means.front().size();
  for (std::size_t j = 0; j < means.size(); ++j) {
    if (means[j].size() != p || covs[j].rows() != p || covs[j].cols() != p)
      throw std::invalid_argument("mixture component dimensions differ");
    cholesky_factor(covs[j], static_cast<int>(j));
  }
}

PointSet simulate_gaussian_mixture(const MixtureSpec& spec, int n, std::uint64_t seed) {
  spec.validate();
  if (n < 2) throw std::invalid_argument("simulate_gaussian_mixture: n must be >= 2");
  const int p = static_cast<int>(spec.means.front().size());

  std::vector<Eigen::MatrixXd> chol;
  chol.reserve(spec.covs.size());
  for (std::size_t j = 0; j < spec.covs.size(); ++j)
    chol.push_back(cholesky_factor(spec.covs[j], static_cast<int>(j)));

  Rng rng(seed);
  PointSet out;
  out.points.resize(n, p);
  out.labels.resize(n);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    const int j = rng.categorical(spec.weights);
    for (int d = 0; d < p; ++d) z[d] = rng.normal();
    out.points.row(i) = (spec.means[j] + chol[j] * z).transpose();
    out.labels[i] = j;
  }
  return out;
}

MixtureSpec default_mixture(int components, double separation) {
  if (components < 1) throw std::invalid_argument("default_mixture: components must be >= 1");
  MixtureSpec spec;
  for (int j = 0; j < components; ++j) {
    const double a = kTau * j / components;
    spec.weights.push_back(1.0 / components);
    Eigen::VectorXd mu(2);
    mu << separation * std::cos(a), separation * std::sin(a);
    spec.means.push_back(mu);
    spec.covs.push_back(Eigen::MatrixXd::Identity(2, 2));
  }
  return spec;
}

namespace {

// Planar template evaluated at phase s in [0,1). All templates are closed
// and traced counterclockwise at roughly unit scale.
Eigen::RowVector2d template_point(const ShapeClassSpec& cls, double s) {
  const double a = kTau * s;
  double r = 1.0;
  if (cls.tmpl == "circle") {
    r = 1.0;
  } else if (cls.tmpl == "ellipse") {
    const double x = std::cos(a), y = 0.25 * std::sin(a);
    return {x, y};
  } else if (cls.tmpl.size() > 4 && cls.tmpl.rfind("rose", 0) == 0) {
    const int petals = std::stoi(cls.tmpl.substr(4));
    if (petals < 2) throw std::invalid_argument("rose template needs >= 2 petals");
    r = 1.0 + std::cos(petals * a);
  } else if (cls.tmpl == "rectangle") {
    // perimeter of a 1.6 x 1 box, parameterized by arc length
    const double w = 1.6, h = 1.0, per = 2.0 * (w + h);
    double d = s * per;
    if (d < w) return {-w / 2 + d, -h / 2};
    d -= w;
    if (d < h) return {w / 2, -h / 2 + d};
    d -= h;
    if (d < w) return {w / 2 - d, h / 2};
    d -= w;
    return {-w / 2, h / 2 - d};
  } else if (cls.tmpl == "bumpy") {
    r = 1.0 + 0.45 * std::sin(2.0 * a) + 0.35 * std::cos(5.0 * a);
  } else {
    throw std::invalid_argument("unknown shape template '" + cls.tmpl + "'");
  }
  return {r * std::cos(a), r * std::sin(a)};
}

// Smooth periodic radial bump built from four low-order harmonics.
struct RadialNoise {
  double a[4], b[4];
  double amplitude;

  double operator()(double s) const {
    double v = 0.0;
    for (int k = 0; k < 4; ++k)
      v += (a[k] * std::cos((k + 1) * kTau * s) + b[k] * std::sin((k + 1) * kTau * s)) / (k + 1);
    return amplitude * v;
  }
};

}  // namespace

CurveSet simulate_shape_classes(const std::vector<ShapeClassSpec>& classes, int per_class,
                                std::uint64_t seed, const ShapeSimOpts& opts) {
  if (classes.empty()) throw std::invalid_argument("simulate_shape_classes: no classes");
  if (per_class < 1) throw std::invalid_argument("simulate_shape_classes: per_class must be >= 1");
  if (opts.samples < 8) throw std::invalid_argument("simulate_shape_classes: samples must be >= 8");

  Rng rng(seed);
  CurveSet out;
  const int t = opts.samples;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (int rep = 0; rep < per_class; ++rep) {
      RadialNoise noise{};
      noise.amplitude = classes[c].noise;
      for (int k = 0; k < 4; ++k) {
        noise.a[k] = rng.normal();
        noise.b[k] = rng.normal();
      }

      double angle = 0.0, scale = 1.0, shift = 0.0, warp = 0.0;
      Eigen::RowVector2d offset = Eigen::RowVector2d::Zero();
      if (opts.nuisance) {
        angle = rng.uniform(0.0, kTau);
        scale = rng.uniform(0.6, 1.8);
        offset << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        shift = rng.uniform();          // seam relocation
        warp = rng.uniform(-0.6, 0.6);  // gamma(u) = u + warp*sin(tau u)/tau
      }
      Eigen::Matrix2d rot;
      rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);

      Curve curve;
      {
        std::ostringstream id;
        id << classes[c].tmpl << "_" << rep;
        curve.id = id.str();
      }
      curve.closed = true;
      curve.points.resize(t, 2);
      for (int i = 0; i + 1 < t; ++i) {
        const double u = static_cast<double>(i) / (t - 1);
        const double g = u + warp * std::sin(kTau * u) / kTau;
        const double s = g + shift - std::floor(g + shift);
        Eigen::RowVector2d pt = template_point(classes[c], s);
        const double grow = 1.0 + noise(s);
        pt *= grow;
        curve.points.row(i) = scale * (pt * rot.transpose()) + offset;
      }
      curve.points.row(t - 1) = curve.points.row(0);
      out.curves.push_back(std::move(curve));
      out.labels.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace shapeclust
