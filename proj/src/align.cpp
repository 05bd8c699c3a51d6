#include "shapeclust/align.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace shapeclust {

namespace {

// Lattice step (di, dj): advance di grid cells in t while gamma advances dj.
// The identity step sits first so strict-improvement comparisons resolve
// ties toward the identity path.
struct Slope {
  int di, dj;
};
constexpr Slope kSlopes[] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 3}, {3, 2}};
constexpr int kNumSlopes = static_cast<int>(sizeof(kSlopes) / sizeof(kSlopes[0]));

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Contribution of the segment starting at node (a,b) with slope (di,dj):
// trapezoid rule over the di sub-intervals of sqrt(dj/di) <q1(t), q2(g(t))>
// with q2 linearly interpolated. D holds all pairwise sample dots.
double edge_value(const Eigen::MatrixXd& d, int a, int b, const Slope& s, double h) {
  auto frac = [&](int i, int j, double f) {
    return (1.0 - f) * d(i, j) + f * d(i, j + 1);
  };
  const double scale = std::sqrt(static_cast<double>(s.dj) / s.di) * h;
  double mid = 0.0;
  for (int k = 1; k < s.di; ++k) {
    const double u = b + static_cast<double>(k) * s.dj / s.di;
    const int lo = static_cast<int>(u);
    mid += frac(a + k, lo, u - lo);
  }
  return scale * (0.5 * d(a, b) + mid + 0.5 * d(a + s.di, b + s.dj));
}

}  // namespace

DpResult dp_reparam(const Srvf& q1, const Srvf& q2) {
  if (q1.samples() != q2.samples() || q1.dim() != q2.dim())
    throw std::invalid_argument("dp_reparam: grid mismatch");
  const int t = q1.samples();
  if (t < 3) throw std::invalid_argument("dp_reparam: T < 3");
  const double h = 1.0 / (t - 1);

  const Eigen::MatrixXd d = q1.values * q2.values.transpose();

  Eigen::MatrixXd value = Eigen::MatrixXd::Constant(t, t, kNegInf);
  Eigen::Matrix<signed char, Eigen::Dynamic, Eigen::Dynamic> pred =
      Eigen::Matrix<signed char, Eigen::Dynamic, Eigen::Dynamic>::Constant(t, t, -1);
  value(0, 0) = 0.0;

  for (int i = 1; i < t; ++i) {
    for (int j = 1; j < t; ++j) {
      double best = kNegInf;
      signed char arg = -1;
      for (int s = 0; s < kNumSlopes; ++s) {
        const int a = i - kSlopes[s].di;
        const int b = j - kSlopes[s].dj;
        if (a < 0 || b < 0 || value(a, b) == kNegInf) continue;
        const double cand = value(a, b) + edge_value(d, a, b, kSlopes[s], h);
        if (cand > best) {
          best = cand;
          arg = static_cast<signed char>(s);
        }
      }
      value(i, j) = best;
      pred(i, j) = arg;
    }
  }

  // walk the optimal path back to (0,0), filling gamma segment by segment
  DpResult out;
  out.value = value(t - 1, t - 1);
  out.gamma.gamma.resize(t);
  int i = t - 1, j = t - 1;
  out.gamma.gamma[t - 1] = 1.0;
  while (i > 0) {
    const Slope& s = kSlopes[pred(i, j)];
    const int a = i - s.di, b = j - s.dj;
    for (int k = 0; k < s.di; ++k)
      out.gamma.gamma[a + k] = (b + static_cast<double>(k) * s.dj / s.di) * h;
    i = a;
    j = b;
  }
  out.gamma.gamma[0] = 0.0;
  return out;
}

Rotation procrustes_rotation(const Srvf& q1, const Srvf& q2) {
  if (q1.samples() != q2.samples() || q1.dim() != q2.dim())
    throw std::invalid_argument("procrustes_rotation: grid mismatch");
  if (!q1.values.allFinite() || !q2.values.allFinite())
    throw std::invalid_argument("procrustes_rotation: non-finite input");
  const int t = q1.samples();
  const int p = q1.dim();
  const double h = 1.0 / (t - 1);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (int k = 0; k < t; ++k) {
    const double w = (k == 0 || k == t - 1) ? 0.5 * h : h;
    a.noalias() += w * q1.values.row(k).transpose() * q2.values.row(k);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(p, p);
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(p - 1, p - 1) = -1.0;
  return {svd.matrixU() * d * svd.matrixV().transpose()};
}

double elastic_inner_product(const Srvf& q1, const Srvf& q2, const AlignOpts& opts,
                             AlignInfo* info) {
  if (q1.samples() != q2.samples() || q1.dim() != q2.dim() || q1.closed != q2.closed)
    throw std::invalid_argument("elastic_inner_product: incompatible inputs");
  if (opts.max_iters < 1) throw std::invalid_argument("elastic_inner_product: max_iters < 1");

  const int t = q1.samples();
  const int p = q1.dim();
  std::vector<int> offsets{0};
  if (q1.closed) {
    const int cells = t - 1;
    const int ns = std::min(cells, opts.n_seeds > 0 ? opts.n_seeds : std::max(1, t / 5));
    offsets.clear();
    for (int o = 0; o < ns; ++o) offsets.push_back(o * cells / ns);
  }

  double overall = kNegInf;
  AlignInfo best_info;
  const double target_norm = std::sqrt(l2_inner(q2, q2));
  // Alternation from a fixed seam seed. The coordinate ascent is only
  // locally optimal, so each seed is tried warp-first and rotation-first;
  // the two orders frequently land in different basins.
  auto ascend = [&](Srvf cur, bool rotate_first, std::vector<double>& history) {
    if (rotate_first) {
      const Rotation o = procrustes_rotation(q1, cur);
      cur.values = cur.values * o.matrix.transpose();
    }
    double best = l2_inner(q1, cur);
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      const double prev = best;
      DpResult dp = dp_reparam(q1, cur);
      cur = apply_group(cur, Rotation::identity(p), dp.gamma);
      // the action is an isometry; project out the norm drift the discrete
      // warp introduces, which also caps unit-length values at 1
      const double norm = std::sqrt(l2_inner(cur, cur));
      if (norm > 0.0) cur.values *= target_norm / norm;
      best = std::max(best, l2_inner(q1, cur));
      const Rotation o = procrustes_rotation(q1, cur);
      cur.values = cur.values * o.matrix.transpose();
      best = std::max(best, l2_inner(q1, cur));
      history.push_back(best);
      if (best - prev < opts.tol) break;
    }
    return best;
  };
  // Open 2-D pairs get rotation restarts for the warp-first ascent: a large
  // planted rotation can trap the alternation, and unlike closed curves
  // there are no seam shifts to diversify the starts. The rotate-first
  // ascent needs no restarts because the initial Procrustes step lands on
  // the same net rotation from any seed.
  std::vector<double> angles{0.0};
  if (!q1.closed && p == 2)
    for (int k = 1; k < 24; ++k) angles.push_back(k * std::numbers::pi / 12.0);

  auto consider = [&](double best, int offset, std::vector<double>& history) {
    if (best > overall) {
      overall = best;
      best_info.value = best;
      best_info.seed_offset = offset;
      best_info.history = std::move(history);
    }
  };
  for (int offset : offsets) {
    const Srvf base = q1.closed ? cyclic_shift(q2, offset) : q2;
    {
      std::vector<double> history;
      consider(ascend(base, true, history), offset, history);
    }
    for (double angle : angles) {
      Srvf seed = base;
      if (angle != 0.0) {
        Eigen::Matrix2d rot;
        rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
        seed.values = seed.values * rot.transpose();
      }
      std::vector<double> history;
      consider(ascend(seed, false, history), offset, history);
    }
  }
  if (info) *info = std::move(best_info);
  return overall;
}

}  // namespace shapeclust
