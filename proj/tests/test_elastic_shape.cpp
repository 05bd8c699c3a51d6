#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <functional>
#include <vector>

#include "oracle_helpers.hpp"
#include "shapeclust/align.hpp"
#include "shapeclust/curve.hpp"
#include "shapeclust/gram.hpp"
#include "shapeclust/simulate.hpp"
#include "shapeclust/srvf.hpp"

using namespace shapeclust;

namespace {

Curve straight_line(double speed, int t = 21) {
  Curve c;
  c.closed = false;
  c.points.resize(t, 2);
  for (int i = 0; i < t; ++i) c.points.row(i) << speed * i / (t - 1), 0.0;
  return c;
}

// smooth random open curve from a low-order sine series
Curve random_open_curve(oracle::TestRng& rng, int t = 100) {
  Curve c;
  c.closed = false;
  c.points.resize(t, 2);
  double a1 = oracle::runif(rng, 0.5, 1.5), a2 = oracle::runif(rng, -0.6, 0.6);
  double b1 = oracle::runif(rng, -0.8, 0.8), b2 = oracle::runif(rng, -0.4, 0.4);
  for (int i = 0; i < t; ++i) {
    const double u = static_cast<double>(i) / (t - 1);
    c.points(i, 0) = u + a2 * std::sin(oracle::kTau * u);
    c.points(i, 1) = a1 * std::sin(0.5 * oracle::kTau * u) + b1 * std::sin(oracle::kTau * u) +
                     b2 * std::sin(1.5 * oracle::kTau * u);
  }
  return c;
}

// smooth random closed loop: unit circle plus low-frequency radial wobble
Curve random_closed_curve(oracle::TestRng& rng, int t = 100) {
  Curve c;
  c.closed = true;
  c.points.resize(t, 2);
  const double w2 = oracle::runif(rng, -0.25, 0.25), w3 = oracle::runif(rng, -0.2, 0.2);
  const double p2 = oracle::runif(rng, 0.0, oracle::kTau), p3 = oracle::runif(rng, 0.0, oracle::kTau);
  for (int i = 0; i + 1 < t; ++i) {
    const double u = static_cast<double>(i) / (t - 1);
    const double a = oracle::kTau * u;
    const double r = 1.0 + w2 * std::sin(2.0 * a + p2) + w3 * std::cos(3.0 * a + p3);
    c.points.row(i) << r * std::cos(a), r * std::sin(a);
  }
  c.points.row(t - 1) = c.points.row(0);
  return c;
}

// boundary-preserving smooth warp of [0,1]; amp < 1/(2 pi) keeps it monotone
std::function<double(double)> smooth_warp(double amp, int freq) {
  return [amp, freq](double u) { return u + amp * std::sin(oracle::kTau * freq * u) / (oracle::kTau * freq); };
}

Srvf unit_srvf(const Curve& c, int t = 0) {
  Curve r = t > 0 ? resample(c, t) : c;
  return rescale_unit(srvf(r));
}

// independent edge evaluator for the DP oracle: trapezoid over the di
// sub-intervals of sqrt(dj/di) <q1(t), q2(gamma(t))> with linear
// interpolation of q2
double oracle_edge(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2, int a, int b, int di,
                   int dj, double h) {
  auto interp = [&](double j) {
    const int lo = std::min(static_cast<int>(j), static_cast<int>(q2.rows()) - 2);
    const double f = j - lo;
    return ((1.0 - f) * q2.row(lo) + f * q2.row(lo + 1)).eval();
  };
  const double scale = std::sqrt(static_cast<double>(dj) / di) * h;
  double acc = 0.5 * q1.row(a).dot(q2.row(b)) +
               0.5 * q1.row(a + di).dot(q2.row(b + dj));
  for (int k = 1; k < di; ++k)
    acc += q1.row(a + k).dot(interp(b + static_cast<double>(k) * dj / di));
  return scale * acc;
}

// exhaustive search over every monotone lattice path with the same slope set
double exhaustive_dp_value(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2) {
  const int t = static_cast<int>(q1.rows());
  const double h = 1.0 / (t - 1);
  static const int slopes[][2] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 3}, {3, 2}};
  double best = -1e300;
  std::function<void(int, int, double)> walk = [&](int i, int j, double acc) {
    if (i == t - 1 && j == t - 1) {
      best = std::max(best, acc);
      return;
    }
    for (const auto& s : slopes) {
      const int ni = i + s[0], nj = j + s[1];
      if (ni > t - 1 || nj > t - 1) continue;
      walk(ni, nj, acc + oracle_edge(q1, q2, i, j, s[0], s[1], h));
    }
  };
  walk(0, 0, 0.0);
  return best;
}

}  // namespace

TEST_CASE("srvf: constant-speed segment maps to q = (2, 0)") {
  Curve c = straight_line(4.0);
  const Srvf q = srvf(c);
  for (int i = 0; i < q.samples(); ++i) {
    CHECK(q.values(i, 0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(q.values(i, 1) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("srvf: constant curve maps to zero") {
  Curve c;
  c.closed = false;
  c.points = Eigen::MatrixXd::Constant(10, 2, 1.3);
  CHECK(srvf(c).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("srvf: translation never enters, bit-exact") {
  oracle::TestRng rng(31);
  Curve c = random_open_curve(rng, 60);
  // Dyadic lattice coordinates + integer offsets make the translated
  // differences exactly representable, so the derivative bits agree.
  c.points = ((c.points.array() * 1048576.0).round() / 1048576.0).matrix();
  Curve shifted = c;
  shifted.points.col(0).array() += 5.0;
  shifted.points.col(1).array() += 7.0;
  const Srvf a = srvf(c), b = srvf(shifted);
  CHECK((a.values.array() == b.values.array()).all());
}

TEST_CASE("rescale_unit: norm 4 scales by half, idempotent, scale invariant") {
  Srvf q;
  q.closed = false;
  q.values = Eigen::MatrixXd::Constant(11, 2, 0.0);
  q.values.col(0).setConstant(2.0);  // integral of |q|^2 = 4
  const Srvf u = rescale_unit(q);
  CHECK(u.values(3, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u.unit_length);
  const Srvf uu = rescale_unit(u);
  CHECK((uu.values - u.values).cwiseAbs().maxCoeff() < 1e-12);

  oracle::TestRng rng(8);
  Curve c = random_open_curve(rng, 80);
  Curve c3 = c;
  c3.points *= 3.0;
  CHECK((unit_srvf(c3).values - unit_srvf(c).values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rescale_unit: degenerate curve rejected") {
  Srvf q;
  q.values = Eigen::MatrixXd::Zero(8, 2);
  CHECK_THROWS_WITH(rescale_unit(q), doctest::Contains("degenerate"));
}

TEST_CASE("l2_inner: unit self product is 1, orthogonal constants give 0") {
  oracle::TestRng rng(12);
  const Srvf u = unit_srvf(random_open_curve(rng));
  CHECK(l2_inner(u, u) == doctest::Approx(1.0).epsilon(1e-8));

  Srvf ex, ey;
  ex.values = Eigen::MatrixXd::Zero(16, 2);
  ey.values = Eigen::MatrixXd::Zero(16, 2);
  ex.values.col(0).setConstant(1.0);
  ey.values.col(1).setConstant(1.0);
  CHECK(l2_inner(ex, ey) == 0.0);
}

TEST_CASE("l2_inner: trapezoid matches a 10x refined quadrature") {
  // analytic integrand sampled at T and 10T; both trapezoid sums estimate
  // the same integral, so they must agree to the coarse grid's accuracy
  auto qa = [](double t) { return Eigen::RowVector2d(std::sin(3.0 * t), std::cos(2.0 * t)); };
  auto qb = [](double t) { return Eigen::RowVector2d(t * t, 1.0 - t); };
  auto build = [&](int t, auto f) {
    Srvf q;
    q.values.resize(t, 2);
    for (int i = 0; i < t; ++i) q.values.row(i) = f(static_cast<double>(i) / (t - 1));
    return q;
  };
  const double coarse = l2_inner(build(101, qa), build(101, qb));
  const double fine = l2_inner(build(1001, qa), build(1001, qb));
  CHECK(std::abs(coarse - fine) < 1e-4);
}

TEST_CASE("l2_inner: grid mismatch rejected") {
  Srvf a, b;
  a.values = Eigen::MatrixXd::Zero(10, 2);
  b.values = Eigen::MatrixXd::Zero(11, 2);
  CHECK_THROWS(l2_inner(a, b));
}

TEST_CASE("apply_group: identity action is exact") {
  oracle::TestRng rng(3);
  const Srvf q = unit_srvf(random_open_curve(rng, 50));
  const Srvf out = apply_group(q, Rotation::identity(2), Reparameterization::identity(50));
  CHECK((out.values - q.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_group: the action is an isometry up to discretization") {
  oracle::TestRng rng(5);
  const Srvf q = unit_srvf(random_open_curve(rng, 200));
  Reparameterization g;
  g.gamma.resize(200);
  auto warp = smooth_warp(0.12, 1);
  for (int i = 0; i < 200; ++i) g.gamma(i) = warp(static_cast<double>(i) / 199);
  Rotation o;
  o.matrix = oracle::random_rotation2(rng);
  const Srvf out = apply_group(q, o, g);
  CHECK(std::abs(std::sqrt(l2_inner(out, out)) - 1.0) < 1e-3);
}

TEST_CASE("apply_group: composed actions agree with the single composition") {
  oracle::TestRng rng(17);
  const int t = 200;
  const Srvf q = unit_srvf(random_open_curve(rng, t));
  auto fill = [&](auto f) {
    Reparameterization g;
    g.gamma.resize(t);
    for (int i = 0; i < t; ++i) g.gamma(i) = f(static_cast<double>(i) / (t - 1));
    return g;
  };
  auto w1 = smooth_warp(0.08, 1), w2 = smooth_warp(0.06, 2);
  Rotation o1, o2;
  o1.matrix = oracle::random_rotation2(rng);
  o2.matrix = oracle::random_rotation2(rng);

  // ((O1,g1) then (O2,g2)) equals the composed element (O2 O1, g1 o g2)
  const Srvf two_steps = apply_group(apply_group(q, o1, fill(w1)), o2, fill(w2));
  Rotation oc;
  oc.matrix = o2.matrix * o1.matrix;
  const Srvf one_step = apply_group(q, oc, fill([&](double u) { return w1(w2(u)); }));
  CHECK((two_steps.values - one_step.values).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("apply_group: non-monotone gamma rejected") {
  const Srvf q = unit_srvf(straight_line(1.0, 10));
  Reparameterization g = Reparameterization::identity(10);
  g.gamma(4) = 0.9;
  g.gamma(5) = 0.3;
  CHECK_THROWS(apply_group(q, Rotation::identity(2), g));
}

TEST_CASE("dp_reparam: self alignment returns the identity path") {
  oracle::TestRng rng(23);
  const Srvf q = unit_srvf(random_open_curve(rng, 60));
  const DpResult dp = dp_reparam(q, q);
  const Reparameterization id = Reparameterization::identity(60);
  CHECK((dp.gamma.gamma - id.gamma).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(dp.value == doctest::Approx(l2_inner(q, q)).epsilon(1e-9));
}

TEST_CASE("dp_reparam: recovers a smooth warp of the same curve") {
  oracle::TestRng rng(29);
  const int t = 100;
  Curve c = random_open_curve(rng, 400);
  Curve warped = c;
  // reparameterize the curve itself, then resample both to the common grid
  auto w = smooth_warp(0.1, 1);
  for (int i = 0; i < 400; ++i) {
    const double u = w(static_cast<double>(i) / 399);
    const double x = u * 399;
    const int lo = std::min(static_cast<int>(x), 398);
    const double f = x - lo;
    warped.points.row(i) = (1.0 - f) * c.points.row(lo) + f * c.points.row(lo + 1);
  }
  const Srvf q1 = unit_srvf(c, t), q2 = unit_srvf(warped, t);
  const DpResult dp = dp_reparam(q1, q2);
  CHECK(dp.value > 1.0 - 1e-2);
}

TEST_CASE("dp_reparam: exhaustive path enumeration oracle at T = 4") {
  oracle::TestRng rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    Srvf a, b;
    a.values.resize(4, 2);
    b.values.resize(4, 2);
    for (int i = 0; i < 4; ++i) {
      a.values.row(i) << oracle::rnorm(rng), oracle::rnorm(rng);
      b.values.row(i) << oracle::rnorm(rng), oracle::rnorm(rng);
    }
    const DpResult dp = dp_reparam(a, b);
    CHECK(dp.value == doctest::Approx(exhaustive_dp_value(a.values, b.values)).epsilon(1e-12));
  }
}

TEST_CASE("dp_reparam: value never drops below the identity path") {
  oracle::TestRng rng(47);
  for (int rep = 0; rep < 10; ++rep) {
    const Srvf a = unit_srvf(random_open_curve(rng, 40));
    const Srvf b = unit_srvf(random_open_curve(rng, 40));
    CHECK(dp_reparam(a, b).value >= l2_inner(a, b) - 1e-9);
  }
}

TEST_CASE("procrustes_rotation: identity on a self pair") {
  oracle::TestRng rng(53);
  const Srvf q = unit_srvf(random_open_curve(rng));
  const Rotation o = procrustes_rotation(q, q);
  CHECK((o.matrix - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("procrustes_rotation: recovers a planted rotation") {
  oracle::TestRng rng(59);
  const Srvf q1 = unit_srvf(random_open_curve(rng));
  Eigen::MatrixXd r = oracle::random_rotation2(rng);
  Srvf q2 = q1;
  // rows store q2_k = q1_k R, so O = R undoes it: q2_k O^T = q1_k
  q2.values = q1.values * r;
  const Rotation o = procrustes_rotation(q1, q2);
  CHECK((o.matrix - r).cwiseAbs().maxCoeff() < 1e-6);
  o.validate();
}

TEST_CASE("procrustes_rotation: reflection-optimal pair still returns det +1") {
  // cross matrix with a negative singular direction: mirror one coordinate
  oracle::TestRng rng(61);
  const Srvf q1 = unit_srvf(random_open_curve(rng));
  Srvf q2 = q1;
  q2.values.col(1) *= -1.0;
  const Rotation o = procrustes_rotation(q1, q2);
  o.validate();  // det +1 enforced
  Srvf best = q2;
  best.values = q2.values * o.matrix.transpose();
  const double got = l2_inner(q1, best);
  // grid search over SO(2): no pure rotation may beat the returned one
  double best_grid = -1e300;
  for (int k = 0; k < 3600; ++k) {
    const double a = oracle::kTau * k / 3600.0;
    Srvf rot = q2;
    Eigen::Matrix2d m;
    m << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    rot.values = q2.values * m.transpose();
    best_grid = std::max(best_grid, l2_inner(q1, rot));
  }
  CHECK(got >= best_grid - 1e-9);
}

TEST_CASE("elastic_inner_product: unit self product is 1") {
  oracle::TestRng rng(67);
  const Srvf open_q = unit_srvf(random_open_curve(rng));
  CHECK(elastic_inner_product(open_q, open_q) == doctest::Approx(1.0).epsilon(1e-6));
  const Srvf closed_q = unit_srvf(random_closed_curve(rng));
  CHECK(elastic_inner_product(closed_q, closed_q) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("elastic_inner_product: invariant to rigid motion, scale, and warp") {
  oracle::TestRng rng(71);
  for (int rep = 0; rep < 3; ++rep) {
    Curve c = random_closed_curve(rng, 400);
    Curve moved = c;
    const Eigen::Matrix2d r = oracle::random_rotation2(rng);
    moved.points = (moved.points * r.transpose()) * oracle::runif(rng, 0.5, 2.0);
    moved.points.col(0).array() += oracle::runif(rng, -3.0, 3.0);
    moved.points.col(1).array() += oracle::runif(rng, -3.0, 3.0);
    const Srvf q1 = unit_srvf(c, 100), q2 = unit_srvf(moved, 100);
    CHECK(elastic_inner_product(q1, q2) == doctest::Approx(1.0).epsilon(1e-2));
  }
}

TEST_CASE("elastic_inner_product: rotation search aligns orthogonal constants") {
  Srvf ex, ey;
  ex.values = Eigen::MatrixXd::Zero(20, 2);
  ey.values = Eigen::MatrixXd::Zero(20, 2);
  ex.values.col(0).setConstant(1.0);
  ey.values.col(1).setConstant(1.0);
  CHECK(elastic_inner_product(ex, ey) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("elastic_inner_product: symmetric within tolerance and monotone history") {
  oracle::TestRng rng(73);
  const Srvf a = unit_srvf(random_closed_curve(rng), 0);
  const Srvf b = unit_srvf(random_closed_curve(rng), 0);
  AlignInfo info;
  const double ab = elastic_inner_product(a, b, {}, &info);
  const double ba = elastic_inner_product(b, a);
  // The warp search is one-sided (second argument only), so the two
  // directions discretize the supremum differently by a few 1e-3.
  CHECK(std::abs(ab - ba) < 5e-3);
  for (std::size_t i = 1; i < info.history.size(); ++i)
    CHECK(info.history[i] >= info.history[i - 1] - 1e-12);
  CHECK(info.value == doctest::Approx(ab));
}

TEST_CASE("elastic_inner_product: incompatible inputs rejected") {
  Srvf open_q, closed_q;
  open_q.values = Eigen::MatrixXd::Ones(10, 2);
  closed_q.values = Eigen::MatrixXd::Ones(10, 2);
  closed_q.closed = true;
  CHECK_THROWS(elastic_inner_product(open_q, closed_q));
}

TEST_CASE("gram_matrix: single curve gives its self inner product") {
  oracle::TestRng rng(79);
  const std::vector<Srvf> qs = {unit_srvf(random_closed_curve(rng))};
  const GramMatrix g = gram_matrix(qs, AlignOpts{});
  REQUIRE(g.size() == 1);
  CHECK(g.entries(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gram_matrix: euclidean dot products by hand") {
  PointSet ps;
  ps.points.resize(3, 2);
  ps.points << 1, 0, 0, 1, 1, 1;
  const GramMatrix g = gram_matrix(ps);
  Eigen::Matrix3d want;
  want << 1, 0, 1, 0, 1, 1, 1, 1, 2;
  CHECK((g.entries - want).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.mode == GramMode::euclidean);
}

TEST_CASE("gram_matrix: parallel and serial assemblies agree bit for bit") {
  std::vector<ShapeClassSpec> classes = {{"circle", 0.04}, {"rose4", 0.04}};
  ShapeSimOpts opts;
  opts.samples = 60;
  const CurveSet cs = simulate_shape_classes(classes, 3, 13, opts);
  const std::vector<Srvf> qs = prepare_srvfs(cs, PrepOpts{.resample_to = 60});
  const GramMatrix par = gram_matrix(qs, AlignOpts{});
  const GramMatrix ser = gram_matrix_serial(qs, AlignOpts{});
  CHECK((par.entries.array() == ser.entries.array()).all());
}

TEST_CASE("gram_matrix: simulated classes show block structure") {
  // circle vs 4-petal rose: between-class inner products sit strictly
  // below every within-class value
  std::vector<ShapeClassSpec> classes = {{"circle", 0.05}, {"rose4", 0.05}};
  ShapeSimOpts opts;
  opts.samples = 100;
  const CurveSet cs = simulate_shape_classes(classes, 4, 21, opts);
  const std::vector<Srvf> qs = prepare_srvfs(cs, PrepOpts{});
  const GramMatrix g = gram_matrix(qs, AlignOpts{});
  g.validate();
  double min_within = 2.0, max_between = -2.0;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      const bool same = cs.labels[i] == cs.labels[j];
      if (same)
        min_within = std::min(min_within, g.entries(i, j));
      else
        max_between = std::max(max_between, g.entries(i, j));
    }
  CHECK(max_between < min_within);
}

TEST_CASE("gram save and load round trip is bit-exact") {
  oracle::TestRng rng(83);
  std::vector<Srvf> qs;
  for (int i = 0; i < 4; ++i) qs.push_back(unit_srvf(random_closed_curve(rng), 0));
  const GramMatrix g = gram_matrix(qs, AlignOpts{});
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "shapeclust_test_gram";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string path = (dir / "gram.csv").string();
  AlignOpts opts;
  save_gram(g, path, &opts);
  const GramMatrix back = load_gram(path);
  CHECK((back.entries.array() == g.entries.array()).all());
  CHECK(back.mode == g.mode);
  CHECK(back.ids == g.ids);
  fs::remove_all(dir);
}

TEST_CASE("gram validation rejects asymmetry and elastic range violations") {
  GramMatrix g;
  g.mode = GramMode::elastic;
  g.entries = Eigen::Matrix2d::Identity();
  g.ids = {"a", "b"};
  g.validate();

  GramMatrix bad = g;
  bad.entries(0, 1) = 0.5;  // asymmetric
  CHECK_THROWS(bad.validate());

  bad = g;
  bad.entries(0, 1) = bad.entries(1, 0) = 1.5;  // outside [-1, 1]
  CHECK_THROWS(bad.validate());

  bad = g;
  bad.entries(0, 0) = 0.7;  // diagonal off unit
  CHECK_THROWS(bad.validate());
}
