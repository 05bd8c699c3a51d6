// Times the parallel Gram assembly against its single-threaded reference on
// simulated closed-curve sets and verifies that both produce identical
// matrices. Exits nonzero on any mismatch so the benchmark doubles as a
// smoke check.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "shapeclust/gram.hpp"
#include "shapeclust/simulate.hpp"

using namespace shapeclust;

namespace {

template <typename Fn>
double best_of(int reps, Fn fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
  }
  return best;
}

}  // namespace

int main() {
  const std::vector<ShapeClassSpec> classes = {
      {"circle", 0.05}, {"ellipse", 0.05}, {"rose4", 0.05}};
  ShapeSimOpts sim;
  sim.samples = 80;

  PrepOpts prep;
  prep.resample_to = 64;

  AlignOpts align;
  align.n_seeds = 8;

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("gram assembly, %d thread%s\n", threads, threads == 1 ? "" : "s");
  std::printf("%6s %7s %12s %12s %9s %7s\n", "n", "pairs", "serial ms", "parallel ms",
              "speedup", "match");

  bool all_match = true;
  for (int n : {12, 24, 36}) {
    const CurveSet curves = simulate_shape_classes(classes, n / 3, 17, sim);
    const std::vector<Srvf> srvfs = prepare_srvfs(curves, prep);

    GramMatrix serial, parallel;
    const double serial_ms = best_of(3, [&] { serial = gram_matrix_serial(srvfs, align); });
    const double parallel_ms = best_of(3, [&] { parallel = gram_matrix(srvfs, align); });

    const bool match = (serial.entries - parallel.entries).cwiseAbs().maxCoeff() == 0.0;
    all_match = all_match && match;
    std::printf("%6d %7d %12.1f %12.1f %8.2fx %7s\n", n, n * (n - 1) / 2, serial_ms,
                parallel_ms, serial_ms / parallel_ms, match ? "yes" : "NO");
  }
  return all_match ? 0 : 1;
}
