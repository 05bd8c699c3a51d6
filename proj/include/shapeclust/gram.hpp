#pragma once

#include <string>
#include <vector>

#include "shapeclust/align.hpp"
#include "shapeclust/curve.hpp"
#include "shapeclust/srvf.hpp"

namespace shapeclust {

enum class GramMode { elastic, euclidean };

struct GramMatrix {
  Eigen::MatrixXd entries;  // n x n, symmetric
  GramMode mode = GramMode::elastic;
  std::vector<std::string> ids;

  int size() const { return static_cast<int>(entries.rows()); }
  /// Symmetry within 1e-9; elastic mode additionally requires unit diagonal
  /// within 1e-6 and |S_ij| <= 1 + 1e-6 (unit-length inputs).
  void validate() const;
};

struct PrepOpts {
  int resample_to = 100;
  double smooth_bandwidth = 0.0;  // 0 disables smoothing
  int smooth_passes = 1;
  bool unit_length = true;
};

/// Preprocessing pipeline feeding the elastic Gram matrix: arc-length
/// resampling, optional smoothing, SRVF, optional unit-length rescale.
std::vector<Srvf> prepare_srvfs(const CurveSet& curves, const PrepOpts& prep);

/// Elastic Gram matrix: S_ij = elastic_inner_product(q_i, q_j) for i < j,
/// mirrored; the diagonal is the plain L2 self inner product, which is the
/// exact value of the sup for a pair of identical SRVFs. Pair failures are
/// rethrown with (i,j) attached. Parallel over pairs.
GramMatrix gram_matrix(const std::vector<Srvf>& srvfs, const AlignOpts& opts,
                       const std::vector<std::string>& ids = {});

/// Single-threaded reference with identical output, kept for testing the
/// parallel assembly against.
GramMatrix gram_matrix_serial(const std::vector<Srvf>& srvfs, const AlignOpts& opts,
                              const std::vector<std::string>& ids = {});

/// Euclidean Gram matrix of raw dot products, optionally centering the
/// points first.
GramMatrix gram_matrix(const PointSet& points, bool center = false);

/// CSV of the full matrix plus `<path>.meta.json` holding ids/mode/opts.
/// Reload is bit-exact.
void save_gram(const GramMatrix& gram, const std::string& csv_path, const AlignOpts* opts = nullptr);
GramMatrix load_gram(const std::string& csv_path);

}  // namespace shapeclust
