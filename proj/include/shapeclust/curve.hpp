#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace shapeclust {

/// Discretized curve: T samples of an absolutely continuous map into R^p,
/// one sample per row. Closed curves carry the seam point twice (first and
/// last rows coincide).
struct Curve {
  std::string id;
  Eigen::MatrixXd points;  // T x p
  bool closed = false;

  int samples() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  /// Throws std::invalid_argument on T < 3, p < 1, non-finite coordinates, or
  /// a closed curve whose closure gap exceeds 1e-9.
  void validate() const;
};

struct CurveSet {
  std::vector<Curve> curves;
  std::vector<int> labels;  // empty when no ground truth is attached

  int size() const { return static_cast<int>(curves.size()); }
  int dim() const { return curves.empty() ? 0 : curves.front().dim(); }
  bool has_labels() const { return !labels.empty(); }
  void validate() const;
};

/// Euclidean observations, one point per row.
struct PointSet {
  Eigen::MatrixXd points;  // n x p
  std::vector<int> labels;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  bool has_labels() const { return !labels.empty(); }
  void validate() const;
};

/// Resamples to n_points parameters uniformly spaced in cumulative arc
/// length, interpolating linearly between input samples. Endpoints are
/// copied verbatim. Throws on a curve of zero total length.
Curve resample(const Curve& curve, int n_points);

/// Per-coordinate convolution with a discrete Gaussian kernel (truncated at
/// four bandwidths, renormalized). Open curves replicate their endpoints
/// past the boundary; closed curves wrap around the seam.
Curve smooth(const Curve& curve, double bandwidth, int passes);

/// Prepends and appends k points obtained by linear extrapolation from the
/// two samples at each end. Open curves only.
Curve extend_endpoints(const Curve& curve, int k);

/// Inverse of extend_endpoints: drops k samples from both ends.
Curve trim_endpoints(const Curve& curve, int k);

/// Canonicalizes the seam of a closed curve: a tiny first/last gap is
/// averaged away, a missing duplicate seam sample is appended.
Curve enforce_closure(const Curve& curve);

}  // namespace shapeclust
