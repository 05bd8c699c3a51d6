#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shapeclust/curve.hpp"

namespace shapeclust {

struct MixtureSpec {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;

  void validate() const;  // weights sum to 1, covariances SPD
};

/// n i.i.d. draws from the Gaussian mixture, truth labels set to the
/// component index. Pure function of (spec, n, seed).
PointSet simulate_gaussian_mixture(const MixtureSpec& spec, int n, std::uint64_t seed);

/// A well-separated default mixture in R^2 used by the CLI when no custom
/// spec is given: components on a circle of radius `separation`, unit
/// covariances.
MixtureSpec default_mixture(int components, double separation);

struct ShapeClassSpec {
  std::string tmpl;   // circle | ellipse | rose<N> | rectangle | bumpy
  double noise = 0.0; // amplitude of the smooth radial perturbation
};

struct ShapeSimOpts {
  int samples = 100;
  bool nuisance = true;  // random rotation/translation/scale/reparameterization
};

/// per_class closed curves per template with truth labels. With nuisance
/// transforms on, every instance gets a random rotation, translation, scale,
/// seam shift, and smooth reparameterization so invariances are exercised.
CurveSet simulate_shape_classes(const std::vector<ShapeClassSpec>& classes, int per_class,
                                std::uint64_t seed, const ShapeSimOpts& opts = {});

}  // namespace shapeclust
