#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qsense {

/// Nodes and weights of a quadrature rule.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Hermite rule for integrals of f(x) exp(-x^2) over the real
/// line (Golub-Welsch on the Jacobi matrix). Weights sum to sqrt(pi).
QuadratureRule gauss_hermite(int n);

/// Composite Simpson integral of uniformly sampled values; n must be odd.
double simpson_uniform(const Eigen::VectorXd& values, double step);

/// Composite Simpson weights for an arbitrary sorted grid (quadratic through
/// point triples, trapezoid closing an odd interval count). Needs >= 3 points.
Eigen::VectorXd simpson_weights(const Eigen::VectorXd& grid);

/// Uniformly spaced grid of n points covering [lo, hi].
Eigen::VectorXd linspace(double lo, double hi, int n);

}  // namespace qsense
