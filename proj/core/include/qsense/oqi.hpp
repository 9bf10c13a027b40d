#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qsense/spin.hpp"

namespace qsense {

/// Result of minimizing the Bayesian cost over all input states, collective
/// measurements and estimators on the Dicke manifold.
struct OqiSolution {
  int n_particles = 0;
  double prior_width = 0.0;
  double bmse = 0.0;
  double ratio = 0.0;  // sqrt(bmse) / prior width
  double db = 0.0;
  DickeVector input_state;
  Eigen::VectorXd seed_spectrum;  // eigenvalues of the estimator operator
  int iterations = 0;
  double residual = 0.0;  // last cost decrease
  bool converged = false;
};

struct OqiOptions {
  double tol = 1e-12;      // absolute cost-decrease floor
  double tol_rel = 1e-6;   // relative floor; the solver stops at whichever
                           // of the two is reached first (decrease < max of
                           // tol, tol_rel * bmse)
  int max_iter = 500;
  int restarts = 3;        // random restarts tried when a solve stalls
  unsigned restart_seed = 977;
};

/// Raised when the see-saw does not converge; carries the best iterate.
class OqiConvergenceError : public std::runtime_error {
public:
  OqiConvergenceError(const std::string& what, OqiSolution best_so_far)
      : std::runtime_error(what), best(std::move(best_so_far)) {}
  OqiSolution best;
};

/// Alternating minimization: for a fixed input state the optimal estimator
/// operator solves L rho_bar + rho_bar L = 2 rho_bar', and for a fixed
/// operator the optimal input is the top eigenvector of the prior-averaged
/// gain. Gaussian phase integrals are taken in closed form, so the bound has
/// no quadrature error. Cost decreases monotonically.
OqiSolution oqi_bound(int n_particles, double prior_width,
                      const OqiOptions& options = {});

/// Warm-started sweep over a prior-width grid.
std::vector<OqiSolution> oqi_curve(int n_particles, const Eigen::VectorXd& widths,
                                   const OqiOptions& options = {});

/// Minimum of 10 log10(ratio) over prior widths in [lo, hi]:
/// grid scan plus golden-section refinement, all warm-started.
struct OqiMinimum {
  double prior_width = 0.0;
  double db = 0.0;
  OqiSolution solution;
};
OqiMinimum oqi_minimum(int n_particles, double lo, double hi,
                       int scan_points = 17, const OqiOptions& options = {});

}  // namespace qsense
