#pragma once

#include <Eigen/Dense>
#include <functional>

namespace qsense {

/// Plain Nelder-Mead on a clamped box. Out-of-box proposals are evaluated at
/// the clamped point with a quadratic pull-back penalty.
struct SimplexOptions {
  int max_evals = 4000;
  double f_tol = 1e-12;      // absolute spread tolerance of the simplex
  double f_tol_rel = 1e-10;  // relative spread tolerance
  double init_step = 0.15;   // initial simplex size as a fraction of the box
};

struct SimplexResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evals = 0;
};

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& init,
                          const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                          const SimplexOptions& options = {});

}  // namespace qsense
