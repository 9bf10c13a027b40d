#include "qsense/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qsense {

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& init,
                          const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                          const SimplexOptions& options) {
  const int dim = static_cast<int>(init.size());
  if (lower.size() != dim || upper.size() != dim)
    throw std::invalid_argument("simplex bounds must match the dimension");
  for (int d = 0; d < dim; ++d)
    if (lower(d) > upper(d)) throw std::invalid_argument("empty simplex box");

  int evals = 0;
  const auto eval = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd clamped = x.cwiseMax(lower).cwiseMin(upper);
    ++evals;
    return objective(clamped) + 10.0 * (x - clamped).squaredNorm();
  };

  // Degenerate (fixed) dimensions get no simplex extent.
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> fs;
  xs.push_back(init.cwiseMax(lower).cwiseMin(upper));
  fs.push_back(eval(xs[0]));
  for (int d = 0; d < dim; ++d) {
    Eigen::VectorXd x = xs[0];
    const double span = upper(d) - lower(d);
    if (span > 0.0) {
      double step = options.init_step * span;
      if (x(d) + step > upper(d)) step = -step;
      x(d) += step;
    }
    xs.push_back(x);
    fs.push_back(eval(x));
  }
  const int n = static_cast<int>(xs.size());

  std::vector<int> order(n);
  const auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });
  };

  while (evals < options.max_evals) {
    sort_simplex();
    const int best = order[0], worst = order[n - 1], second = order[n - 2];
    const double spread = fs[worst] - fs[best];
    if (spread < options.f_tol + options.f_tol_rel * std::abs(fs[best])) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < n; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= (n - 1);

    const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
    const double f_ref = eval(reflected);
    if (f_ref < fs[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
      const double f_exp = eval(expanded);
      if (f_exp < f_ref) {
        xs[worst] = expanded;
        fs[worst] = f_exp;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_ref;
      }
      continue;
    }
    if (f_ref < fs[second]) {
      xs[worst] = reflected;
      fs[worst] = f_ref;
      continue;
    }
    const bool outside = f_ref < fs[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid - 0.5 * (centroid - xs[worst]));
    const double f_con = eval(contracted);
    if (f_con < (outside ? f_ref : fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = f_con;
      continue;
    }
    // shrink toward the best vertex
    for (int i = 0; i < n; ++i) {
      if (i == order[0]) continue;
      xs[i] = xs[order[0]] + 0.5 * (xs[i] - xs[order[0]]);
      fs[i] = eval(xs[i]);
    }
  }

  sort_simplex();
  SimplexResult result;
  result.x = xs[order[0]].cwiseMax(lower).cwiseMin(upper);
  result.f = fs[order[0]];
  result.evals = evals;
  return result;
}

}  // namespace qsense
