#include <cmath>
#include <random>
#include <stdexcept>

#include "qsense/varopt.hpp"

namespace qsense {

std::vector<ParamKind> circuit_param_kinds(int n_en, int n_de) {
  std::vector<ParamKind> kinds;
  kinds.reserve(3 * (n_en + n_de));
  for (int layer = 0; layer < n_en + n_de; ++layer) {
    kinds.push_back(ParamKind::twist);
    kinds.push_back(ParamKind::twist);
    kinds.push_back(ParamKind::rotation);
  }
  return kinds;
}

Eigen::VectorXd circuit_kernel_periods(int n_en, int n_de, int n_particles) {
  const double twist_period = n_particles % 2 == 0 ? 2.0 * M_PI : 8.0 * M_PI;
  Eigen::VectorXd periods(3 * (n_en + n_de));
  for (int layer = 0; layer < n_en + n_de; ++layer) {
    periods(3 * layer) = twist_period;
    periods(3 * layer + 1) = twist_period;
    periods(3 * layer + 2) = 2.0 * M_PI;
  }
  return periods;
}

Eigen::VectorXd project_constraints(const Eigen::VectorXd& params,
                                    const Constraints& constraints) {
  if (!(constraints.chi_min > 0.0 && constraints.chi_min < constraints.chi_max))
    throw std::invalid_argument("constraints need 0 < chi_min < chi_max");
  Eigen::VectorXd out = params;
  for (int d = 0; d < params.size(); ++d) {
    switch (constraints.kind(d)) {
      case ParamKind::twist: {
        double chi = params(d);
        const double feasible_min = constraints.chi_min - constraints.boundary_tol;
        if (chi > constraints.chi_max) {
          chi = constraints.chi_max;
        } else if (constraints.drop_small_twists) {
          if (chi < feasible_min) chi = 0.0;
        } else if (chi < 0.5 * constraints.chi_min) {
          chi = 0.0;
        } else if (chi < feasible_min) {
          chi = constraints.chi_min;
        }
        out(d) = chi;
        break;
      }
      case ParamKind::rotation:
        if (std::abs(params(d)) < constraints.rotation_skip) out(d) = 0.0;
        break;
      case ParamKind::free_param:
        break;
    }
  }
  return out;
}

SearchBox theory_search_box(const Eigen::VectorXd& theory_params,
                            const Constraints& constraints, unsigned seed,
                            double scale_lo, double scale_hi, double displacement) {
  const int dim = static_cast<int>(theory_params.size());
  SearchBox box;
  box.provenance = SearchBox::Provenance::theory_scaled;
  box.lower.resize(dim);
  box.upper.resize(dim);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int d = 0; d < dim; ++d) {
    const double v = theory_params(d);
    if (v == 0.0) {  // dropped resource: keep the dimension pinned
      box.lower(d) = 0.0;
      box.upper(d) = 0.0;
      continue;
    }
    double lo = std::min(scale_lo * v, scale_hi * v);
    double hi = std::max(scale_lo * v, scale_hi * v);
    const double shift = uni(rng) * displacement * (hi - lo);
    lo += shift;
    hi += shift;
    if (constraints.kind(d) == ParamKind::twist) {
      lo = std::max(lo, constraints.chi_min);
      hi = std::min(hi, constraints.chi_max);
      if (lo > hi) lo = hi;
    }
    box.lower(d) = lo;
    box.upper(d) = hi;
  }
  return box;
}

}  // namespace qsense
