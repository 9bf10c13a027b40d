#include "qsense/theory_opt.hpp"
#include <limits>

#include <cmath>
#include <random>

#include "qsense/errors.hpp"
#include "qsense/simplex.hpp"

namespace qsense {

namespace {

// Costs cannot be negative, so this marks infeasible evaluations (a slope can
// degenerate when a candidate circuit carries no signal).
double safe_cost(int n, int n_en, int n_de, const Eigen::VectorXd& v,
                 const Prior& prior, EstimatorKind kind, const QuadratureSpec& spec) {
  try {
    return ideal_cost(n, n_en, n_de, v, prior, kind, spec);
  } catch (const DegenerateDistributionError&) {
    return prior.width * prior.width;  // as uninformative as no measurement
  }
}

struct Space {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<ParamKind> kinds;
};

Space relaxed_space(int n_en, int n_de, const Constraints& constraints) {
  Space space;
  space.kinds = circuit_param_kinds(n_en, n_de);
  const int dim = static_cast<int>(space.kinds.size());
  space.lower.resize(dim);
  space.upper.resize(dim);
  for (int d = 0; d < dim; ++d) {
    if (space.kinds[d] == ParamKind::twist) {
      space.lower(d) = 0.0;  // the chi_min gap is applied after the search
      space.upper(d) = constraints.chi_max;
    } else {
      space.lower(d) = -M_PI;
      space.upper(d) = M_PI;
    }
  }
  return space;
}

}  // namespace

double ideal_cost(int n_particles, int n_en, int n_de, const Eigen::VectorXd& v,
                  const Prior& prior, EstimatorKind kind, const QuadratureSpec& spec) {
  const CircuitParams params = circuit_from_vector(n_particles, n_en, n_de, v);
  return circuit_cost(EncodedCircuit(params), prior, kind, spec).bmse;
}

TheoryOptResult optimize_circuit(int n_particles, int n_en, int n_de,
                                 const Prior& prior, const Constraints& constraints,
                                 const TheoryOptOptions& options) {
  const Space space = relaxed_space(n_en, n_de, constraints);
  const int dim = static_cast<int>(space.kinds.size());
  Constraints active = constraints;
  active.kinds = space.kinds;

  const auto objective = [&](const Eigen::VectorXd& v) {
    return safe_cost(n_particles, n_en, n_de, v, prior, options.estimator,
                     options.quadrature);
  };

  SimplexOptions nm;
  nm.max_evals = options.max_evals;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::VectorXd best_x;
  double best_f = std::numeric_limits<double>::infinity();
  const int starts = std::max(options.starts, 1);
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd x0(dim);
    for (int d = 0; d < dim; ++d) {
      const double u = uni(rng);
      if (space.kinds[d] == ParamKind::twist) {
        // bias the initial twists small: the useful shearing angles shrink
        // with particle number
        x0(d) = space.upper(d) * u * u;
      } else {
        x0(d) = space.lower(d) + u * (space.upper(d) - space.lower(d));
      }
    }
    const SimplexResult run = nelder_mead(objective, x0, space.lower, space.upper, nm);
    if (run.f < best_f) {
      best_f = run.f;
      best_x = run.x;
    }
  }
  if (dim == 0) {
    best_x.resize(0);
    best_f = objective(best_x);
  }

  Eigen::VectorXd final_x = best_x;
  if (options.apply_constraints && dim > 0) {
    const Eigen::VectorXd projected = project_constraints(best_x, active);
    // polish inside the feasible region with dropped twists pinned at zero
    Eigen::VectorXd lo = space.lower, hi = space.upper;
    for (int d = 0; d < dim; ++d) {
      if (space.kinds[d] != ParamKind::twist) continue;
      if (projected(d) == 0.0) {
        lo(d) = 0.0;
        hi(d) = 0.0;
      } else {
        lo(d) = constraints.chi_min;
      }
    }
    const SimplexResult polished = nelder_mead(objective, projected, lo, hi, nm);
    final_x = project_constraints(polished.x, active);
    best_f = objective(final_x);
  }

  TheoryOptResult result;
  result.params = circuit_from_vector(n_particles, n_en, n_de, final_x);
  result.cost = best_f;
  result.report = circuit_cost(EncodedCircuit(result.params), prior, options.estimator,
                               options.quadrature);
  return result;
}

std::vector<TheoryOptResult> optimize_circuit_curve(
    int n_particles, int n_en, int n_de, const Eigen::VectorXd& widths,
    const Constraints& constraints, const TheoryOptOptions& options) {
  std::vector<TheoryOptResult> curve;
  curve.reserve(widths.size());
  TheoryOptOptions local = options;
  for (int i = 0; i < widths.size(); ++i) {
    const Prior prior{widths(i), 0.0};
    local.seed = options.seed + 7919u * static_cast<unsigned>(i);
    TheoryOptResult solved = optimize_circuit(n_particles, n_en, n_de, prior,
                                              constraints, local);
    if (!curve.empty() && 3 * (n_en + n_de) > 0) {
      // continuation: the neighbor's optimum polished at this width
      const Eigen::VectorXd warm = circuit_to_vector(curve.back().params);
      TheoryOptOptions warm_opts = local;
      warm_opts.starts = 1;
      Constraints active = constraints;
      active.kinds = circuit_param_kinds(n_en, n_de);
      const Space space = relaxed_space(n_en, n_de, constraints);
      SimplexOptions nm;
      nm.max_evals = options.max_evals;
      const auto objective = [&](const Eigen::VectorXd& v) {
        return safe_cost(n_particles, n_en, n_de, v, prior, options.estimator,
                         options.quadrature);
      };
      const SimplexResult polish =
          nelder_mead(objective, warm, space.lower, space.upper, nm);
      const Eigen::VectorXd projected = project_constraints(polish.x, active);
      const double cost = objective(projected);
      if (cost < solved.cost) {
        solved.params = circuit_from_vector(n_particles, n_en, n_de, projected);
        solved.cost = cost;
        solved.report = circuit_cost(EncodedCircuit(solved.params), prior,
                                     options.estimator, options.quadrature);
      }
    }
    curve.push_back(std::move(solved));
  }
  return curve;
}

}  // namespace qsense
