#include "qsense/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsense/errors.hpp"
#include "qsense/quadrature.hpp"

namespace qsense {

namespace {

void require_prior(const Prior& prior) {
  if (!(prior.width > 0.0) || !std::isfinite(prior.width))
    throw std::invalid_argument("prior width must be positive");
}

// Sufficient statistics of one table row.
struct RowMoments {
  double mean_m;
  double mean_m2;
};

RowMoments row_moments(const OutcomeTable& table, int row) {
  RowMoments mom{0.0, 0.0};
  for (int k = 0; k < table.dim(); ++k) {
    const double m = table.m_value(k);
    const double p = table.probs(row, k);
    mom.mean_m += m * p;
    mom.mean_m2 += m * m * p;
  }
  return mom;
}

}  // namespace

double Prior::pdf(double phi) const {
  const double z = (phi - mean) / width;
  return std::exp(-0.5 * z * z) / (width * std::sqrt(2.0 * M_PI));
}

std::string QuadratureSpec::describe() const {
  const char* name = scheme == Scheme::gauss_hermite ? "gauss-hermite" : "simpson";
  return std::string(name) + "(" + std::to_string(nodes) + ")";
}

WeightedPhases prior_quadrature(const Prior& prior, const QuadratureSpec& spec) {
  require_prior(prior);
  WeightedPhases grid;
  if (spec.scheme == QuadratureSpec::Scheme::gauss_hermite) {
    const QuadratureRule rule = gauss_hermite(spec.nodes);
    const double scale = std::sqrt(2.0) * prior.width;
    grid.phases = (rule.nodes * scale).array() + prior.mean;
    grid.weights = rule.weights / std::sqrt(M_PI);
  } else {
    int n = spec.nodes;
    if (n % 2 == 0) ++n;  // composite Simpson needs an odd count
    const double half = spec.span * prior.width;
    grid.phases = linspace(prior.mean - half, prior.mean + half, n);
    grid.weights.resize(n);
    const double step = grid.phases(1) - grid.phases(0);
    for (int i = 0; i < n; ++i) {
      double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      grid.weights(i) = w * step / 3.0 * prior.pdf(grid.phases(i));
    }
  }
  return grid;
}

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::linear: return "linear";
    case EstimatorKind::arcsine: return "arcsine";
    case EstimatorKind::mbmse: return "mbmse";
  }
  return "?";
}

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "linear") return EstimatorKind::linear;
  if (name == "arcsine") return EstimatorKind::arcsine;
  if (name == "mbmse") return EstimatorKind::mbmse;
  throw std::invalid_argument("unknown estimator: " + name);
}

double Estimator::estimate(double m, int n_particles) const {
  switch (kind) {
    case EstimatorKind::linear:
      return slope * m;
    case EstimatorKind::arcsine: {
      const double arg = std::clamp(2.0 * m / n_particles, -1.0, 1.0);
      return std::asin(arg);
    }
    case EstimatorKind::mbmse: {
      const int index = static_cast<int>(std::lround(m + 0.5 * n_particles));
      if (index < 0 || index >= posterior_table.size())
        throw std::invalid_argument("outcome outside the estimator table");
      return posterior_table(index);
    }
  }
  throw std::logic_error("unreachable estimator kind");
}

Estimator linear_estimator(double slope) {
  if (!std::isfinite(slope)) throw std::invalid_argument("slope must be finite");
  Estimator est;
  est.kind = EstimatorKind::linear;
  est.slope = slope;
  return est;
}

Estimator arcsine_estimator() {
  Estimator est;
  est.kind = EstimatorKind::arcsine;
  return est;
}

Estimator mbmse_estimator(const OutcomeTable& table, const WeightedPhases& grid) {
  Estimator est;
  est.kind = EstimatorKind::mbmse;
  est.posterior_table = Eigen::VectorXd::Zero(table.dim());
  for (int k = 0; k < table.dim(); ++k) {
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < grid.phases.size(); ++i) {
      const double w = grid.weights(i) * table.probs(i, k);
      num += w * grid.phases(i);
      den += w;
    }
    // An outcome with no prior support estimates the prior mean.
    est.posterior_table(k) = den > 0.0 ? num / den : 0.0;
  }
  return est;
}

Estimator mbmse_estimator(const EncodedCircuit& circuit, const Prior& prior,
                          const QuadratureSpec& spec) {
  const WeightedPhases grid = prior_quadrature(prior, spec);
  return mbmse_estimator(outcome_table(circuit, grid.phases), grid);
}

double optimal_linear_slope(const OutcomeTable& table, const WeightedPhases& grid) {
  if (table.phases.size() != grid.phases.size())
    throw std::invalid_argument("table rows must align with quadrature nodes");
  double phi_m = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < grid.phases.size(); ++i) {
    const RowMoments mom = row_moments(table, i);
    phi_m += grid.weights(i) * grid.phases(i) * mom.mean_m;
    m2 += grid.weights(i) * mom.mean_m2;
  }
  const double scale = 0.25 * table.n_particles * table.n_particles + 1.0;
  if (!(m2 > scale * 1e-15))
    throw DegenerateDistributionError("outcome distribution carries no m^2 weight");
  return phi_m / m2;
}

double optimal_linear_slope(const EncodedCircuit& circuit, const Prior& prior,
                            const QuadratureSpec& spec) {
  const WeightedPhases grid = prior_quadrature(prior, spec);
  return optimal_linear_slope(outcome_table(circuit, grid.phases), grid);
}

double mse_at(const OutcomeTable& table, int row, const Estimator& est) {
  const double phi = table.phases(row);
  double acc = 0.0;
  for (int k = 0; k < table.dim(); ++k) {
    const double err = phi - est.estimate(table.m_value(k), table.n_particles);
    acc += err * err * table.probs(row, k);
  }
  return acc;
}

std::vector<std::pair<double, double>> mse_curve(const OutcomeTable& table,
                                                 const Estimator& est) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(table.phases.size());
  for (int i = 0; i < table.phases.size(); ++i)
    curve.emplace_back(table.phases(i), mse_at(table, i, est));
  return curve;
}

double db_of_ratio(double ratio) { return 10.0 * std::log10(ratio); }

CostReport bmse(const EncodedCircuit& circuit, const Estimator& est,
                const Prior& prior, const QuadratureSpec& spec) {
  require_prior(prior);
  const WeightedPhases grid = prior_quadrature(prior, spec);
  const OutcomeTable table = outcome_table(circuit, grid.phases);
  double cost = 0.0;
  for (int i = 0; i < grid.phases.size(); ++i)
    cost += grid.weights(i) * mse_at(table, i, est);

  CostReport report;
  report.bmse = cost;
  report.posterior_width = std::sqrt(cost);
  report.ratio = report.posterior_width / prior.width;
  report.db = db_of_ratio(report.ratio);
  report.slope = est.kind == EstimatorKind::linear ? est.slope : 0.0;
  report.offset = est.offset;
  report.quadrature = spec.describe();
  return report;
}

CostReport circuit_cost(const EncodedCircuit& circuit, const Prior& prior,
                        EstimatorKind kind, const QuadratureSpec& spec) {
  Estimator est;
  switch (kind) {
    case EstimatorKind::linear:
      est = linear_estimator(optimal_linear_slope(circuit, prior, spec));
      break;
    case EstimatorKind::arcsine:
      est = arcsine_estimator();
      break;
    case EstimatorKind::mbmse:
      est = mbmse_estimator(circuit, prior, spec);
      break;
  }
  return bmse(circuit, est, prior, spec);
}

CostReport fit_experimental_cost(const EmpiricalScan& scan, const Prior& prior) {
  require_prior(prior);
  const int n = static_cast<int>(scan.phases.size());
  if (n < 3) throw InsufficientDataError("experimental fit needs >= 3 phase points");
  if (scan.counts.rows() != n || scan.counts.cols() != scan.n_particles + 1)
    throw std::invalid_argument("histogram shape does not match phases/particles");

  Eigen::VectorXd s1(n), s2(n), shots(n);
  for (int i = 0; i < n; ++i) {
    const double total = scan.counts.row(i).sum();
    if (!(total > 0.0)) throw std::invalid_argument("empty histogram row");
    shots(i) = total;
    double m1 = 0.0, m2 = 0.0;
    for (int k = 0; k <= scan.n_particles; ++k) {
      const double m = k - 0.5 * scan.n_particles;
      const double p = scan.counts(i, k) / total;
      m1 += m * p;
      m2 += m * m * p;
    }
    s1(i) = m1;
    s2(i) = m2;
  }

  // The Simpson weights depend only on node spacing, so they survive the
  // frame shift phi = phi_exp - offset.
  const Eigen::VectorXd sw = simpson_weights(scan.phases);

  double best_slope = 0.0;
  const auto cost_at = [&](double offset) {
    double a_num = 0.0, a_den = 0.0, c0 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double phi = scan.phases(i) - offset;
      const double w = sw(i) * prior.pdf(phi);
      a_num += w * phi * s1(i);
      a_den += w * s2(i);
      c0 += w * phi * phi;
    }
    if (!(a_den > 1e-15))
      throw DegenerateDistributionError("scan carries no m^2 weight");
    best_slope = a_num / a_den;
    return c0 - a_num * a_num / a_den;
  };

  // Coarse bracket, then golden-section refinement of the offset.
  const double half_range = 0.3;
  const int coarse = 41;
  double best_offset = 0.0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < coarse; ++i) {
    const double off = -half_range + 2.0 * half_range * i / (coarse - 1);
    const double c = cost_at(off);
    if (c < best_cost) {
      best_cost = c;
      best_offset = off;
    }
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_offset - 2.0 * half_range / (coarse - 1);
  double hi = best_offset + 2.0 * half_range / (coarse - 1);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = cost_at(x1);
  double f2 = cost_at(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = cost_at(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = cost_at(x2);
    }
  }
  best_offset = 0.5 * (lo + hi);
  best_cost = cost_at(best_offset);

  CostReport report;
  report.bmse = best_cost;
  report.posterior_width = std::sqrt(std::max(best_cost, 0.0));
  report.ratio = report.posterior_width / prior.width;
  report.db = db_of_ratio(report.ratio);
  report.slope = best_slope;
  report.offset = best_offset;
  report.quadrature = "simpson-fit(" + std::to_string(n) + ")";
  return report;
}

}  // namespace qsense
