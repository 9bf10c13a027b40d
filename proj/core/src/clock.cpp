#include "qsense/clock.hpp"

#include <cmath>
#include <stdexcept>

#include "qsense/errors.hpp"

namespace qsense {

namespace {

void require_clock(const ClockSpec& clock) {
  if (!(clock.alpha > 0.0 && clock.alpha <= 2.0))
    throw std::invalid_argument("clock noise exponent must lie in (0, 2]");
  if (!(clock.bandwidth > 0.0 && clock.ramsey_time > 0.0 &&
        clock.averaging_time > 0.0 && clock.reference_freq > 0.0))
    throw std::invalid_argument("clock parameters must be positive");
}

}  // namespace

double measurement_uncertainty(double posterior_width, double prior_width) {
  const double ratio = posterior_width / prior_width;
  if (!(ratio < 1.0))
    throw NoInformationError("posterior as wide as the prior: no clock gain");
  return posterior_width / std::sqrt(1.0 - ratio * ratio);
}

AllanResult allan(const CostReport& report, const ClockSpec& clock) {
  require_clock(clock);
  AllanResult out;
  out.delta_phi_m = measurement_uncertainty(report.posterior_width,
                                            report.posterior_width / report.ratio);
  out.sigma_tau = out.delta_phi_m / (clock.reference_freq * clock.ramsey_time) *
                  std::sqrt(clock.ramsey_time / clock.averaging_time);
  out.normalized_sigma = out.sigma_tau * clock.reference_freq *
                         std::sqrt(clock.averaging_time / clock.bandwidth);
  return out;
}

double prior_width_from_time(double bandwidth, double ramsey_time, double alpha) {
  if (!(bandwidth > 0.0 && ramsey_time > 0.0 && alpha > 0.0))
    throw std::invalid_argument("prior_width_from_time needs positive arguments");
  return std::pow(bandwidth * ramsey_time, 0.5 * alpha);
}

double ramsey_time_for_width(double prior_width, double bandwidth, double alpha) {
  if (!(prior_width > 0.0 && bandwidth > 0.0 && alpha > 0.0))
    throw std::invalid_argument("ramsey_time_for_width needs positive arguments");
  return std::pow(prior_width, 2.0 / alpha) / bandwidth;
}

WinelandResult wineland_xi(const DickeVector& state) {
  const int n = state.n_particles;
  const Eigen::Vector3d mean = mean_spin(state);
  const double length = mean.norm();
  if (length < 1e-9 * n)
    throw UndefinedOrientationError("mean spin vanishes, no transverse frame");

  // Orthonormal frame transverse to the mean-spin direction.
  const Eigen::Vector3d dir = mean / length;
  Eigen::Vector3d seed = std::abs(dir.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                 : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = dir.cross(seed).normalized();
  const Eigen::Vector3d e2 = dir.cross(e1);

  const Matrix jx = collective_operator(Axis::X, n).matrix;
  const Matrix jy = collective_operator(Axis::Y, n).matrix;
  const Matrix jz = collective_operator(Axis::Z, n).matrix;
  const Matrix j1 = e1.x() * jx + e1.y() * jy + e1.z() * jz;
  const Matrix j2 = e2.x() * jx + e2.y() * jy + e2.z() * jz;

  const auto expval = [&](const Matrix& op) {
    return (state.amplitudes.adjoint() * op * state.amplitudes).value().real();
  };
  // Transverse means vanish; the minimal variance is the smaller eigenvalue of
  // the symmetrized 2x2 covariance.
  const double v11 = expval(j1 * j1);
  const double v22 = expval(j2 * j2);
  const double v12 = 0.5 * expval(j1 * j2 + j2 * j1);
  const double half_trace = 0.5 * (v11 + v22);
  const double radius = std::sqrt(0.25 * (v11 - v22) * (v11 - v22) + v12 * v12);
  const double min_var = half_trace - radius;

  WinelandResult out;
  out.xi_squared = n * min_var / (length * length);
  out.xi = std::sqrt(out.xi_squared);
  out.db = 10.0 * std::log10(out.xi_squared);
  return out;
}

WinelandResult wineland_xi(const CircuitParams& params) {
  return wineland_xi(EncodedCircuit(params).input_state());
}

}  // namespace qsense
