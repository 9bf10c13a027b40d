#pragma once

#include "qsense/circuit.hpp"
#include "qsense/metrology.hpp"

namespace qsense {

/// Deadtime-free clock parameters. The laser noise spectral density is
/// S(f) ~ f^(1-alpha) with bandwidth `bandwidth` (rad/s).
struct ClockSpec {
  double alpha = 1.0;
  double bandwidth = 2.0 * M_PI * 6.0;
  double ramsey_time = 1e-2;
  double averaging_time = 1.0;
  double reference_freq = 2.0 * M_PI * 4.1e14;
};

struct AllanResult {
  double delta_phi_m = 0.0;    // effective per-cycle phase uncertainty
  double sigma_tau = 0.0;      // Allan deviation at the averaging time
  double normalized_sigma = 0.0;  // sigma * omega_A * sqrt(tau / bandwidth)
};

/// Converts a cost report into clock stability figures:
///   dphi_M = dphi / sqrt(1 - (dphi/prior)^2),
///   sigma(tau) = (1/omega_A) (dphi_M / T_R) sqrt(T_R / tau).
/// Throws NoInformationError when the ratio reaches 1.
AllanResult allan(const CostReport& report, const ClockSpec& clock);

/// Per-cycle uncertainty alone, from the posterior/prior pair.
double measurement_uncertainty(double posterior_width, double prior_width);

/// Prior width accumulated over a Ramsey time: (bandwidth * T_R)^(alpha/2).
double prior_width_from_time(double bandwidth, double ramsey_time, double alpha);

/// Inverse of prior_width_from_time at fixed bandwidth and exponent.
double ramsey_time_for_width(double prior_width, double bandwidth, double alpha);

struct WinelandResult {
  double xi = 0.0;
  double xi_squared = 0.0;
  double db = 0.0;  // 10 log10(xi^2)
};

/// Wineland squeezing parameter of the interferometer input state
/// (after the entangling block): xi^2 = N Var_min(J_perp) / |<J>|^2.
/// Throws UndefinedOrientationError when the mean spin vanishes.
WinelandResult wineland_xi(const CircuitParams& params);
WinelandResult wineland_xi(const DickeVector& state);

}  // namespace qsense
