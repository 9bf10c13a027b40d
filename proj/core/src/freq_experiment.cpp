#include <cmath>
#include <stdexcept>

#include "qsense/errors.hpp"
#include "qsense/quadrature.hpp"
#include "qsense/sampling.hpp"
#include "qsense/virtual_lab.hpp"

namespace qsense {

namespace {

// Inversion slope for estimating a near-zero phase: 1 / d<m>/dphi at 0.
double local_slope(const EncodedCircuit& circuit) {
  const double h = 1e-5;
  const auto mean_m = [&](double phi) {
    const Eigen::VectorXd p = circuit.probabilities(phi);
    double acc = 0.0;
    for (int k = 0; k < p.size(); ++k)
      acc += (k - 0.5 * circuit.n_particles()) * p(k);
    return acc;
  };
  const double derivative = (mean_m(h) - mean_m(-h)) / (2.0 * h);
  if (std::abs(derivative) < 1e-12)
    throw DegenerateDistributionError("no phase response at zero phase");
  return 1.0 / derivative;
}

double sequence_slope(const EncodedCircuit& circuit, double prior_width,
                      FreqExperimentConfig::SlopePolicy policy) {
  if (policy == FreqExperimentConfig::SlopePolicy::local) return local_slope(circuit);
  const int nodes = std::min(400, 64 + static_cast<int>(40.0 * prior_width *
                                                        circuit.n_particles()));
  return optimal_linear_slope(circuit, Prior{prior_width, 0.0},
                              QuadratureSpec::hermite(nodes));
}

double flicker_width(const NoiseModel& noise, double time) {
  if (noise.flicker_bandwidth <= 0.0) return 0.0;
  return std::pow(noise.flicker_bandwidth * time, 0.5 * noise.flicker_exponent);
}

double variance_of_m(const Eigen::VectorXd& probs, int n) {
  double m1 = 0.0, m2 = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double m = k - 0.5 * n;
    m1 += m * probs(k);
    m2 += m * m * probs(k);
  }
  return m2 - m1 * m1;
}

}  // namespace

double frequency_error_theory(const CircuitParams& params, double slope,
                              double ramsey_time, double detuning_spread,
                              double truncation, double drift_variance) {
  const EncodedCircuit circuit(params);
  const int n = params.n_particles;
  const double cut = truncation * detuning_spread;

  // Truncated-normal expectation of the single-shot squared error.
  const int points = 801;
  const Eigen::VectorXd grid = linspace(-cut, cut, points);
  const double step = grid(1) - grid(0);
  Eigen::VectorXd integrand(points);
  double norm_acc = 0.0;
  Eigen::VectorXd pdf(points);
  for (int i = 0; i < points; ++i) {
    const double w = grid(i);
    pdf(i) = std::exp(-0.5 * w * w / (detuning_spread * detuning_spread));
  }
  norm_acc = simpson_uniform(pdf, step);
  for (int i = 0; i < points; ++i) {
    const double w = grid(i);
    const Eigen::VectorXd probs = circuit.probabilities(w * ramsey_time);
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double est = slope * (k - 0.5 * n) / ramsey_time;
      acc += (est - w) * (est - w) * probs(k);
    }
    integrand(i) = acc * pdf(i);
  }
  return std::sqrt(simpson_uniform(integrand, step) / norm_acc + drift_variance);
}

FreqExperimentResult run_frequency_experiment(const FreqExperimentConfig& config,
                                              const NoiseModel& noise) {
  if (config.ramsey_times.size() == 0)
    throw std::invalid_argument("frequency experiment needs Ramsey times");
  if (config.samples_per_time < 2)
    throw std::invalid_argument("frequency experiment needs >= 2 samples per time");
  if (!(config.truncation >= 1.0))
    throw std::invalid_argument("truncation must be at least one spread");

  // The phase gate is realized inside the basis-changed sequence; outcome
  // statistics are identical either way, so it runs the device form.
  CircuitParams css = config.css;
  CircuitParams opt = config.optimized;
  css.form = SequenceForm::experimental;
  opt.form = SequenceForm::experimental;
  const EncodedCircuit circuit_css(css);
  const EncodedCircuit circuit_opt(opt);
  const int n = css.n_particles;

  CircuitParams ref = make_circuit(n, 0, 0, SequenceForm::experimental);
  const EncodedCircuit circuit_ref(ref);
  const double slope_ref = local_slope(circuit_ref);

  FreqExperimentResult result;
  for (int ti = 0; ti < config.ramsey_times.size(); ++ti) {
    const double time = config.ramsey_times(ti);
    if (!(time > 0.0)) throw std::invalid_argument("Ramsey times must be positive");
    const double width = config.detuning_spread * time;
    const double slope_css = sequence_slope(circuit_css, width, config.slope_policy);
    const double slope_opt = sequence_slope(circuit_opt, width, config.slope_policy);
    const double flicker_meas = flicker_width(noise, time);
    const double flicker_ref = flicker_width(noise, config.drift_time);

    std::vector<double> err_css, err_opt;
    err_css.reserve(config.samples_per_time);
    err_opt.reserve(config.samples_per_time);
    for (int trial = 0; trial < config.samples_per_time; ++trial) {
      std::mt19937_64 rng(sampling::derive_seed(noise.seed, ti, trial));
      const double detuning =
          sampling::truncated_normal(rng, config.detuning_spread, config.truncation);

      // Slow-drift reference: a bare sequence at zero detuning whose mean
      // phase estimate is subtracted from the frequency estimates.
      double ref_phase_sum = 0.0;
      for (int rep = 0; rep < config.drift_reps; ++rep) {
        const double xi = flicker_ref > 0.0 ? sampling::normal(rng) * flicker_ref : 0.0;
        const int outcome = sampling::draw_outcome(circuit_ref.probabilities(xi), rng);
        ref_phase_sum += slope_ref * (outcome - 0.5 * n);
      }
      const double drift_correction =
          config.drift_reps > 0
              ? ref_phase_sum / config.drift_reps / config.drift_time
              : 0.0;

      const auto single_shot = [&](const EncodedCircuit& circuit, double slope) {
        const double xi = flicker_meas > 0.0 ? sampling::normal(rng) * flicker_meas : 0.0;
        const int outcome =
            sampling::draw_outcome(circuit.probabilities(detuning * time + xi), rng);
        return slope * (outcome - 0.5 * n) / time - drift_correction - detuning;
      };
      const double e_css = single_shot(circuit_css, slope_css);
      const double e_opt = single_shot(circuit_opt, slope_opt);
      err_css.push_back(e_css);
      err_opt.push_back(e_opt);
      result.trials.push_back({time, trial, detuning, e_css, e_opt});
    }

    const auto std_dev = [](const std::vector<double>& xs) {
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double acc = 0.0;
      for (double x : xs) acc += (x - mean) * (x - mean);
      return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
    };
    const auto bootstrap_err = [&](const std::vector<double>& xs, unsigned tag) {
      std::mt19937_64 rng(sampling::derive_seed(noise.seed, 7770 + ti, tag));
      std::vector<double> resample(xs.size());
      double s1 = 0.0, s2 = 0.0;
      for (int b = 0; b < config.bootstrap; ++b) {
        for (size_t i = 0; i < xs.size(); ++i)
          resample[i] = xs[static_cast<size_t>(sampling::uniform(rng) * xs.size())];
        const double s = std_dev(resample);
        s1 += s;
        s2 += s * s;
      }
      const double mean = s1 / config.bootstrap;
      return std::sqrt(std::max(s2 / config.bootstrap - mean * mean, 0.0));
    };

    const double drift_var =
        config.drift_reps > 0
            ? slope_ref * slope_ref * variance_of_m(circuit_ref.probabilities(0.0), n) /
                  config.drift_reps / (config.drift_time * config.drift_time)
            : 0.0;
    result.stats.push_back({time, "css", std_dev(err_css), bootstrap_err(err_css, 1),
                            frequency_error_theory(css, slope_css, time,
                                                   config.detuning_spread,
                                                   config.truncation, drift_var)});
    result.stats.push_back({time, "optimized", std_dev(err_opt),
                            bootstrap_err(err_opt, 2),
                            frequency_error_theory(opt, slope_opt, time,
                                                   config.detuning_spread,
                                                   config.truncation, drift_var)});
  }
  return result;
}

}  // namespace qsense
