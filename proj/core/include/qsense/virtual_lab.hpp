#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "qsense/circuit.hpp"
#include "qsense/metrology.hpp"
#include "qsense/scans.hpp"

namespace qsense {

/// Configurable imperfections of the emulated sensor. Flicker noise only
/// enters the frequency-estimation experiments (as a per-cycle random phase);
/// the remaining knobs perturb every sampled sequence.
struct NoiseModel {
  double twist_scale = 1.0;            // multiplies every twisting angle
  double rotation_offset = 0.0;        // added to every layer rotation
  double rotation_skip_threshold = 0.0;  // layer rotations below this are skipped
  double flicker_bandwidth = 0.0;      // rad/s, 0 disables flicker
  double flicker_exponent = 1.0;
  double refreeze_probability = 0.0;   // per 50-shot batch, discard-and-redraw
  unsigned seed = 1;
};

/// Finite-shot sampling front end over the ideal simulator.
class VirtualLab : public OutcomeSampler {
public:
  VirtualLab(int n_particles, int n_en, int n_de, NoiseModel noise,
             SequenceForm form = SequenceForm::experimental);

  int n_particles() const override { return n_; }
  Eigen::VectorXd sample(const Eigen::VectorXd& circuit_params, double phi,
                         long long shots) override;

  /// Histogram of projective outcomes; refreeze events discard and redraw
  /// whole 50-shot batches. Throws EvaluatorFailureError past the retry cap.
  Eigen::VectorXd sample_outcomes(const CircuitParams& params, double phi,
                                  long long shots);

  /// Outcome distribution with the noise-model gate perturbations applied.
  Eigen::VectorXd perturbed_probabilities(const CircuitParams& params, double phi) const;

  const NoiseModel& noise() const { return noise_; }
  long long discarded_shots() const { return discarded_; }

private:
  int n_, n_en_, n_de_;
  NoiseModel noise_;
  SequenceForm form_;
  std::mt19937_64 rng_;
  long long discarded_ = 0;
};

/// Deterministic sampler: expected counts from exact probabilities.
class IdealSampler : public OutcomeSampler {
public:
  IdealSampler(int n_particles, int n_en, int n_de,
               SequenceForm form = SequenceForm::canonical);
  int n_particles() const override { return n_; }
  Eigen::VectorXd sample(const Eigen::VectorXd& circuit_params, double phi,
                         long long shots) override;

private:
  int n_, n_en_, n_de_;
  SequenceForm form_;
};

/// Nodes and repetitions of an experiment-style cost measurement.
struct EmpiricalScanSpec {
  int rule_order = 10;
  long long reps = 100;
  long long batch = 50;
};

/// Experiment-style cost: histograms at Hermite-Gauss nodes fed through the
/// Simpson fit with free slope and frame offset.
CostReport empirical_cost(VirtualLab& lab, const CircuitParams& params,
                          const Prior& prior, const EmpiricalScanSpec& spec);

/// Frequency-estimation emulation: a detuning drawn from a truncated normal
/// is reconstructed from single shots of two sequences, with a slow-drift
/// reference measurement subtracted.
struct FreqExperimentConfig {
  CircuitParams css;        // baseline sequence
  CircuitParams optimized;  // tailored sequence
  double detuning_spread = 2.0 * M_PI * 40.0;  // rad/s
  double truncation = 2.0;                     // in units of the spread
  int samples_per_time = 200;
  Eigen::VectorXd ramsey_times;                // s
  double drift_time = 15e-3;                   // s
  int drift_reps = 50;
  int bootstrap = 200;
  /// bayes: slope optimal for the per-time prior width; local: small-prior
  /// inversion slope (projection-noise-floor studies)
  enum class SlopePolicy { bayes, local } slope_policy = SlopePolicy::bayes;
};

struct FreqTrialRecord {
  double ramsey_time = 0.0;
  int trial = 0;
  double detuning = 0.0;      // injected, rad/s
  double error_css = 0.0;     // estimate - injected
  double error_optimized = 0.0;
};

struct FreqSequenceStat {
  double ramsey_time = 0.0;
  std::string label;
  double std_dev = 0.0;        // of the estimator error, rad/s
  double bootstrap_err = 0.0;  // resampled uncertainty of std_dev
  double theory_std = 0.0;     // flicker-free quadrature prediction
};

struct FreqExperimentResult {
  std::vector<FreqSequenceStat> stats;
  std::vector<FreqTrialRecord> trials;
};

FreqExperimentResult run_frequency_experiment(const FreqExperimentConfig& config,
                                              const NoiseModel& noise);

/// Flicker-free prediction of the estimator-error standard deviation for one
/// sequence at one Ramsey time (quadrature over the truncated detuning law).
double frequency_error_theory(const CircuitParams& params, double slope,
                              double ramsey_time, double detuning_spread,
                              double truncation, double drift_variance);

}  // namespace qsense
