#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qsense/errors.hpp"
#include "qsense/theory_opt.hpp"
#include "qsense/virtual_lab.hpp"

using namespace qsense;

namespace {

CircuitParams squeezing_circuit_26() {
  CircuitParams p = make_circuit(26, 1, 0);
  p.entangling[0] = {0.0551, 0.0, -1.0699};
  return p;
}

double kolmogorov_distance(const Eigen::VectorXd& counts, const Eigen::VectorXd& probs) {
  const double total = counts.sum();
  double cdf_a = 0.0, cdf_b = 0.0, worst = 0.0;
  for (int k = 0; k < probs.size(); ++k) {
    cdf_a += counts(k) / total;
    cdf_b += probs(k);
    worst = std::max(worst, std::abs(cdf_a - cdf_b));
  }
  return worst;
}

}  // namespace

TEST_CASE("noise-free lab reproduces the ideal distribution") {
  CircuitParams p = squeezing_circuit_26();
  NoiseModel clean;
  VirtualLab lab(26, 1, 0, clean);
  const Eigen::VectorXd exact =
      EncodedCircuit([&] { auto q = p; q.form = SequenceForm::experimental; return q; }())
          .probabilities(0.4);
  CHECK((lab.perturbed_probabilities(p, 0.4) - exact).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sampling converges to the exact law like one over sqrt(shots)") {
  CircuitParams p = make_circuit(12, 0, 0);
  const Eigen::VectorXd probs =
      EncodedCircuit([&] { auto q = p; q.form = SequenceForm::experimental; return q; }())
          .probabilities(0.3);
  double previous = 1.0;
  for (long long shots : {400LL, 40000LL, 4000000LL}) {
    NoiseModel clean;
    clean.seed = static_cast<unsigned>(shots);
    VirtualLab lab(12, 0, 0, clean);
    const Eigen::VectorXd counts = lab.sample_outcomes(p, 0.3, shots);
    CHECK(counts.sum() == doctest::Approx(static_cast<double>(shots)));
    const double distance = kolmogorov_distance(counts, probs);
    // each factor 100 in shots buys about a factor 10 in distance
    CHECK(distance < 4.0 / std::sqrt(static_cast<double>(shots)));
    CHECK(distance < previous);
    previous = distance;
  }
}

TEST_CASE("single spin at quarter turn concentrates on one outcome") {
  CircuitParams p = make_circuit(1, 0, 0);
  NoiseModel clean;
  VirtualLab lab(1, 0, 0, clean);
  const Eigen::VectorXd counts = lab.sample_outcomes(p, M_PI / 2.0, 1000000);
  // p(m) = (1 -+ sin phi)/2: everything lands on m = -1/2
  CHECK(counts(0) / counts.sum() > 0.999);
}

TEST_CASE("refreeze redraws are distribution neutral and capped") {
  CircuitParams p = make_circuit(8, 0, 0);
  const Eigen::VectorXd probs =
      EncodedCircuit([&] { auto q = p; q.form = SequenceForm::experimental; return q; }())
          .probabilities(0.2);

  NoiseModel noisy;
  noisy.refreeze_probability = 0.35;
  noisy.seed = 5;
  VirtualLab lab(8, 0, 0, noisy);
  const Eigen::VectorXd counts = lab.sample_outcomes(p, 0.2, 200000);
  CHECK(kolmogorov_distance(counts, probs) < 0.01);
  CHECK(lab.discarded_shots() > 0);

  NoiseModel storm;
  storm.refreeze_probability = 1.0;
  VirtualLab stuck(8, 0, 0, storm);
  CHECK_THROWS_AS(stuck.sample_outcomes(p, 0.2, 50), EvaluatorFailureError);
}

TEST_CASE("seeded labs reproduce their outputs exactly") {
  CircuitParams p = squeezing_circuit_26();
  NoiseModel noise;
  noise.seed = 123;
  noise.refreeze_probability = 0.1;
  VirtualLab a(26, 1, 0, noise);
  VirtualLab b(26, 1, 0, noise);
  const Eigen::VectorXd ha = a.sample_outcomes(p, 0.15, 500);
  const Eigen::VectorXd hb = b.sample_outcomes(p, 0.15, 500);
  CHECK((ha - hb).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("empirical cost approaches the ideal value with many shots") {
  CircuitParams p = squeezing_circuit_26();
  const Prior prior{0.7403, 0.0};

  NoiseModel clean;
  VirtualLab lab(26, 1, 0, clean);
  EmpiricalScanSpec spec{10, 200000, 50};
  const CostReport fitted = empirical_cost(lab, p, prior, spec);

  auto exp_form = p;
  exp_form.form = SequenceForm::experimental;
  const double ideal = circuit_cost(EncodedCircuit(exp_form), prior,
                                    EstimatorKind::linear, QuadratureSpec::hermite(200))
                           .bmse;
  CHECK(fitted.bmse == doctest::Approx(ideal).epsilon(0.02));
  // ten sparse nodes pin the cost well but leave the frame offset loose;
  // the tight offset recovery is exercised on 21-node scans elsewhere
  CHECK(std::abs(fitted.offset) < 0.03);
}

TEST_CASE("miscalibrated twisting raises the cost") {
  CircuitParams p = squeezing_circuit_26();
  const Prior prior{0.7403, 0.0};
  EmpiricalScanSpec spec{10, 20000, 50};

  NoiseModel clean;
  clean.seed = 2;
  VirtualLab lab(26, 1, 0, clean);
  const double base = empirical_cost(lab, p, prior, spec).bmse;

  NoiseModel biased = clean;
  biased.twist_scale = 1.3;
  VirtualLab off(26, 1, 0, biased);
  const double degraded = empirical_cost(off, p, prior, spec).bmse;
  CHECK(degraded > base * 1.05);
}

TEST_CASE("empirical cost is unbiased over seeds" * doctest::timeout(300)) {
  CircuitParams p = make_circuit(12, 1, 0);
  p.entangling[0] = {0.08, 0.0, -1.1};
  const Prior prior{0.8, 0.0};

  auto exp_form = p;
  exp_form.form = SequenceForm::experimental;
  const double ideal = circuit_cost(EncodedCircuit(exp_form), prior,
                                    EstimatorKind::linear, QuadratureSpec::hermite(200))
                           .bmse;

  const int n_seeds = 100;
  double sum = 0.0, sum2 = 0.0;
  for (int seed = 0; seed < n_seeds; ++seed) {
    NoiseModel clean;
    clean.seed = 1000 + seed;
    VirtualLab lab(12, 1, 0, clean);
    EmpiricalScanSpec spec{10, 200, 50};
    const double c = empirical_cost(lab, p, prior, spec).bmse;
    sum += c;
    sum2 += c * c;
  }
  const double mean = sum / n_seeds;
  const double sem = std::sqrt((sum2 / n_seeds - mean * mean) / (n_seeds - 1));
  CHECK(std::abs(mean - ideal) < 3.0 * sem + 0.01 * ideal);
}

TEST_CASE("scan protocol: symmetry shortcut and determinism") {
  IdealSampler sampler(12, 1, 0, SequenceForm::experimental);
  Eigen::VectorXd params(3);
  params << 0.08, 0.0, -1.1;
  const Prior prior{0.8, 0.0};
  const Estimator est = linear_estimator(-0.16);

  const ScanResult coarse = coarse_scan(sampler, params, est, prior);
  const ScanResult fine = fine_scan(sampler, params, est, prior);
  CHECK(coarse.estimate.cost == doctest::Approx(fine.estimate.cost).epsilon(0.02));
  CHECK(coarse.estimate.shots < fine.estimate.shots);

  // half-axis and full-axis agree exactly for a deterministic sampler at the
  // same rule order (the mirror symmetry is exact)
  ScanSpec full = ScanSpec::coarse_default();
  full.half_axis = false;
  const ScanResult both_sides = run_scan(sampler, params, est, prior, full);
  CHECK(coarse.estimate.cost == doctest::Approx(both_sides.estimate.cost).epsilon(1e-10));

  // batching pads repetitions to whole batches
  ScanSpec ragged = ScanSpec::coarse_default();
  ragged.reps = 101;
  const ScanResult padded = run_scan(sampler, params, est, prior, ragged);
  CHECK(padded.histograms.counts.row(0).sum() == doctest::Approx(150.0));
}

TEST_CASE("frequency experiment matches its own theory and favors the tailored sequence" *
          doctest::timeout(600)) {
  FreqExperimentConfig config;
  config.css = make_circuit(12, 0, 0);
  config.optimized = make_circuit(12, 1, 2);
  // tailored sequence produced by the theory optimizer at width 0.6893
  Constraints cons;
  cons.kinds = circuit_param_kinds(1, 2);
  TheoryOptOptions topts;
  topts.starts = 10;
  topts.seed = 5;
  auto solved = optimize_circuit(12, 1, 2, Prior{0.6893, 0.0}, cons, topts);
  config.optimized = solved.params;

  config.samples_per_time = 150;
  config.ramsey_times = Eigen::VectorXd::LinSpaced(3, 1.5e-3, 3.5e-3);
  NoiseModel clean;
  clean.seed = 77;
  const FreqExperimentResult result = run_frequency_experiment(config, clean);

  REQUIRE(result.stats.size() == 6);
  for (size_t i = 0; i < result.stats.size(); i += 2) {
    const auto& css = result.stats[i];
    const auto& opt = result.stats[i + 1];
    CHECK(css.label == "css");
    CHECK(opt.label == "optimized");
    // simulation agrees with the flicker-free prediction at 3 sigma
    CHECK(std::abs(css.std_dev - css.theory_std) < 3.0 * css.bootstrap_err);
    CHECK(std::abs(opt.std_dev - opt.theory_std) < 3.0 * opt.bootstrap_err);
    // the tailored sequence wins at every interrogation time
    CHECK(opt.std_dev < css.std_dev);
    CHECK(opt.theory_std < css.theory_std);
  }

  SUBCASE("determinism") {
    const FreqExperimentResult again = run_frequency_experiment(config, clean);
    REQUIRE(again.trials.size() == result.trials.size());
    for (size_t i = 0; i < result.trials.size(); ++i) {
      CHECK(again.trials[i].detuning == result.trials[i].detuning);
      CHECK(again.trials[i].error_css == result.trials[i].error_css);
    }
  }
}

TEST_CASE("narrow detuning reaches the projection-noise floor") {
  FreqExperimentConfig config;
  config.css = make_circuit(12, 0, 0);
  config.optimized = make_circuit(12, 0, 0);
  config.detuning_spread = 2.0 * M_PI * 0.05;  // nearly no injected noise
  config.samples_per_time = 400;
  config.slope_policy = FreqExperimentConfig::SlopePolicy::local;
  config.ramsey_times = Eigen::VectorXd::Constant(1, 2e-3);
  config.drift_reps = 0;  // isolate the projection noise
  NoiseModel clean;
  clean.seed = 4;
  const FreqExperimentResult result = run_frequency_experiment(config, clean);
  const double floor = 1.0 / std::sqrt(12.0) / 2e-3;  // delta_phi_M / T
  CHECK(result.stats[0].std_dev == doctest::Approx(floor).epsilon(0.15));
  CHECK(result.stats[0].theory_std == doctest::Approx(floor).epsilon(0.05));
}
