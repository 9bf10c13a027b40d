#include "qsense/virtual_lab.hpp"

#include <cmath>
#include <stdexcept>

#include "qsense/errors.hpp"
#include "qsense/quadrature.hpp"
#include "qsense/sampling.hpp"

namespace qsense {

VirtualLab::VirtualLab(int n_particles, int n_en, int n_de, NoiseModel noise,
                       SequenceForm form)
    : n_(n_particles), n_en_(n_en), n_de_(n_de), noise_(noise), form_(form),
      rng_(noise.seed) {
  if (!(noise.twist_scale > 0.0))
    throw std::invalid_argument("twist scale must be positive");
  if (noise.refreeze_probability < 0.0 || noise.refreeze_probability > 1.0)
    throw std::invalid_argument("refreeze probability must lie in [0, 1]");
}

Eigen::VectorXd VirtualLab::perturbed_probabilities(const CircuitParams& params,
                                                    double phi) const {
  CircuitParams noisy = params;
  noisy.form = form_;
  for (auto* block : {&noisy.entangling, &noisy.decoding})
    for (LayerAngles& a : *block) {
      a.twist_1 *= noise_.twist_scale;
      a.twist_2 *= noise_.twist_scale;
      if (std::abs(a.rotation) < noise_.rotation_skip_threshold) {
        a.rotation = 0.0;
      } else if (a.rotation != 0.0) {
        a.rotation += noise_.rotation_offset;
      }
    }
  return EncodedCircuit(noisy).probabilities(phi);
}

Eigen::VectorXd VirtualLab::sample_outcomes(const CircuitParams& params, double phi,
                                            long long shots) {
  if (shots < 1) throw std::invalid_argument("need at least one shot");
  const Eigen::VectorXd probs = perturbed_probabilities(params, phi);
  return sampling::histogram_with_refreeze(probs, shots, 50, noise_.refreeze_probability,
                                           rng_, &discarded_);
}

Eigen::VectorXd VirtualLab::sample(const Eigen::VectorXd& circuit_params, double phi,
                                   long long shots) {
  return sample_outcomes(circuit_from_vector(n_, n_en_, n_de_, circuit_params, form_),
                         phi, shots);
}

IdealSampler::IdealSampler(int n_particles, int n_en, int n_de, SequenceForm form)
    : n_(n_particles), n_en_(n_en), n_de_(n_de), form_(form) {}

Eigen::VectorXd IdealSampler::sample(const Eigen::VectorXd& circuit_params, double phi,
                                     long long shots) {
  const CircuitParams params =
      circuit_from_vector(n_, n_en_, n_de_, circuit_params, form_);
  return EncodedCircuit(params).probabilities(phi) * static_cast<double>(shots);
}

CostReport empirical_cost(VirtualLab& lab, const CircuitParams& params,
                          const Prior& prior, const EmpiricalScanSpec& spec) {
  if (spec.rule_order < 3) throw std::invalid_argument("empirical scan needs >= 3 nodes");
  const QuadratureRule rule = gauss_hermite(spec.rule_order);
  const double scale = std::sqrt(2.0) * prior.width;
  const long long reps = ((spec.reps + spec.batch - 1) / spec.batch) * spec.batch;

  EmpiricalScan scan;
  scan.n_particles = lab.n_particles();
  scan.phases.resize(rule.nodes.size());
  scan.counts.resize(rule.nodes.size(), lab.n_particles() + 1);
  for (int i = 0; i < rule.nodes.size(); ++i) {
    scan.phases(i) = prior.mean + scale * rule.nodes(i);
    scan.counts.row(i) = lab.sample_outcomes(params, scan.phases(i), reps).transpose();
  }
  return fit_experimental_cost(scan, prior);
}

}  // namespace qsense
