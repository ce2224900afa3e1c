#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dime {

// One-dimensional normal belief N(mean, variance). Immutable after construction.
class Gaussian {
public:
  Gaussian(double mean, double variance) : mean_(mean), variance_(variance) {
    if (std::isnan(mean) || std::isnan(variance) || variance < 0.0) {
      throw std::domain_error("Gaussian: variance must be >= 0 and moments not NaN");
    }
  }

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }

  // 1/variance; +inf for a degenerate (zero-variance) belief.
  double precision() const noexcept {
    return variance_ > 0.0 ? 1.0 / variance_ : std::numeric_limits<double>::infinity();
  }

private:
  double mean_;
  double variance_;
};

// Moments of a jointly normal pair (A, B); cov_ab must satisfy Cauchy-Schwarz.
struct JointGaussianPair {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  double cov_ab = 0.0;

  JointGaussianPair(double ma, double mb, double va, double vb, double cab)
      : mean_a(ma), mean_b(mb), var_a(va), var_b(vb), cov_ab(cab) {
    if (!(va >= 0.0) || !(vb >= 0.0)) {
      throw std::domain_error("JointGaussianPair: variances must be >= 0");
    }
    // allow a little slack so exactly-correlated pairs built from sqrt survive rounding
    const double bound = va * vb;
    if (cab * cab > bound + 1e-9 * (bound + 1.0)) {
      throw std::domain_error("JointGaussianPair: cov_ab^2 exceeds var_a*var_b");
    }
  }
};

// Conjugate-normal update of a prior belief with one observed signal.
// The posterior precision is the sum of the prior and signal precisions; the
// posterior mean is the precision-weighted convex mix of prior mean and signal.
// An infinite signal variance is accepted and returns the prior unchanged.
inline Gaussian posterior(const Gaussian& prior, double signal_noise_variance,
                          double observed_signal) {
  if (!(prior.variance() > 0.0)) {
    throw std::domain_error("posterior: prior variance must be > 0");
  }
  if (!(signal_noise_variance > 0.0)) {
    throw std::domain_error("posterior: signal noise variance must be > 0");
  }
  const double lam_prior = 1.0 / prior.variance();
  const double lam_signal = 1.0 / signal_noise_variance;  // 0 when variance is +inf
  const double lam_post = lam_prior + lam_signal;
  const double signal_weight = lam_signal / lam_post;
  const double mean = prior.mean() + signal_weight * (observed_signal - prior.mean());
  return Gaussian(mean, 1.0 / lam_post);
}

// Conditional distribution A | B = observed_b for a jointly normal pair.
inline Gaussian project(const JointGaussianPair& joint, double observed_b) {
  if (!(joint.var_b > 0.0)) {
    throw std::domain_error("project: var_b must be > 0");
  }
  const double gain = joint.cov_ab / joint.var_b;
  // clamp the tiny negative residue a perfectly correlated pair can produce
  const double cond_var = std::max(joint.var_a - gain * joint.cov_ab, 0.0);
  const double cond_mean = joint.mean_a + gain * (observed_b - joint.mean_b);
  return Gaussian(cond_mean, cond_var);
}

}  // namespace dime
