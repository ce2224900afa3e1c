#pragma once

#include <cmath>
#include <string>

#include "dime/error.hpp"
#include "dime/gaussian.hpp"

namespace dime {

enum class Regime { Naive, REE, FullyRevealing };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Naive: return "naive";
    case Regime::REE: return "ree";
    case Regime::FullyRevealing: return "fully_revealing";
  }
  return "unknown";
}

// Full parameter set of the one-asset market with differential information.
// Trader group sizes are real masses; integer counts are a special case.
struct MarketParams {
  double n_informed = 10.0;       // mass of traders observing the private signal
  double m_uninformed = 100.0;    // mass of traders without the signal
  double z_noise = 1.0;           // mass of noise-trader demand
  double risk_aversion = 2.0;     // mean-variance risk aversion, > 0
  Gaussian prior{10.0, 4.0};      // unconditional belief about the future price
  double signal_variance = 4.0;   // variance of the signal around the future price
  double noise_variance = 1.0;    // variance of the noise-trader shock, >= 0
  double epsilon_variance = 1.0;  // residual risk once the signal is known (price-rule regimes)
  double realized_signal = 12.0;  // the signal draw the informed traders saw
  double realized_noise = 0.5;    // the noise-demand draw

  // Var of the future price under the signal-plus-residual decomposition.
  double fundamental_variance() const { return signal_variance + epsilon_variance; }

  void validate() const {
    auto positive = [](double v, const char* f) {
      if (!(v > 0.0) || std::isnan(v)) throw validation_error(f, "must be > 0");
    };
    auto non_negative = [](double v, const char* f) {
      if (!(v >= 0.0) || std::isnan(v)) throw validation_error(f, "must be >= 0");
    };
    non_negative(n_informed, "n_informed");
    non_negative(m_uninformed, "m_uninformed");
    if (!(n_informed + m_uninformed >= 1.0)) {
      throw validation_error("n_informed", "n_informed + m_uninformed must be >= 1");
    }
    non_negative(z_noise, "z_noise");
    positive(risk_aversion, "risk_aversion");
    positive(prior.variance(), "prior_variance");
    positive(signal_variance, "signal_variance");
    non_negative(noise_variance, "noise_variance");
    positive(epsilon_variance, "epsilon_variance");
    if (std::isnan(realized_signal)) throw validation_error("realized_signal", "must be a number");
    if (std::isnan(realized_noise)) throw validation_error("realized_noise", "must be a number");
  }
};

// Price plus the coefficient decomposition behind it.
//   Naive:           coeff_informed/coeff_noise are the informed weight and noise impact.
//   REE:             signal loading and noise loading of the conjectured price rule.
//   FullyRevealing:  1 and the (signed) sensitivity of the price to the noise mass.
struct EquilibriumSolution {
  double price = 0.0;
  double coeff_informed = 0.0;
  double coeff_noise = 0.0;
  double conditional_mean = 0.0;
  double conditional_variance = 0.0;
  Regime regime = Regime::Naive;
  double residual = 0.0;  // fixed-point residual; 0 for closed forms
};

}  // namespace dime
