#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "dime/error.hpp"
#include "dime/gaussian.hpp"
#include "dime/market.hpp"

namespace dime {

// Mean-variance demand of a trader holding the given belief.
inline double demand_uninformed(double price, const Gaussian& belief, double risk_aversion) {
  if (!(belief.variance() > 0.0)) {
    throw std::domain_error("demand_uninformed: belief variance must be > 0");
  }
  if (!(risk_aversion > 0.0)) {
    throw std::domain_error("demand_uninformed: risk aversion must be > 0");
  }
  return (belief.mean() - price) / (risk_aversion * belief.variance());
}

// Demand of a trader who saw the signal and carries only the residual risk.
inline double demand_informed(double price, double signal, double epsilon_variance,
                              double risk_aversion) {
  if (!(epsilon_variance > 0.0)) {
    throw std::domain_error("demand_informed: epsilon variance must be > 0");
  }
  if (!(risk_aversion > 0.0)) {
    throw std::domain_error("demand_informed: risk aversion must be > 0");
  }
  return (signal - price) / (risk_aversion * epsilon_variance);
}

// Naive-regime informed demand: condition the prior on the signal first.
inline double demand_informed_naive(double price, const Gaussian& prior, double signal_variance,
                                    double signal, double risk_aversion) {
  return demand_uninformed(price, posterior(prior, signal_variance, signal), risk_aversion);
}

// The trader groups submitting demand to one clearing round.
// In the REE regime the uninformed belief mean is replaced by the conjectured
// conditional mean price_weight * price; only its variance field is used.
struct AgentPopulation {
  double n_informed = 0.0;
  double m_uninformed = 0.0;
  double z_noise = 0.0;
  double risk_aversion = 1.0;
  Gaussian belief_informed{0.0, 1.0};
  Gaussian belief_uninformed{0.0, 1.0};
  Regime regime = Regime::Naive;
  double price_weight = 0.0;  // REE only

  void validate() const {
    if (!(n_informed + m_uninformed > 0.0)) {
      throw std::domain_error("AgentPopulation: needs at least one non-noise agent");
    }
    if (!(risk_aversion > 0.0)) {
      throw std::domain_error("AgentPopulation: risk aversion must be > 0");
    }
  }
};

struct ClearingResult {
  double price = 0.0;
  double excess_demand_at_price = 0.0;
  int iterations = 0;  // bisection steps of the verification pass
  double bracket_low = 0.0;
  double bracket_high = 0.0;
};

namespace detail {

struct AffineDemand {
  double slope = 0.0;      // d excess / d price
  double intercept = 0.0;  // excess demand at price 0, noise included
};

// Aggregate excess demand is affine in the price in every supported regime.
// The deterministic fully-revealing noise mass sits on the supply side, so a
// larger h lowers the clearing price there; elsewhere noise enters as demand.
inline AffineDemand affine_excess_demand(const AgentPopulation& pop, double realized_noise) {
  pop.validate();
  const double alpha = pop.risk_aversion;
  AffineDemand d;
  if (pop.n_informed > 0.0) {
    if (!(pop.belief_informed.variance() > 0.0)) {
      throw std::domain_error("clear_market: informed belief variance must be > 0");
    }
    const double w = pop.n_informed / (alpha * pop.belief_informed.variance());
    d.slope -= w;
    d.intercept += w * pop.belief_informed.mean();
  }
  if (pop.m_uninformed > 0.0) {
    if (!(pop.belief_uninformed.variance() > 0.0)) {
      throw std::domain_error("clear_market: uninformed belief variance must be > 0");
    }
    const double w = pop.m_uninformed / (alpha * pop.belief_uninformed.variance());
    if (pop.regime == Regime::REE) {
      d.slope += w * (pop.price_weight - 1.0);
    } else {
      d.slope -= w;
      d.intercept += w * pop.belief_uninformed.mean();
    }
  }
  const double noise = pop.z_noise * realized_noise;
  d.intercept += pop.regime == Regime::FullyRevealing ? -noise : noise;
  return d;
}

}  // namespace detail

inline double aggregate_excess_demand(const AgentPopulation& pop, double price,
                                      double realized_noise) {
  const auto d = detail::affine_excess_demand(pop, realized_noise);
  return d.slope * price + d.intercept;
}

// Clears the market: closed-form root of the affine excess demand, verified by
// an independent bracketing bisection whose step count is reported back.
inline ClearingResult clear_market(const AgentPopulation& pop, double realized_noise,
                                   double tol = 1e-12) {
  if (!(tol > 0.0)) throw std::domain_error("clear_market: tol must be > 0");
  const auto d = detail::affine_excess_demand(pop, realized_noise);
  if (!(d.slope < 0.0)) {
    throw structural_error("clear_market: aggregate demand slope " + std::to_string(d.slope) +
                           " is not negative; no stable clearing price");
  }
  ClearingResult r;
  r.price = -d.intercept / d.slope;

  // verification pass: bracket the root and bisect
  const double width = 1.0 + std::abs(r.price);
  double lo = r.price - width;
  double hi = r.price + width;
  auto excess = [&](double p) { return d.slope * p + d.intercept; };
  while (excess(lo) < 0.0) lo -= width;
  while (excess(hi) > 0.0) hi += width;
  r.bracket_low = lo;
  r.bracket_high = hi;
  while (hi - lo > tol && r.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) >= 0.0 ? lo : hi) = mid;
    ++r.iterations;
  }
  r.excess_demand_at_price = excess(r.price);
  return r;
}

}  // namespace dime
