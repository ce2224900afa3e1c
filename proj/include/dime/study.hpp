#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "dime/equilibrium.hpp"
#include "dime/market.hpp"
#include "dime/rng.hpp"

namespace dime {

struct StudyRow {
  double n_informed = 0.0;
  double m_uninformed = 0.0;
  double sample_mean_price = 0.0;
  double sample_var_price = 0.0;  // NaN with a single replication
  double sample_ie = 0.0;
  double analytic_mean_price = 0.0;
  double analytic_var_price = 0.0;
  double analytic_ie = 0.0;
  double mc_standard_error = 0.0;
  double mean_gap = 0.0;
  double var_gap = 0.0;
};

struct StudyTable {
  Regime regime = Regime::Naive;
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<StudyRow> rows;
};

namespace detail {

struct CellModel {
  // price = price_at(signal draw, noise draw); moments are exact counterparts
  double analytic_mean = 0.0;
  double analytic_var = 0.0;
  double signal_mean = 0.0;
  double informed_weight = 0.0;   // naive only
  double prior_weight_mean = 0.0; // naive only: weight of the prior mean inside the posterior mean
  double noise_term = 0.0;        // coefficient applied to the noise draw
  double signal_term = 0.0;       // coefficient applied to the signal draw
  double price_const = 0.0;
};

inline CellModel build_cell_model(const MarketParams& q, Regime regime) {
  CellModel cm;
  switch (regime) {
    case Regime::Naive: {
      const NaiveCoefficients c = naive_coefficients(q);
      const double lam_prior = 1.0 / q.prior.variance();
      const double lam_signal = 1.0 / q.signal_variance;
      const double prior_weight = lam_prior / (lam_prior + lam_signal);
      cm.signal_term = c.informed_weight * (1.0 - prior_weight);
      cm.noise_term = c.noise_impact * q.z_noise;
      cm.price_const = c.informed_weight * prior_weight * q.prior.mean() +
                       (1.0 - c.informed_weight) * q.prior.mean();
      cm.signal_mean = q.prior.mean();  // signal drawn around the drawn fundamental
      cm.analytic_mean = q.prior.mean();
      cm.analytic_var =
          cm.signal_term * cm.signal_term * (q.prior.variance() + q.signal_variance) +
          cm.noise_term * cm.noise_term * q.noise_variance;
      break;
    }
    case Regime::REE: {
      const EquilibriumSolution s = solve_ree_fixed_point(q, 1e-12, 2000);
      cm.signal_term = s.coeff_informed;
      cm.noise_term = s.coeff_noise;
      cm.price_const = 0.0;
      cm.signal_mean = q.realized_signal;
      cm.analytic_mean = s.coeff_informed * q.realized_signal;
      cm.analytic_var = s.coeff_informed * s.coeff_informed * q.signal_variance +
                        s.coeff_noise * s.coeff_noise * q.noise_variance;
      break;
    }
    case Regime::FullyRevealing: {
      const double mass = q.n_informed + q.m_uninformed;
      if (!(mass > 0.0)) throw std::domain_error("study: n + m must be > 0");
      const double sensitivity =
          -q.risk_aversion * q.z_noise * fully_revealing_conditional_variance(q) / mass;
      cm.signal_term = 1.0;
      cm.noise_term = sensitivity;
      cm.price_const = 0.0;
      cm.signal_mean = q.realized_signal;
      cm.analytic_mean = q.realized_signal;
      cm.analytic_var =
          q.signal_variance + sensitivity * sensitivity * q.noise_variance;
      break;
    }
  }
  return cm;
}

}  // namespace detail

// Seeded Monte Carlo sweep over (n, m) cells. Every replication draws its own
// signal and noise from a stream derived as stream_seed(seed, cell*reps + rep),
// so the table is identical no matter how replications are scheduled.
inline StudyTable run_convergence_study(const MarketParams& base, Regime regime,
                                        const std::vector<std::pair<double, double>>& grid,
                                        int replications, std::uint64_t seed) {
  if (grid.empty()) throw std::domain_error("run_convergence_study: grid must be non-empty");
  if (replications < 1) {
    throw std::domain_error("run_convergence_study: replications must be >= 1");
  }

  StudyTable table;
  table.regime = regime;
  table.replications = replications;
  table.seed = seed;
  table.rows.reserve(grid.size());

  const double prior_sd = std::sqrt(base.prior.variance());
  const double signal_sd = std::sqrt(base.signal_variance);
  const double noise_sd = std::sqrt(base.noise_variance);

  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const auto [n, m] = grid[cell];
    if (n == 0.0 && m == 0.0) {
      throw std::domain_error("run_convergence_study: grid cell has no traders");
    }
    MarketParams q = base;
    q.n_informed = n;
    q.m_uninformed = m;
    const detail::CellModel cm = detail::build_cell_model(q, regime);

    double sum = 0.0;
    double sum_sq = 0.0;
    for (int rep = 0; rep < replications; ++rep) {
      RandomStream rng = RandomStream::for_stream(
          seed, static_cast<std::uint64_t>(cell) * static_cast<std::uint64_t>(replications) +
                    static_cast<std::uint64_t>(rep));
      double signal;
      if (regime == Regime::Naive) {
        const double fundamental = rng.normal(q.prior.mean(), prior_sd);
        signal = rng.normal(fundamental, signal_sd);
      } else {
        signal = rng.normal(cm.signal_mean, signal_sd);
      }
      const double noise = rng.normal(0.0, noise_sd);
      const double price = cm.price_const + cm.signal_term * signal + cm.noise_term * noise;
      sum += price;
      sum_sq += price * price;
    }

    StudyRow row;
    row.n_informed = n;
    row.m_uninformed = m;
    row.sample_mean_price = sum / replications;
    row.sample_var_price =
        replications > 1
            ? (sum_sq - sum * sum / replications) / (replications - 1)
            : std::numeric_limits<double>::quiet_NaN();
    row.sample_ie = 1.0 / row.sample_var_price;
    row.analytic_mean_price = cm.analytic_mean;
    row.analytic_var_price = cm.analytic_var;
    row.analytic_ie = 1.0 / cm.analytic_var;
    row.mc_standard_error = std::sqrt(row.sample_var_price / replications);
    row.mean_gap = row.sample_mean_price - row.analytic_mean_price;
    row.var_gap = row.sample_var_price - row.analytic_var_price;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace dime
