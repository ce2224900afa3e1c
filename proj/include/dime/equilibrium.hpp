#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dime/error.hpp"
#include "dime/gaussian.hpp"
#include "dime/market.hpp"

namespace dime {

// ---------------------------------------------------------------------------
// Naive equilibrium: nobody learns from the price; the informed trade on the
// conjugate posterior, the uninformed on the prior, and the market clears.
// ---------------------------------------------------------------------------

struct NaiveCoefficients {
  double informed_weight = 0.0;  // weight of the informed conditional mean in the price
  double noise_impact = 0.0;     // price sensitivity to one unit of aggregate noise demand
  Gaussian informed_belief{0.0, 1.0};
};

inline NaiveCoefficients naive_coefficients(const MarketParams& p) {
  const Gaussian post = posterior(p.prior, p.signal_variance, p.realized_signal);
  const double var_uninformed = p.prior.variance();
  const double var_informed = post.variance();
  const double denom = p.n_informed * var_uninformed + p.m_uninformed * var_informed;
  if (!(denom > 0.0)) {
    throw std::domain_error("naive_equilibrium: degenerate clearing denominator");
  }
  NaiveCoefficients c;
  c.informed_weight = p.n_informed * var_uninformed / denom;
  c.noise_impact = p.risk_aversion * var_informed * var_uninformed / denom;
  c.informed_belief = post;
  return c;
}

inline EquilibriumSolution naive_equilibrium(const MarketParams& p) {
  const NaiveCoefficients c = naive_coefficients(p);
  EquilibriumSolution s;
  s.regime = Regime::Naive;
  s.coeff_informed = c.informed_weight;
  s.coeff_noise = c.noise_impact;
  s.conditional_mean = c.informed_belief.mean();
  s.conditional_variance = c.informed_belief.variance();
  s.price = c.informed_weight * c.informed_belief.mean() +
            (1.0 - c.informed_weight) * p.prior.mean() +
            c.noise_impact * p.z_noise * p.realized_noise;
  s.residual = 0.0;
  return s;
}

// ---------------------------------------------------------------------------
// Rational-expectations equilibrium: the uninformed condition on the price,
// conjectured as price = signal_loading * signal + noise_loading * noise.
// ---------------------------------------------------------------------------

// Variance of the price implied by the conjectured rule.
inline double ree_price_variance(double signal_loading, double noise_loading,
                                 const MarketParams& p) {
  return signal_loading * signal_loading * p.signal_variance +
         noise_loading * noise_loading * p.noise_variance;
}

// Slope of the conditional-mean regression E[future price | price] = theta * price.
inline double ree_theta(double signal_loading, double noise_loading, const MarketParams& p) {
  const double var_price = ree_price_variance(signal_loading, noise_loading, p);
  if (!(var_price > 0.0)) {
    throw std::domain_error("ree_theta: conjectured price variance must be > 0");
  }
  return signal_loading * p.signal_variance / var_price;
}

// Which total variance the price-conditional variance is measured against.
// LiteralNoise reproduces a published variant that mixes in the noise variance
// instead of the residual risk; it is not projection-consistent and is off by default.
enum class ReeVarianceForm { Projection, LiteralNoise };

inline double ree_conditional_variance(double signal_loading, double noise_loading,
                                       const MarketParams& p,
                                       ReeVarianceForm form = ReeVarianceForm::Projection) {
  const double var_price = ree_price_variance(signal_loading, noise_loading, p);
  if (!(var_price > 0.0)) {
    throw std::domain_error("ree_conditional_variance: conjectured price variance must be > 0");
  }
  const double cov = signal_loading * p.signal_variance;  // Cov(future price, price)
  const double total = form == ReeVarianceForm::Projection
                           ? p.fundamental_variance()
                           : p.signal_variance + p.noise_variance;
  return total - cov * cov / var_price;
}

// Clearing-consistent loadings implied by a conjectured (signal, noise) pair.
// A fixed point of this map is the equilibrium.
inline std::pair<double, double> ree_coefficients(double signal_loading, double noise_loading,
                                                  const MarketParams& p) {
  const double theta = ree_theta(signal_loading, noise_loading, p);
  const double cond_var = ree_conditional_variance(signal_loading, noise_loading, p);
  const double denom =
      p.n_informed * cond_var + (1.0 - theta) * p.m_uninformed * p.epsilon_variance;
  if (!(denom > 0.0)) {
    throw std::domain_error("ree_coefficients: degenerate clearing denominator");
  }
  const double d1 = p.n_informed * cond_var / denom;
  const double d2 = p.risk_aversion * cond_var * p.epsilon_variance * p.z_noise / denom;
  return {d1, d2};
}

namespace detail {

inline double ree_residual(double g1, double g2, const MarketParams& p) {
  try {
    const auto [d1, d2] = ree_coefficients(g1, g2, p);
    const double r = std::max(std::abs(d1 - g1), std::abs(d2 - g2));
    return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Nelder-Mead on the squared residual; returns the best vertex found.
inline std::array<double, 2> ree_nelder_mead(std::array<double, 2> start, const MarketParams& p,
                                             double tol, int max_iter) {
  auto f = [&](const std::array<double, 2>& g) {
    const double r = ree_residual(g[0], g[1], p);
    return std::isfinite(r) ? r * r : std::numeric_limits<double>::infinity();
  };
  std::array<std::array<double, 2>, 3> v{start,
                                         {start[0] + 0.25, start[1]},
                                         {start[0], start[1] + 0.25}};
  std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};
  for (int it = 0; it < max_iter; ++it) {
    // order vertices best..worst
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::array<std::array<double, 2>, 3> vs{v[idx[0]], v[idx[1]], v[idx[2]]};
    std::array<double, 3> fs{fv[idx[0]], fv[idx[1]], fv[idx[2]]};
    v = vs;
    fv = fs;
    if (fv[0] < tol * tol * 1e-4) break;
    const double simplex_size = std::max(std::abs(v[1][0] - v[0][0]) + std::abs(v[1][1] - v[0][1]),
                                         std::abs(v[2][0] - v[0][0]) + std::abs(v[2][1] - v[0][1]));
    if (simplex_size < 1e-15) break;
    const std::array<double, 2> centroid{(v[0][0] + v[1][0]) / 2.0, (v[0][1] + v[1][1]) / 2.0};
    auto blend = [&](double t) {
      return std::array<double, 2>{centroid[0] + t * (centroid[0] - v[2][0]),
                                   centroid[1] + t * (centroid[1] - v[2][1])};
    };
    const auto refl = blend(1.0);
    const double f_refl = f(refl);
    if (f_refl < fv[0]) {
      const auto expa = blend(2.0);
      const double f_expa = f(expa);
      if (f_expa < f_refl) {
        v[2] = expa;
        fv[2] = f_expa;
      } else {
        v[2] = refl;
        fv[2] = f_refl;
      }
    } else if (f_refl < fv[1]) {
      v[2] = refl;
      fv[2] = f_refl;
    } else {
      const auto contr = blend(f_refl < fv[2] ? 0.5 : -0.5);
      const double f_contr = f(contr);
      if (f_contr < std::min(f_refl, fv[2])) {
        v[2] = contr;
        fv[2] = f_contr;
      } else {
        for (int i = 1; i < 3; ++i) {
          v[i] = {v[0][0] + 0.5 * (v[i][0] - v[0][0]), v[0][1] + 0.5 * (v[i][1] - v[0][1])};
          fv[i] = f(v[i]);
        }
      }
    }
  }
  const int best = fv[0] <= fv[1] && fv[0] <= fv[2] ? 0 : (fv[1] <= fv[2] ? 1 : 2);
  return v[best];
}

// Damped Newton steps on H(g) = coefficients(g) - g with a finite-difference
// Jacobian; takes the fallback's coarse iterate down to machine-level residuals.
inline std::array<double, 2> ree_newton_polish(std::array<double, 2> g, const MarketParams& p,
                                               double tol, int max_steps) {
  double res = ree_residual(g[0], g[1], p);
  for (int it = 0; it < max_steps && res > tol * 1e-3; ++it) {
    if (!std::isfinite(res)) break;
    const auto [d1, d2] = ree_coefficients(g[0], g[1], p);
    const double h0 = d1 - g[0];
    const double h1 = d2 - g[1];
    double jac[2][2];
    bool ok = true;
    for (int j = 0; j < 2 && ok; ++j) {
      const double step = 1e-7 * std::max(1.0, std::abs(g[j]));
      auto gp = g;
      gp[j] += step;
      if (!std::isfinite(ree_residual(gp[0], gp[1], p))) {
        ok = false;
        break;
      }
      const auto [e1, e2] = ree_coefficients(gp[0], gp[1], p);
      jac[0][j] = ((e1 - gp[0]) - h0) / step;
      jac[1][j] = ((e2 - gp[1]) - h1) / step;
    }
    if (!ok) break;
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (std::abs(det) < 1e-14) break;
    const double dx0 = (-h0 * jac[1][1] + h1 * jac[0][1]) / det;
    const double dx1 = (-h1 * jac[0][0] + h0 * jac[1][0]) / det;
    // backtrack if the full step does not improve
    double lambda = 1.0;
    std::array<double, 2> next = g;
    double next_res = res;
    for (int k = 0; k < 8; ++k) {
      const std::array<double, 2> trial{g[0] + lambda * dx0, g[1] + lambda * dx1};
      const double trial_res = ree_residual(trial[0], trial[1], p);
      if (trial_res < res) {
        next = trial;
        next_res = trial_res;
        break;
      }
      lambda *= 0.5;
    }
    if (next_res >= res) break;
    g = next;
    res = next_res;
  }
  return g;
}

}  // namespace detail

// Damped fixed-point iteration for the conjectured price-rule loadings, with a
// derivative-free fallback when the plain iteration is not contracting.
inline EquilibriumSolution solve_ree_fixed_point(const MarketParams& p, double tol = 1e-10,
                                                 int max_iter = 500, double damping = 0.5) {
  if (!(tol > 0.0)) throw std::domain_error("solve_ree_fixed_point: tol must be > 0");
  if (max_iter < 1) throw std::domain_error("solve_ree_fixed_point: max_iter must be >= 1");
  if (!(p.signal_variance > 0.0) || !(p.epsilon_variance > 0.0) || !(p.noise_variance >= 0.0) ||
      !(p.risk_aversion > 0.0) || !(p.n_informed >= 0.0) || !(p.m_uninformed >= 0.0)) {
    throw std::domain_error("solve_ree_fixed_point: market parameters out of domain");
  }

  std::array<double, 2> g{0.5, 0.0};
  std::array<double, 2> best = g;
  double best_res = detail::ree_residual(g[0], g[1], p);
  double prev_res = best_res;
  int worse_in_a_row = 0;

  for (int it = 0; it < max_iter; ++it) {
    const double res = detail::ree_residual(g[0], g[1], p);
    if (res < best_res) {
      best = g;
      best_res = res;
    }
    if (res <= tol) break;
    if (!std::isfinite(res)) break;  // left the domain: hand over to the fallback
    worse_in_a_row = res >= prev_res ? worse_in_a_row + 1 : 0;
    if (worse_in_a_row >= 5) break;  // not contracting
    prev_res = res;
    const auto [d1, d2] = ree_coefficients(g[0], g[1], p);
    g = {(1.0 - damping) * g[0] + damping * d1, (1.0 - damping) * g[1] + damping * d2};
  }

  if (best_res > tol) {
    // try the best point seen so far, then a deterministic list of starts;
    // (1, 0) is always inside the map's domain, so at least one seed is usable
    const std::array<std::array<double, 2>, 6> starts{best,
                                                      {1.0, 0.0},
                                                      {0.9, 0.1},
                                                      {0.5, 0.5},
                                                      {0.25, 0.1},
                                                      {1.5, 0.25}};
    for (const auto& start : starts) {
      if (best_res <= tol) break;
      if (!std::isfinite(detail::ree_residual(start[0], start[1], p))) continue;
      const auto nm = detail::ree_nelder_mead(start, p, tol, 400);
      auto refined = detail::ree_newton_polish(nm, p, tol, 12);
      const double res = detail::ree_residual(refined[0], refined[1], p);
      if (res < best_res) {
        best = refined;
        best_res = res;
      }
    }
  }

  if (!(best_res <= tol)) {
    throw convergence_error("solve_ree_fixed_point: no fixed point within tolerance", best_res);
  }

  EquilibriumSolution s;
  s.regime = Regime::REE;
  s.coeff_informed = best[0];
  s.coeff_noise = best[1];
  s.price = best[0] * p.realized_signal + best[1] * p.realized_noise;
  s.conditional_mean = ree_theta(best[0], best[1], p) * s.price;
  s.conditional_variance = ree_conditional_variance(best[0], best[1], p);
  s.residual = best_res;
  return s;
}

// ---------------------------------------------------------------------------
// Fully revealing equilibrium: the price exposes the signal, every trader
// shares the signal-conditional belief, and the deterministic noise mass only
// shifts the price by a risk correction that vanishes as the market grows.
// ---------------------------------------------------------------------------

// Which conditional variance the fully revealing formulas use. PriorVariance is
// a compatibility reading of a published variant and is off by default.
enum class RevealedVarianceForm { ResidualRisk, PriorVariance };

inline double fully_revealing_conditional_variance(
    const MarketParams& p, RevealedVarianceForm form = RevealedVarianceForm::ResidualRisk) {
  return form == RevealedVarianceForm::ResidualRisk ? p.epsilon_variance : p.prior.variance();
}

inline EquilibriumSolution fully_revealing_price(
    const MarketParams& p, RevealedVarianceForm form = RevealedVarianceForm::ResidualRisk) {
  const double mass = p.n_informed + p.m_uninformed;
  if (!(mass > 0.0)) {
    throw std::domain_error("fully_revealing_price: n_informed + m_uninformed must be > 0");
  }
  const double cond_var = fully_revealing_conditional_variance(p, form);
  const double noise_sensitivity = -p.risk_aversion * p.z_noise * cond_var / mass;
  EquilibriumSolution s;
  s.regime = Regime::FullyRevealing;
  s.conditional_mean = p.realized_signal;
  s.conditional_variance = cond_var;
  s.coeff_informed = 1.0;
  s.coeff_noise = noise_sensitivity;
  s.price = p.realized_signal + noise_sensitivity * p.realized_noise;
  s.residual = 0.0;
  return s;
}

// Price variance in the fully revealing regime, evaluated exactly as published.
// The cross term involves the conditional mean, so the formula can go negative
// for small markets; callers must treat non-positive values as out-of-domain.
inline double fully_revealing_price_variance(
    const MarketParams& p, RevealedVarianceForm form = RevealedVarianceForm::ResidualRisk) {
  const double mass = p.n_informed + p.m_uninformed;
  if (!(mass > 0.0)) {
    throw std::domain_error("fully_revealing_price_variance: n_informed + m_uninformed must be > 0");
  }
  const double cond_var = fully_revealing_conditional_variance(p, form);
  const double correction = p.risk_aversion * p.z_noise * p.realized_noise * cond_var / mass;
  return cond_var + correction * (correction - 2.0 * p.realized_signal);
}

// Reciprocal-variance index of how informative the price is.
inline double informational_efficiency(double var_p) {
  if (!(var_p > 0.0)) {
    throw std::domain_error("informational_efficiency: var_p must be > 0");
  }
  return 1.0 / var_p;
}

// ---------------------------------------------------------------------------
// Large-market sweeps.
// ---------------------------------------------------------------------------

enum class SweepGroup { Informed, Uninformed, Both };

struct LimitRow {
  double size = 0.0;  // the swept mass (group total)
  double n_informed = 0.0;
  double m_uninformed = 0.0;
  double coeff_informed = 0.0;
  double coeff_noise = 0.0;
  double price = 0.0;
};

struct LimitTable {
  Regime regime = Regime::Naive;
  SweepGroup group = SweepGroup::Uninformed;
  std::vector<LimitRow> rows;
  double limit_price = 0.0;
  // slope of log10 |price - limit| against log10(size); NaN when the gap is identically 0
  double fitted_order = 0.0;
};

namespace detail {

inline EquilibriumSolution solve_regime(const MarketParams& p, Regime regime) {
  switch (regime) {
    case Regime::Naive: return naive_equilibrium(p);
    case Regime::REE: return solve_ree_fixed_point(p, 1e-12, 2000);
    case Regime::FullyRevealing: return fully_revealing_price(p);
  }
  throw std::domain_error("solve_regime: unknown regime");
}

inline MarketParams with_group_size(const MarketParams& base, SweepGroup group, double size) {
  MarketParams q = base;
  switch (group) {
    case SweepGroup::Informed: q.n_informed = size; break;
    case SweepGroup::Uninformed: q.m_uninformed = size; break;
    case SweepGroup::Both:
      q.n_informed = size / 2.0;
      q.m_uninformed = size / 2.0;
      break;
  }
  return q;
}

}  // namespace detail

// Evaluates the chosen regime along a strictly increasing sweep of group sizes
// and fits the convergence order of the price toward its large-market limit.
inline LimitTable asymptotic_limits(const MarketParams& base, Regime regime, SweepGroup group,
                                    const std::vector<double>& sizes) {
  if (sizes.empty()) throw std::domain_error("asymptotic_limits: sizes must be non-empty");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (!(sizes[i] > sizes[i - 1])) {
      throw std::domain_error("asymptotic_limits: sizes must be strictly increasing");
    }
  }

  LimitTable table;
  table.regime = regime;
  table.group = group;

  for (double size : sizes) {
    const MarketParams q = detail::with_group_size(base, group, size);
    const EquilibriumSolution s = detail::solve_regime(q, regime);
    table.rows.push_back(
        {size, q.n_informed, q.m_uninformed, s.coeff_informed, s.coeff_noise, s.price});
  }

  // analytic limits where they are clean; otherwise evaluate at a huge mass
  if (regime == Regime::FullyRevealing) {
    table.limit_price = base.realized_signal;
  } else if (regime == Regime::Naive && group == SweepGroup::Uninformed) {
    table.limit_price = base.prior.mean();
  } else if (regime == Regime::Naive && group == SweepGroup::Informed) {
    table.limit_price =
        posterior(base.prior, base.signal_variance, base.realized_signal).mean();
  } else {
    const MarketParams q = detail::with_group_size(base, group, 1e15);
    table.limit_price = detail::solve_regime(q, regime).price;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const LimitRow& row : table.rows) {
    const double gap = std::abs(row.price - table.limit_price);
    if (gap <= 0.0) continue;
    const double x = std::log10(row.size);
    const double y = std::log10(gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  table.fitted_order = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx)
                              : std::numeric_limits<double>::quiet_NaN();
  return table;
}

}  // namespace dime
