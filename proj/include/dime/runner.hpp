#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dime/config.hpp"
#include "dime/economy.hpp"
#include "dime/equilibrium.hpp"
#include "dime/error.hpp"
#include "dime/study.hpp"
#include "dime/table.hpp"

namespace dime {

enum class Command { Equilibrium, Convergence, Tokenomics };
enum class OutputFormat { Csv, JsonLines };

inline constexpr std::uint64_t kDefaultSeed = 1729;

// Exit codes: 0 success, 1 IO failure, 2 validation/parse failure,
// 3 numerical non-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::Equilibrium;
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = kDefaultSeed;
  OutputFormat format = OutputFormat::Csv;
};

namespace run_detail {

// The only environment override: a directory prefixed to relative output paths.
inline std::string resolve_out_path(const std::string& out_path) {
  if (out_path.empty() || out_path.front() == '/') return out_path;
  if (const char* dir = std::getenv("DIME_OUT_DIR"); dir && *dir) {
    std::string d(dir);
    if (d.back() != '/') d += '/';
    return d + out_path;
  }
  return out_path;
}

inline void write_table(const ResultTable& table, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open output file " + path);
  if (format == OutputFormat::Csv) {
    write_csv(table, out);
  } else {
    write_jsonl(table, out);
  }
  if (!out) throw std::ios_base::failure("failed writing " + path);
}

inline ResultTable equilibrium_table(const EquilibriumConfig& cfg) {
  ResultTable t;
  t.columns = {"regime",       "price",    "coeff_informed", "coeff_noise", "cond_mean",
               "cond_var",     "residual", "var_p",          "ie",          "var_p_valid"};
  for (Regime regime : cfg.regimes) {
    EquilibriumSolution s;
    double var_p = std::numeric_limits<double>::quiet_NaN();
    switch (regime) {
      case Regime::Naive: {
        s = naive_equilibrium(cfg.market);
        const double lam_prior = 1.0 / cfg.market.prior.variance();
        const double lam_signal = 1.0 / cfg.market.signal_variance;
        const double signal_weight = lam_signal / (lam_prior + lam_signal);
        const double signal_term = s.coeff_informed * signal_weight;
        const double noise_term = s.coeff_noise * cfg.market.z_noise;
        var_p = signal_term * signal_term *
                    (cfg.market.prior.variance() + cfg.market.signal_variance) +
                noise_term * noise_term * cfg.market.noise_variance;
        break;
      }
      case Regime::REE: {
        s = solve_ree_fixed_point(cfg.market, cfg.solver.tol, cfg.solver.max_iter);
        var_p = ree_price_variance(s.coeff_informed, s.coeff_noise, cfg.market);
        break;
      }
      case Regime::FullyRevealing: {
        s = fully_revealing_price(cfg.market);
        var_p = fully_revealing_price_variance(cfg.market);
        break;
      }
    }
    const bool var_valid = var_p > 0.0;
    t.rows.push_back({std::string(to_string(regime)), s.price, s.coeff_informed, s.coeff_noise,
                      s.conditional_mean, s.conditional_variance, s.residual, var_p,
                      var_valid ? informational_efficiency(var_p)
                                : std::numeric_limits<double>::quiet_NaN(),
                      var_valid});
  }
  return t;
}

inline ResultTable convergence_table(const ConvergenceConfig& cfg, std::uint64_t seed) {
  const StudyTable study =
      run_convergence_study(cfg.market, cfg.regime, cfg.grid, cfg.replications, seed);
  ResultTable t;
  t.columns = {"N",     "M",          "price",   "theta1",      "theta2",  "var_p",
               "ie",    "price_analytic", "var_p_analytic", "ie_analytic", "mc_se", "price_gap",
               "var_gap"};
  for (const StudyRow& row : study.rows) {
    MarketParams q = cfg.market;
    q.n_informed = row.n_informed;
    q.m_uninformed = row.m_uninformed;
    double theta1 = std::numeric_limits<double>::quiet_NaN();
    double theta2 = std::numeric_limits<double>::quiet_NaN();
    switch (cfg.regime) {
      case Regime::Naive: {
        const NaiveCoefficients c = naive_coefficients(q);
        theta1 = c.informed_weight;
        theta2 = c.noise_impact;
        break;
      }
      case Regime::REE: {
        const EquilibriumSolution s =
            solve_ree_fixed_point(q, cfg.solver.tol, cfg.solver.max_iter);
        theta1 = s.coeff_informed;
        theta2 = s.coeff_noise;
        break;
      }
      case Regime::FullyRevealing: {
        const EquilibriumSolution s = fully_revealing_price(q);
        theta1 = s.coeff_informed;
        theta2 = s.coeff_noise;
        break;
      }
    }
    t.rows.push_back({row.n_informed, row.m_uninformed, row.sample_mean_price, theta1, theta2,
                      row.sample_var_price, row.sample_ie, row.analytic_mean_price,
                      row.analytic_var_price, row.analytic_ie, row.mc_standard_error,
                      row.mean_gap, row.var_gap});
  }
  return t;
}

inline ResultTable tokenomics_table(const SimulationResult& sim) {
  ResultTable t;
  t.columns = {"day", "supply", "pledged_value", "spot_price", "paused", "team_wallet",
               "operator_fees"};
  for (const DailyRow& row : sim.daily) {
    t.rows.push_back({static_cast<std::int64_t>(row.day), RawNumber{format_micro(row.supply)},
                      RawNumber{format_micro(row.pledged_value)}, row.spot_price, row.paused,
                      RawNumber{format_micro(row.team_wallet)},
                      RawNumber{format_micro(row.operator_fees)}});
  }
  return t;
}

}  // namespace run_detail

// Loads, validates and executes one command; returns the process exit code.
// Writes the result table to out_path (plus "<out_path>.events" for tokenomics
// runs) and a one-line summary to `summary`.
inline int run(const RunConfig& rc, std::ostream& summary = std::cout,
               std::ostream& diagnostics = std::cerr) {
  const std::string out_path = run_detail::resolve_out_path(rc.out_path);
  try {
    const nlohmann::json j = load_json_file(rc.config_path);
    switch (rc.command) {
      case Command::Equilibrium: {
        const EquilibriumConfig cfg = equilibrium_config_from_json(j);
        const ResultTable t = run_detail::equilibrium_table(cfg);
        run_detail::write_table(t, rc.format, out_path);
        summary << "equilibrium: " << t.rows.size() << " regimes -> " << rc.out_path << "\n";
        break;
      }
      case Command::Convergence: {
        const ConvergenceConfig cfg = convergence_config_from_json(j);
        const ResultTable t = run_detail::convergence_table(cfg, rc.seed);
        run_detail::write_table(t, rc.format, out_path);
        summary << "convergence: " << t.rows.size() << " cells, " << cfg.replications
                << " replications, seed " << rc.seed << " -> " << rc.out_path << "\n";
        break;
      }
      case Command::Tokenomics: {
        const Scenario scenario = scenario_from_json(j);
        const SimulationResult sim = run_scenario(scenario);
        const ResultTable t = run_detail::tokenomics_table(sim);
        run_detail::write_table(t, rc.format, out_path);
        std::ofstream events(out_path + ".events", std::ios::binary);
        if (!events) throw std::ios_base::failure("cannot open " + out_path + ".events");
        events << sim.event_log;
        summary << "tokenomics: " << sim.daily.size() << " days, " << sim.epochs.size()
                << " epochs -> " << rc.out_path << "\n";
        break;
      }
    }
    return kExitOk;
  } catch (const convergence_error& e) {
    diagnostics << "numerical error: " << e.what() << " (best residual " << e.best_residual()
                << ")\n";
    return kExitNumerical;
  } catch (const std::ios_base::failure& e) {
    diagnostics << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const validation_error& e) {
    diagnostics << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    diagnostics << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace dime
