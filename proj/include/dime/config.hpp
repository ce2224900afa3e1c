#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dime/error.hpp"
#include "dime/market.hpp"
#include "dime/scenario.hpp"
#include "dime/units.hpp"

namespace dime {

// Parsing of the JSON parameter and scenario files. Unknown keys are rejected
// so a typo cannot silently fall back to a default.

namespace cfg_detail {

using nlohmann::json;

inline void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw validation_error(path, "must be an object");
}

inline void reject_unknown(const json& j, const std::string& path,
                           const std::vector<std::string>& known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw validation_error(path + "." + it.key(), "unknown field");
  }
}

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw validation_error(path, "must be a number");
  return j.get<double>();
}

inline double opt_number(const json& j, const char* key, double fallback,
                         const std::string& path) {
  if (!j.contains(key)) return fallback;
  return get_number(j.at(key), path + "." + key);
}

inline int opt_int(const json& j, const char* key, int fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw validation_error(path + "." + key, "must be an integer");
  return v.get<int>();
}

inline bool opt_bool(const json& j, const char* key, bool fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw validation_error(path + "." + key, "must be a boolean");
  return v.get<bool>();
}

inline std::string opt_string(const json& j, const char* key, std::string fallback,
                              const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) throw validation_error(path + "." + key, "must be a string");
  return v.get<std::string>();
}

}  // namespace cfg_detail

inline MarketParams market_params_from_json(const nlohmann::json& j,
                                            const std::string& path = "market") {
  using namespace cfg_detail;
  expect_object(j, path);
  reject_unknown(j, path,
                 {"n_informed", "m_uninformed", "z_noise", "risk_aversion", "prior_mean",
                  "prior_variance", "signal_variance", "noise_variance", "epsilon_variance",
                  "realized_signal", "realized_noise"});
  MarketParams defaults;
  MarketParams p = defaults;
  p.n_informed = opt_number(j, "n_informed", defaults.n_informed, path);
  p.m_uninformed = opt_number(j, "m_uninformed", defaults.m_uninformed, path);
  p.z_noise = opt_number(j, "z_noise", defaults.z_noise, path);
  p.risk_aversion = opt_number(j, "risk_aversion", defaults.risk_aversion, path);
  const double prior_mean = opt_number(j, "prior_mean", defaults.prior.mean(), path);
  const double prior_variance = opt_number(j, "prior_variance", defaults.prior.variance(), path);
  if (!(prior_variance > 0.0)) throw validation_error(path + ".prior_variance", "must be > 0");
  p.prior = Gaussian(prior_mean, prior_variance);
  p.signal_variance = opt_number(j, "signal_variance", defaults.signal_variance, path);
  p.noise_variance = opt_number(j, "noise_variance", defaults.noise_variance, path);
  p.epsilon_variance = opt_number(j, "epsilon_variance", defaults.epsilon_variance, path);
  p.realized_signal = opt_number(j, "realized_signal", defaults.realized_signal, path);
  p.realized_noise = opt_number(j, "realized_noise", defaults.realized_noise, path);
  try {
    p.validate();
  } catch (const validation_error& e) {
    throw validation_error(path + "." + e.field(), "invalid value");
  }
  return p;
}

inline nlohmann::json market_params_to_json(const MarketParams& p) {
  return nlohmann::json{{"n_informed", p.n_informed},
                        {"m_uninformed", p.m_uninformed},
                        {"z_noise", p.z_noise},
                        {"risk_aversion", p.risk_aversion},
                        {"prior_mean", p.prior.mean()},
                        {"prior_variance", p.prior.variance()},
                        {"signal_variance", p.signal_variance},
                        {"noise_variance", p.noise_variance},
                        {"epsilon_variance", p.epsilon_variance},
                        {"realized_signal", p.realized_signal},
                        {"realized_noise", p.realized_noise}};
}

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 1000;
};

struct EquilibriumConfig {
  MarketParams market;
  std::vector<Regime> regimes{Regime::Naive, Regime::REE, Regime::FullyRevealing};
  SolverOptions solver;
};

struct ConvergenceConfig {
  MarketParams market;
  Regime regime = Regime::Naive;
  std::vector<std::pair<double, double>> grid{{10.0, 100.0}};
  int replications = 1000;
  SolverOptions solver;
};

namespace cfg_detail {

inline Regime regime_from_string(const std::string& s, const std::string& path) {
  if (s == "naive") return Regime::Naive;
  if (s == "ree") return Regime::REE;
  if (s == "fully_revealing") return Regime::FullyRevealing;
  throw validation_error(path, "must be one of naive, ree, fully_revealing");
}

inline SolverOptions solver_from_json(const json& j, const std::string& path) {
  SolverOptions s;
  if (!j.is_object()) throw validation_error(path, "must be an object");
  reject_unknown(j, path, {"tol", "max_iter"});
  s.tol = opt_number(j, "tol", s.tol, path);
  s.max_iter = opt_int(j, "max_iter", s.max_iter, path);
  if (!(s.tol > 0.0)) throw validation_error(path + ".tol", "must be > 0");
  if (s.max_iter < 1) throw validation_error(path + ".max_iter", "must be >= 1");
  return s;
}

}  // namespace cfg_detail

inline EquilibriumConfig equilibrium_config_from_json(const nlohmann::json& j) {
  using namespace cfg_detail;
  expect_object(j, "config");
  reject_unknown(j, "config", {"market", "regimes", "solver"});
  EquilibriumConfig c;
  if (j.contains("market")) c.market = market_params_from_json(j.at("market"));
  if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"), "solver");
  if (j.contains("regimes")) {
    const json& r = j.at("regimes");
    if (!r.is_array() || r.empty()) throw validation_error("regimes", "must be a non-empty array");
    c.regimes.clear();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!r[i].is_string()) {
        throw validation_error("regimes[" + std::to_string(i) + "]", "must be a string");
      }
      c.regimes.push_back(
          regime_from_string(r[i].get<std::string>(), "regimes[" + std::to_string(i) + "]"));
    }
  }
  return c;
}

inline ConvergenceConfig convergence_config_from_json(const nlohmann::json& j) {
  using namespace cfg_detail;
  expect_object(j, "config");
  reject_unknown(j, "config", {"market", "regime", "grid", "replications", "solver"});
  ConvergenceConfig c;
  if (j.contains("market")) c.market = market_params_from_json(j.at("market"));
  if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"), "solver");
  c.regime = regime_from_string(opt_string(j, "regime", "naive", "config"), "regime");
  c.replications = opt_int(j, "replications", c.replications, "config");
  if (c.replications < 1) throw validation_error("replications", "must be >= 1");
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_array() || g.empty()) throw validation_error("grid", "must be a non-empty array");
    c.grid.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string path = "grid[" + std::to_string(i) + "]";
      if (!g[i].is_array() || g[i].size() != 2) {
        throw validation_error(path, "must be a [n, m] pair");
      }
      const double n = get_number(g[i][0], path + "[0]");
      const double m = get_number(g[i][1], path + "[1]");
      if (!(n >= 0.0) || !(m >= 0.0)) throw validation_error(path, "sizes must be >= 0");
      if (n == 0.0 && m == 0.0) throw validation_error(path, "cell has no traders");
      c.grid.emplace_back(n, m);
    }
  }
  return c;
}

inline nlohmann::json equilibrium_config_to_json(const EquilibriumConfig& c) {
  nlohmann::json regimes = nlohmann::json::array();
  for (Regime r : c.regimes) regimes.push_back(to_string(r));
  return nlohmann::json{{"market", market_params_to_json(c.market)},
                        {"regimes", regimes},
                        {"solver", {{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter}}}};
}

inline nlohmann::json convergence_config_to_json(const ConvergenceConfig& c) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& [n, m] : c.grid) grid.push_back(nlohmann::json::array({n, m}));
  return nlohmann::json{{"market", market_params_to_json(c.market)},
                        {"regime", to_string(c.regime)},
                        {"grid", grid},
                        {"replications", c.replications},
                        {"solver", {{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter}}}};
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  using namespace cfg_detail;
  expect_object(j, "scenario");
  reject_unknown(j, "scenario",
                 {"days", "reference_price", "entry_fee", "swap_fee", "management_fee_annual",
                  "performance_tiers", "safeguard_mode", "entry_fee_to_vault", "bootstrap",
                  "pool", "events"});
  Scenario s;
  s.days = opt_int(j, "days", s.days, "scenario");
  s.reference_price = to_micro(opt_number(j, "reference_price", 1.0, "scenario"));
  s.fees.entry_fee = opt_number(j, "entry_fee", s.fees.entry_fee, "scenario");
  s.fees.swap_fee = opt_number(j, "swap_fee", s.fees.swap_fee, "scenario");
  s.fees.management_fee_annual =
      opt_number(j, "management_fee_annual", s.fees.management_fee_annual, "scenario");
  if (j.contains("performance_tiers")) {
    const json& tiers = j.at("performance_tiers");
    if (!tiers.is_array() || tiers.empty()) {
      throw validation_error("performance_tiers", "must be a non-empty array");
    }
    s.fees.performance_tiers.clear();
    for (std::size_t i = 0; i < tiers.size(); ++i) {
      const std::string path = "performance_tiers[" + std::to_string(i) + "]";
      if (!tiers[i].is_array() || tiers[i].size() != 3) {
        throw validation_error(path, "must be [lower, upper|null, rate]");
      }
      PerformanceTier t;
      t.lower = get_number(tiers[i][0], path + "[0]");
      t.upper = tiers[i][1].is_null() ? std::numeric_limits<double>::infinity()
                                      : get_number(tiers[i][1], path + "[1]");
      t.rate = get_number(tiers[i][2], path + "[2]");
      s.fees.performance_tiers.push_back(t);
    }
  }
  const std::string mode = opt_string(j, "safeguard_mode", "auto", "scenario");
  if (mode == "auto") {
    s.safeguard_mode = SafeguardMode::AutoRelease;
  } else if (mode == "manual") {
    s.safeguard_mode = SafeguardMode::ManualRelease;
  } else {
    throw validation_error("safeguard_mode", "must be auto or manual");
  }
  s.entry_fee_to_vault = opt_bool(j, "entry_fee_to_vault", false, "scenario");
  s.bootstrap = opt_bool(j, "bootstrap", true, "scenario");
  if (j.contains("pool")) {
    const json& p = j.at("pool");
    expect_object(p, "pool");
    reject_unknown(p, "pool", {"tokens", "quote", "provider"});
    Scenario::PoolSeed seed;
    seed.tokens = to_micro(get_number(p.at("tokens"), "pool.tokens"));
    seed.quote = to_micro(get_number(p.at("quote"), "pool.quote"));
    seed.provider = opt_string(p, "provider", "genesis", "pool");
    s.pool = seed;
  }
  if (j.contains("events")) {
    const json& events = j.at("events");
    if (!events.is_array()) throw validation_error("events", "must be an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string path = "events[" + std::to_string(i) + "]";
      const json& e = events[i];
      expect_object(e, path);
      reject_unknown(e, path,
                     {"day", "purchase", "nav_return", "swap", "add_liquidity", "allocate",
                      "set_reference_price", "release_safeguard"});
      ScenarioEvent ev;
      ev.day = opt_int(e, "day", 0, path);
      if (e.contains("purchase")) {
        const json& p = e.at("purchase");
        expect_object(p, path + ".purchase");
        reject_unknown(p, path + ".purchase", {"id", "fiat", "available_day"});
        ScenarioEvent::Purchase pu;
        pu.id = opt_string(p, "id", "p" + std::to_string(i), path + ".purchase");
        pu.fiat = to_micro(get_number(p.at("fiat"), path + ".purchase.fiat"));
        pu.available_day = opt_int(p, "available_day", ev.day, path + ".purchase");
        ev.purchase = pu;
      }
      if (e.contains("nav_return")) {
        const json& n = e.at("nav_return");
        expect_object(n, path + ".nav_return");
        reject_unknown(n, path + ".nav_return", {"a", "c"});
        ev.nav_return = ScenarioEvent::NavReturn{opt_number(n, "a", 0.0, path + ".nav_return"),
                                                 opt_number(n, "c", 0.0, path + ".nav_return")};
      }
      if (e.contains("swap")) {
        const json& w = e.at("swap");
        expect_object(w, path + ".swap");
        reject_unknown(w, path + ".swap", {"direction", "amount"});
        ScenarioEvent::Swap sw;
        const std::string dir = opt_string(w, "direction", "quote_in", path + ".swap");
        if (dir == "quote_in") {
          sw.direction = SwapDirection::QuoteIn;
        } else if (dir == "token_in") {
          sw.direction = SwapDirection::TokenIn;
        } else {
          throw validation_error(path + ".swap.direction", "must be quote_in or token_in");
        }
        sw.amount = to_micro(get_number(w.at("amount"), path + ".swap.amount"));
        ev.swap = sw;
      }
      if (e.contains("add_liquidity")) {
        const json& a = e.at("add_liquidity");
        expect_object(a, path + ".add_liquidity");
        reject_unknown(a, path + ".add_liquidity", {"provider", "tokens"});
        ScenarioEvent::AddLiquidity al;
        al.provider = opt_string(a, "provider", "lp", path + ".add_liquidity");
        al.tokens = to_micro(get_number(a.at("tokens"), path + ".add_liquidity.tokens"));
        ev.add_liquidity = al;
      }
      if (e.contains("allocate")) {
        const json& a = e.at("allocate");
        expect_object(a, path + ".allocate");
        reject_unknown(a, path + ".allocate", {"cefi_fraction"});
        ev.allocate =
            ScenarioEvent::Allocate{get_number(a.at("cefi_fraction"), path + ".allocate.cefi_fraction")};
      }
      if (e.contains("set_reference_price")) {
        ev.set_reference_price =
            to_micro(get_number(e.at("set_reference_price"), path + ".set_reference_price"));
      }
      if (e.contains("release_safeguard")) {
        if (!e.at("release_safeguard").is_boolean()) {
          throw validation_error(path + ".release_safeguard", "must be a boolean");
        }
        ev.release_safeguard = e.at("release_safeguard").get<bool>();
      }
      s.events.push_back(std::move(ev));
    }
  }
  s.validate();
  return s;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error("config", std::string("JSON parse error: ") + e.what());
  }
}

}  // namespace dime
