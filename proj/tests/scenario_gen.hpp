#pragma once

// Random scenario scripts and an invariant-checked driver, shared by the unit
// and acceptance suites. Violations are reported by throwing.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "dime/economy.hpp"

namespace testgen {

inline dime::Scenario random_scenario(std::uint64_t seed, int days) {
  using dime::ScenarioEvent;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  dime::Scenario s;
  s.days = days;
  s.bootstrap = true;
  s.pool = dime::Scenario::PoolSeed{10'000 * dime::kMicroPerUnit,
                                    10'000 * dime::kMicroPerUnit, "genesis"};
  int purchase_id = 0;
  for (int day = 0; day < days; ++day) {
    if (u(rng) < 0.15) {
      ScenarioEvent e;
      e.day = day;
      const dime::Micro fiat = static_cast<dime::Micro>((10.0 + 4990.0 * u(rng)) * 1e6);
      e.purchase = ScenarioEvent::Purchase{"u" + std::to_string(purchase_id++), fiat,
                                           day + static_cast<int>(u(rng) * 3.0)};
      s.events.push_back(e);
    }
    if (u(rng) < 0.30) {
      ScenarioEvent e;
      e.day = day;
      e.nav_return = ScenarioEvent::NavReturn{-0.02 + 0.045 * u(rng), -0.02 + 0.045 * u(rng)};
      s.events.push_back(e);
    }
    if (u(rng) < 0.25) {
      ScenarioEvent e;
      e.day = day;
      e.swap = ScenarioEvent::Swap{u(rng) < 0.5 ? dime::SwapDirection::QuoteIn
                                                : dime::SwapDirection::TokenIn,
                                   static_cast<dime::Micro>((1.0 + 49.0 * u(rng)) * 1e6)};
      s.events.push_back(e);
    }
    if (u(rng) < 0.10) {
      ScenarioEvent e;
      e.day = day;
      e.add_liquidity = ScenarioEvent::AddLiquidity{
          "lp" + std::to_string(static_cast<int>(u(rng) * 5.0)),
          static_cast<dime::Micro>((1.0 + 19.0 * u(rng)) * 1e6)};
      s.events.push_back(e);
    }
    if (u(rng) < 0.05) {
      ScenarioEvent e;
      e.day = day;
      e.allocate = ScenarioEvent::Allocate{0.5 + 0.5 * u(rng)};
      s.events.push_back(e);
    }
    if (u(rng) < 0.02) {
      ScenarioEvent e;
      e.day = day;
      e.set_reference_price = static_cast<dime::Micro>((0.5 + 1.5 * u(rng)) * 1e6);
      s.events.push_back(e);
    }
  }
  s.validate();
  return s;
}

namespace detail {

inline void fail(const std::string& what) { throw std::runtime_error("invariant violated: " + what); }

inline void check_state(const dime::Economy& eco, long ops_executed) {
  const auto& ledger = eco.ledger();
  const auto& vault = eco.vault();
  const auto& pool = eco.pool();

  if (ledger.total_minted() > ledger.max_cap) fail("supply cap exceeded");
  if (25 * ledger.team_wallet > ledger.total_minted()) fail("team wallet above 4% of supply");
  if (!ledger.replay_matches()) fail("ledger does not replay to its balances");
  if (vault.fiat < 0 || vault.a_value < 0 || vault.c_value < 0) fail("negative vault balance");
  if (vault.pledged_value() != vault.fiat + vault.a_value + vault.c_value) {
    fail("vault accounting identity broken");
  }
  // reporting consistency: units * NAV reconstructs the leg value
  if (vault.a_value > 0) {
    const double reconstructed = vault.a_units() * vault.a_nav * 1e6;
    if (std::abs(reconstructed - static_cast<double>(vault.a_value)) >
        1e-6 * static_cast<double>(vault.a_value) + 1.0) {
      fail("a-leg units*nav does not reconstruct the value");
    }
  }
  if (pool.live()) {
    dime::Micro share_sum = 0;
    for (const auto& [id, s] : pool.lp_shares) {
      if (s < 0) fail("negative LP share");
      share_sum += s;
    }
    if (share_sum != pool.total_shares) fail("LP share registry out of sync");
    if (pool.reserve_token <= 0 || pool.reserve_quote <= 0) fail("pool reserve drained");
  }
  if (dime::effective_circulating(ledger) > 0) {
    const double redemption = dime::redemption_value(vault, ledger);
    const double recon = redemption * static_cast<double>(dime::effective_circulating(ledger));
    const double allowance = static_cast<double>(ops_executed > 0 ? ops_executed : 1);
    if (std::abs(recon - static_cast<double>(vault.pledged_value())) > allowance) {
      fail("redemption value does not reconcile with the pledged reserves");
    }
  }
}

}  // namespace detail

// Drives the scenario through the public engine API in the same order as
// dime::run_scenario, checking the conservation invariants after every day and
// the constant-product invariant around every swap. Returns the day count.
inline int run_checked(const dime::Scenario& scenario) {
  dime::EconomyConfig cfg;
  cfg.reference_price = scenario.reference_price;
  cfg.fees = scenario.fees;
  cfg.safeguard_mode = scenario.safeguard_mode;
  cfg.entry_fee_to_vault = scenario.entry_fee_to_vault;

  dime::Economy eco(cfg);
  long ops = 0;
  if (scenario.bootstrap) {
    eco.bootstrap_supply(0);
    ++ops;
  }
  if (scenario.pool) {
    eco.seed_pool(0, scenario.pool->provider, scenario.pool->tokens, scenario.pool->quote);
    ++ops;
  }

  std::size_t next_event = 0;
  for (int day = 0; day < scenario.days; ++day) {
    std::vector<const dime::ScenarioEvent*> market_events;
    for (; next_event < scenario.events.size() && scenario.events[next_event].day == day;
         ++next_event) {
      const dime::ScenarioEvent& e = scenario.events[next_event];
      if (e.nav_return) {
        eco.apply_nav_return(day, e.nav_return->a, e.nav_return->c);
        ++ops;
      } else if (e.allocate) {
        eco.apply_allocate(day, e.allocate->cefi_fraction);
        ++ops;
      } else if (e.set_reference_price) {
        eco.set_reference_price(day, *e.set_reference_price);
        ++ops;
      } else if (e.release_safeguard) {
        eco.apply_release_safeguard(day);
        ++ops;
      } else if (e.purchase) {
        eco.submit_purchase({e.purchase->id, e.purchase->fiat, e.purchase->available_day});
      } else {
        market_events.push_back(&e);
      }
    }

    ops += static_cast<long>(eco.daily_oracle_tick(day).size()) + 1;

    for (const dime::ScenarioEvent* e : market_events) {
      if (e->swap) {
        const bool was_paused = eco.pool().paused;
        const auto k_before = eco.pool().invariant_k();
        try {
          eco.apply_swap(day, e->swap->direction, e->swap->amount);
          ++ops;
          if (was_paused) detail::fail("swap executed while paused");
          if (eco.pool().invariant_k() < k_before) detail::fail("constant product decreased");
          if (cfg.fees.swap_fee > 0.0 && eco.pool().invariant_k() <= k_before) {
            detail::fail("constant product did not grow despite a fee");
          }
        } catch (const dime::policy_error&) {
          eco.log_note(day, "swap_rejected", "paused");
          if (!was_paused) detail::fail("unpaused swap rejected as paused");
          if (eco.pool().invariant_k() != k_before) detail::fail("rejected swap moved reserves");
        } catch (const dime::dust_error&) {
          eco.log_note(day, "swap_rejected", "dust");
          if (eco.pool().invariant_k() != k_before) detail::fail("dust swap moved reserves");
        }
      } else if (e->add_liquidity) {
        eco.apply_add_liquidity(day, e->add_liquidity->provider, e->add_liquidity->tokens);
        ++ops;
      }
    }

    if (eco.pool().live()) eco.run_safeguard(day);
    if ((day + 1) % dime::kDaysPerMonth == 0 && eco.pool().live()) {
      const dime::EpochReport report = eco.close_month(day);
      ++ops;
      dime::Micro distributed = 0;
      for (const auto& [id, amount] : report.distribution) distributed += amount;
      if (distributed != report.rewards_minted) detail::fail("reward distribution not conserved");
      if (report.rewards_minted > 0 && report.nav_return <= 0.0) {
        detail::fail("rewards minted in a month without gain");
      }
    }

    detail::check_state(eco, ops);
  }

  // the checked drive and the library runner must tell the same story
  const dime::SimulationResult reference = dime::run_scenario(scenario);
  if (reference.event_log != eco.log().joined()) {
    detail::fail("checked drive diverged from the scenario runner");
  }
  return scenario.days;
}

}  // namespace testgen
