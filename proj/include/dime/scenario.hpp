#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dime/error.hpp"
#include "dime/fees.hpp"
#include "dime/pool.hpp"
#include "dime/units.hpp"

namespace dime {

// One scripted scenario event. Exactly one of the payloads is active.
struct ScenarioEvent {
  int day = 0;

  struct Purchase {
    std::string id;
    Micro fiat = 0;
    int available_day = 0;  // when the wire lands in the vault's bank account
  };
  struct NavReturn {
    double a = 0.0;
    double c = 0.0;
  };
  struct Swap {
    SwapDirection direction = SwapDirection::QuoteIn;
    Micro amount = 0;
  };
  struct AddLiquidity {
    std::string provider;
    Micro tokens = 0;
  };
  struct Allocate {
    double cefi_fraction = 0.5;
  };

  std::optional<Purchase> purchase;
  std::optional<NavReturn> nav_return;
  std::optional<Swap> swap;
  std::optional<AddLiquidity> add_liquidity;
  std::optional<Allocate> allocate;
  std::optional<Micro> set_reference_price;
  std::optional<bool> release_safeguard;
};

// A complete simulation script: initial conditions, policy parameters, and the
// day-ordered event list. Amounts are micro-units internally; the JSON schema
// uses whole units.
struct Scenario {
  int days = 30;
  Micro reference_price = kMicroPerUnit;  // 1.0 money per token
  FeeSchedule fees;
  SafeguardMode safeguard_mode = SafeguardMode::AutoRelease;
  bool entry_fee_to_vault = false;
  bool bootstrap = true;

  struct PoolSeed {
    Micro tokens = 0;
    Micro quote = 0;
    std::string provider = "genesis";
  };
  std::optional<PoolSeed> pool;

  std::vector<ScenarioEvent> events;

  void validate() const {
    if (days < 1) throw validation_error("days", "must be >= 1");
    if (reference_price <= 0) throw validation_error("reference_price", "must be > 0");
    fees.validate();
    if (pool) {
      if (pool->tokens <= 0) throw validation_error("pool.tokens", "must be > 0");
      if (pool->quote <= 0) throw validation_error("pool.quote", "must be > 0");
      if (pool->provider.empty()) throw validation_error("pool.provider", "must not be empty");
    }
    int prev_day = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = events[i];
      const std::string path = "events[" + std::to_string(i) + "]";
      if (e.day < 0 || e.day >= days) throw validation_error(path + ".day", "outside the run");
      if (e.day < prev_day) throw validation_error(path + ".day", "events must be day-ordered");
      prev_day = e.day;
      const int payloads = static_cast<int>(e.purchase.has_value()) +
                           static_cast<int>(e.nav_return.has_value()) +
                           static_cast<int>(e.swap.has_value()) +
                           static_cast<int>(e.add_liquidity.has_value()) +
                           static_cast<int>(e.allocate.has_value()) +
                           static_cast<int>(e.set_reference_price.has_value()) +
                           static_cast<int>(e.release_safeguard.has_value());
      if (payloads != 1) throw validation_error(path, "must carry exactly one action");
      if (e.purchase) {
        if (e.purchase->fiat <= 0) throw validation_error(path + ".purchase.fiat", "must be > 0");
        if (e.purchase->id.empty()) throw validation_error(path + ".purchase.id", "must not be empty");
        if (e.purchase->available_day < e.day) {
          throw validation_error(path + ".purchase.available_day", "before the order day");
        }
      }
      if (e.nav_return && (!(e.nav_return->a > -1.0) || !(e.nav_return->c > -1.0) ||
                           !(e.nav_return->a <= 100.0) || !(e.nav_return->c <= 100.0))) {
        throw validation_error(path + ".nav_return", "returns must lie in (-1, 100]");
      }
      if (e.swap && e.swap->amount <= 0) {
        throw validation_error(path + ".swap.amount", "must be > 0");
      }
      if (e.swap && !pool) {
        throw validation_error(path + ".swap", "requires a pool section");
      }
      if (e.add_liquidity && e.add_liquidity->tokens <= 0) {
        throw validation_error(path + ".add_liquidity.tokens", "must be > 0");
      }
      if (e.add_liquidity && !pool) {
        throw validation_error(path + ".add_liquidity", "requires a pool section");
      }
      if (e.allocate &&
          (!(e.allocate->cefi_fraction >= 0.5) || !(e.allocate->cefi_fraction <= 1.0))) {
        throw validation_error(path + ".allocate.cefi_fraction", "must lie in [0.5, 1]");
      }
      if (e.set_reference_price && *e.set_reference_price <= 0) {
        throw validation_error(path + ".set_reference_price", "must be > 0");
      }
    }
  }
};

}  // namespace dime
