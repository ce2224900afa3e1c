#pragma once

#include <cstdint>
#include <cstdio>
#include <deque>
#include <string>
#include <vector>

#include "dime/epoch.hpp"
#include "dime/error.hpp"
#include "dime/fees.hpp"
#include "dime/ledger.hpp"
#include "dime/pool.hpp"
#include "dime/scenario.hpp"
#include "dime/units.hpp"
#include "dime/vault.hpp"

namespace dime {

inline constexpr int kDaysPerMonth = 30;

struct PendingPurchase {
  std::string id;
  Micro fiat = 0;
  int available_day = 0;
};

struct MintEvent {
  std::string id;
  enum class Status { Minted, Deferred, Refused } status = Status::Minted;
  Micro tokens_to_user = 0;
  Micro tokens_to_team = 0;
  std::string reason;
};

// Append-only line log: day|operation|args|state-hash. Replaying the same
// script must reproduce this byte for byte.
class EventLog {
public:
  void append(int day, const std::string& op, const std::string& args, std::uint64_t hash) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    lines_.push_back(std::to_string(day) + "|" + op + "|" + args + "|" + buf);
  }
  const std::vector<std::string>& lines() const { return lines_; }
  std::string joined() const {
    std::string out;
    for (const auto& l : lines_) {
      out += l;
      out += '\n';
    }
    return out;
  }

private:
  std::vector<std::string> lines_;
};

struct EconomyConfig {
  Micro reference_price = kMicroPerUnit;
  FeeSchedule fees;
  SafeguardMode safeguard_mode = SafeguardMode::AutoRelease;
  bool entry_fee_to_vault = false;
};

// Single-writer state machine for the token economy: vault, supply ledger,
// liquidity pool, fee engine and safeguard, advanced one simulated day at a
// time. All mutations flow through here so the event log captures everything.
class Economy {
public:
  explicit Economy(EconomyConfig cfg) : cfg_(std::move(cfg)) { cfg_.fees.validate(); }

  const VaultState& vault() const { return vault_; }
  const SupplyLedger& ledger() const { return ledger_; }
  const PoolState& pool() const { return pool_; }
  const EconomyConfig& config() const { return cfg_; }
  Micro operator_fees() const { return operator_fees_; }
  const EventLog& log() const { return log_; }
  int last_day() const { return last_day_; }
  Micro reference_price() const { return cfg_.reference_price; }

  void bootstrap_supply(int day = 0) {
    bootstrap(vault_, ledger_, cfg_.reference_price, day);
    vault_.epoch_start_pledged = vault_.pledged_value();
    log_.append(day, "bootstrap", format_micro(kBootstrapTokens), state_hash());
  }

  void seed_pool(int day, const std::string& provider, Micro tokens, Micro quote) {
    create_pool(pool_, provider, tokens, quote);
    pool_.safeguard_mode = cfg_.safeguard_mode;
    log_.append(day, "seed_pool", format_micro(tokens) + "," + format_micro(quote), state_hash());
  }

  void submit_purchase(PendingPurchase p) { pending_.push_back(std::move(p)); }

  // One oracle day: verify which pending purchases have their cash in the
  // bank account, mint for those, defer the rest, then record the spot price.
  std::vector<MintEvent> daily_oracle_tick(int day) {
    if (day <= last_day_) throw state_error("daily_oracle_tick: day must increase");
    last_day_ = day;

    std::vector<MintEvent> events;
    std::deque<PendingPurchase> still_pending;
    while (!pending_.empty()) {
      PendingPurchase p = std::move(pending_.front());
      pending_.pop_front();
      MintEvent ev;
      ev.id = p.id;
      if (p.available_day > day) {
        ev.status = MintEvent::Status::Deferred;
        ev.reason = "fiat_not_present";
        log_.append(day, "defer", p.id, state_hash());
        still_pending.push_back(std::move(p));
      } else {
        const PurchaseOutcome out =
            process_primary_purchase(ledger_, vault_, p.fiat, cfg_.reference_price,
                                     to_ppm(cfg_.fees.entry_fee), day, operator_fees_,
                                     cfg_.entry_fee_to_vault);
        if (out.minted) {
          ev.status = MintEvent::Status::Minted;
          ev.tokens_to_user = out.tokens_to_user;
          ev.tokens_to_team = out.tokens_to_team;
          log_.append(day, "mint",
                      p.id + "," + format_micro(out.tokens_to_user) + "," +
                          format_micro(out.tokens_to_team),
                      state_hash());
        } else {
          ev.status = MintEvent::Status::Refused;
          ev.reason = out.refusal;
          log_.append(day, "refuse", p.id + "," + out.refusal, state_hash());
        }
      }
      events.push_back(std::move(ev));
    }
    pending_ = std::move(still_pending);

    if (pool_.live()) {
      record_spot_price(pool_, day);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", pool_.spot_price());
      log_.append(day, "price", buf, state_hash());
    }
    return events;
  }

  void apply_nav_return(int day, double a_return, double c_return) {
    advance_nav(vault_, a_return, c_return);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f,%.9f", a_return, c_return);
    log_.append(day, "nav", buf, state_hash());
  }

  void apply_allocate(int day, double cefi_fraction) {
    allocate_reserves(vault_, cefi_fraction);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", cefi_fraction);
    log_.append(day, "allocate", buf, state_hash());
  }

  Micro apply_swap(int day, SwapDirection direction, Micro amount_in) {
    const Micro out = amm_swap(pool_, amount_in, direction, to_ppm(cfg_.fees.swap_fee));
    log_.append(day, "swap",
                std::string(direction == SwapDirection::TokenIn ? "token_in" : "quote_in") + "," +
                    format_micro(amount_in) + "," + format_micro(out),
                state_hash());
    return out;
  }

  Micro apply_add_liquidity(int day, const std::string& provider, Micro tokens) {
    const Micro quote = add_liquidity(pool_, provider, tokens);
    log_.append(day, "add_liquidity", provider + "," + format_micro(tokens), state_hash());
    return quote;
  }

  void set_reference_price(int day, Micro price) {
    if (price <= 0) throw std::domain_error("set_reference_price: price must be > 0");
    cfg_.reference_price = price;
    log_.append(day, "reference_price", format_micro(price), state_hash());
  }

  void apply_release_safeguard(int day) {
    release_safeguard(pool_);
    log_.append(day, "release_safeguard", "", state_hash());
  }

  void log_note(int day, const std::string& op, const std::string& args) {
    log_.append(day, op, args, state_hash());
  }

  SafeguardDecision run_safeguard(int day) {
    const SafeguardDecision d = safeguard_check(pool_, day);
    if (d.changed) {
      log_.append(day, d.paused ? "pause" : "unpause", "", state_hash());
    }
    return d;
  }

  EpochReport close_month(int day) {
    const int month = ++months_closed_;
    EpochReport report = monthly_rewards(month, vault_, ledger_, pool_, cfg_.fees,
                                         cfg_.reference_price, mgmt_accrual_, operator_fees_, day);
    log_.append(day, "epoch",
                std::to_string(month) + "," + format_micro(report.rewards_minted) + "," +
                    format_micro(report.performance_fee) + "," +
                    format_micro(report.management_fee),
                state_hash());
    return report;
  }

  std::uint64_t state_hash() const {
    std::string s;
    s += format_micro(ledger_.circulating);
    s += '|';
    s += format_micro(ledger_.team_wallet);
    s += '|';
    s += format_micro(vault_.fiat);
    s += '|';
    s += format_micro(vault_.a_value);
    s += '|';
    s += format_micro(vault_.c_value);
    s += '|';
    s += format_micro(pool_.reserve_token);
    s += '|';
    s += format_micro(pool_.reserve_quote);
    s += '|';
    s += format_micro(pool_.total_shares);
    s += '|';
    s += pool_.paused ? '1' : '0';
    s += '|';
    s += format_micro(operator_fees_);
    return fnv1a(s);
  }

private:
  EconomyConfig cfg_;
  VaultState vault_;
  SupplyLedger ledger_;
  PoolState pool_;
  Micro operator_fees_ = 0;
  int last_day_ = -1;
  int months_closed_ = 0;
  ManagementFeeAccrual mgmt_accrual_;
  std::deque<PendingPurchase> pending_;
  EventLog log_;
};

struct DailyRow {
  int day = 0;
  Micro supply = 0;        // circulating tokens
  Micro team_wallet = 0;
  Micro pledged_value = 0;
  double spot_price = 0.0;
  bool paused = false;
  Micro operator_fees = 0;
};

struct SimulationResult {
  std::vector<DailyRow> daily;
  std::vector<EpochReport> epochs;
  std::string event_log;
  Economy economy;  // final state, for inspection
};

// Drives a full scenario: per day, investment returns and allocation first,
// then the oracle tick (mints + price record), then secondary-market activity,
// then the safeguard check, and a month close every 30th day.
inline SimulationResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  EconomyConfig cfg;
  cfg.reference_price = scenario.reference_price;
  cfg.fees = scenario.fees;
  cfg.safeguard_mode = scenario.safeguard_mode;
  cfg.entry_fee_to_vault = scenario.entry_fee_to_vault;

  Economy eco(cfg);
  if (scenario.bootstrap) eco.bootstrap_supply(0);
  if (scenario.pool) eco.seed_pool(0, scenario.pool->provider, scenario.pool->tokens,
                                   scenario.pool->quote);

  SimulationResult result{.daily = {}, .epochs = {}, .event_log = {}, .economy = std::move(eco)};
  Economy& economy = result.economy;

  std::size_t next_event = 0;
  for (int day = 0; day < scenario.days; ++day) {
    // pre-market: NAV movement, rebalancing, policy changes
    std::vector<const ScenarioEvent*> market_events;
    for (; next_event < scenario.events.size() && scenario.events[next_event].day == day;
         ++next_event) {
      const ScenarioEvent& e = scenario.events[next_event];
      if (e.nav_return) {
        economy.apply_nav_return(day, e.nav_return->a, e.nav_return->c);
      } else if (e.allocate) {
        economy.apply_allocate(day, e.allocate->cefi_fraction);
      } else if (e.set_reference_price) {
        economy.set_reference_price(day, *e.set_reference_price);
      } else if (e.release_safeguard) {
        economy.apply_release_safeguard(day);
      } else if (e.purchase) {
        economy.submit_purchase({e.purchase->id, e.purchase->fiat, e.purchase->available_day});
      } else {
        market_events.push_back(&e);
      }
    }

    economy.daily_oracle_tick(day);

    for (const ScenarioEvent* e : market_events) {
      if (e->swap) {
        try {
          economy.apply_swap(day, e->swap->direction, e->swap->amount);
        } catch (const policy_error&) {
          // scripted swap against a paused pool is dropped, not fatal
          economy.log_note(day, "swap_rejected", "paused");
        } catch (const dust_error&) {
          economy.log_note(day, "swap_rejected", "dust");
        }
      } else if (e->add_liquidity) {
        economy.apply_add_liquidity(day, e->add_liquidity->provider, e->add_liquidity->tokens);
      }
    }

    if (economy.pool().live()) economy.run_safeguard(day);

    if ((day + 1) % kDaysPerMonth == 0 && economy.pool().live()) {
      result.epochs.push_back(economy.close_month(day));
    }

    DailyRow row;
    row.day = day;
    row.supply = economy.ledger().circulating;
    row.team_wallet = economy.ledger().team_wallet;
    row.pledged_value = economy.vault().pledged_value();
    row.spot_price = economy.pool().live() ? economy.pool().spot_price() : 0.0;
    row.paused = economy.pool().paused;
    row.operator_fees = economy.operator_fees();
    result.daily.push_back(row);
  }

  result.event_log = economy.log().joined();
  return result;
}

}  // namespace dime
