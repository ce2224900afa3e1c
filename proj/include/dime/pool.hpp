#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dime/error.hpp"
#include "dime/units.hpp"

namespace dime {

enum class SwapDirection { TokenIn, QuoteIn };

// What happens once the safeguard pause condition clears: release automatically
// or stay paused until an explicit release.
enum class SafeguardMode { AutoRelease, ManualRelease };

struct PricePoint {
  int day = 0;
  double price = 0.0;
};

// Constant-product pool. Swap fees stay in the reserves, so the product of the
// reserves never decreases across a swap.
struct PoolState {
  Micro reserve_token = 0;
  Micro reserve_quote = 0;
  std::map<std::string, Micro> lp_shares;
  Micro total_shares = 0;
  bool paused = false;
  SafeguardMode safeguard_mode = SafeguardMode::AutoRelease;
  std::vector<PricePoint> spot_price_history;

  bool live() const { return reserve_token > 0 && reserve_quote > 0; }

  double spot_price() const {
    return static_cast<double>(reserve_quote) / static_cast<double>(reserve_token);
  }

  unsigned __int128 invariant_k() const {
    return static_cast<unsigned __int128>(reserve_token) *
           static_cast<unsigned __int128>(reserve_quote);
  }
};

inline void create_pool(PoolState& pool, const std::string& provider, Micro tokens, Micro quote) {
  if (pool.live() || pool.total_shares != 0) throw state_error("create_pool: pool already live");
  if (tokens <= 0 || quote <= 0) throw std::domain_error("create_pool: reserves must be > 0");
  if (tokens > kMaxAccountMicro || quote > kMaxAccountMicro) {
    throw std::domain_error("create_pool: reserves exceed the account ceiling");
  }
  pool.reserve_token = tokens;
  pool.reserve_quote = quote;
  const Micro shares = isqrt_product(tokens, quote);
  pool.lp_shares[provider] = shares;
  pool.total_shares = shares;
}

// Proportional deposit keyed by the token side; returns the quote amount taken.
inline Micro add_liquidity(PoolState& pool, const std::string& provider, Micro tokens) {
  if (!pool.live()) throw state_error("add_liquidity: pool is not live");
  if (tokens <= 0) throw std::domain_error("add_liquidity: tokens must be > 0");
  if (tokens > kMaxAccountMicro - pool.reserve_token) {
    throw std::domain_error("add_liquidity: reserve would exceed the account ceiling");
  }
  const Micro quote = mul_div_ceil(tokens, pool.reserve_quote, pool.reserve_token);
  const Micro shares = mul_div_floor(tokens, pool.total_shares, pool.reserve_token);
  pool.reserve_token += tokens;
  pool.reserve_quote += quote;
  pool.lp_shares[provider] += shares;
  pool.total_shares += shares;
  return quote;
}

// Constant-product swap. The fee is rounded up and retained by the pool; the
// output is rounded down. Both roundings favour the reserves, so k never
// decreases and strictly grows whenever a fee is charged.
inline Micro amm_swap(PoolState& pool, Micro amount_in, SwapDirection direction,
                      std::int64_t fee_ppm) {
  if (!pool.live()) throw state_error("amm_swap: pool is not live");
  if (pool.paused) throw policy_error("amm_swap: pool paused by safeguard policy");
  if (amount_in <= 0) throw std::domain_error("amm_swap: amount_in must be > 0");
  if (fee_ppm < 0 || fee_ppm >= kPpmScale) throw std::domain_error("amm_swap: fee out of range");

  Micro& reserve_in =
      direction == SwapDirection::TokenIn ? pool.reserve_token : pool.reserve_quote;
  Micro& reserve_out =
      direction == SwapDirection::TokenIn ? pool.reserve_quote : pool.reserve_token;

  if (amount_in > kMaxAccountMicro - reserve_in) {
    throw std::domain_error("amm_swap: reserve would exceed the account ceiling");
  }
  const Micro fee = fee_ppm == 0 ? 0 : mul_ppm_ceil(amount_in, fee_ppm);
  const Micro effective_in = amount_in - fee;
  if (effective_in <= 0) throw dust_error("amm_swap: amount consumed entirely by the fee");
  const Micro out = mul_div_floor(reserve_out, effective_in, reserve_in + effective_in);
  if (out == 0) throw dust_error("amm_swap: output rounds to zero");

  reserve_in += amount_in;
  reserve_out -= out;
  return out;
}

inline void record_spot_price(PoolState& pool, int day) {
  if (!pool.live()) throw state_error("record_spot_price: pool is not live");
  pool.spot_price_history.push_back({day, pool.spot_price()});
}

struct SafeguardDecision {
  bool paused = false;
  bool changed = false;
  double window_max = 0.0;
  double today_price = 0.0;
};

// Pauses the pool when today's spot price has fallen below 70% of the maximum
// over the trailing 7-day window (today inclusive). The threshold is strict:
// exactly 0.7 * max does not pause. Auto mode releases as soon as the
// condition clears; manual mode waits for release_safeguard.
inline SafeguardDecision safeguard_check(PoolState& pool, int day) {
  if (pool.spot_price_history.empty()) {
    throw state_error("safeguard_check: no recorded prices");
  }
  SafeguardDecision d;
  bool have_today = false;
  for (auto it = pool.spot_price_history.rbegin(); it != pool.spot_price_history.rend(); ++it) {
    if (it->day > day) continue;
    if (it->day < day - 6) break;
    if (!have_today) {
      d.today_price = it->price;  // most recent record in the window
      have_today = true;
    }
    if (it->price > d.window_max) d.window_max = it->price;
  }
  if (!have_today) throw state_error("safeguard_check: no price recorded in the window");

  const bool breach = d.today_price < 0.7 * d.window_max;
  const bool was_paused = pool.paused;
  if (breach) {
    pool.paused = true;
  } else if (pool.safeguard_mode == SafeguardMode::AutoRelease) {
    pool.paused = false;
  }
  d.paused = pool.paused;
  d.changed = pool.paused != was_paused;
  return d;
}

inline void release_safeguard(PoolState& pool) { pool.paused = false; }

}  // namespace dime
