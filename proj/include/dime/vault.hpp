#pragma once

#include <cmath>
#include <cstdint>

#include "dime/error.hpp"
#include "dime/units.hpp"

namespace dime {

// Collateral reserves: a fiat balance plus two invested legs. Leg market values
// are the integer ground truth; per-unit NAVs are kept alongside for reporting,
// with unit counts derived as value / NAV so the accounting identity
// pledged = fiat + units_a * nav_a + units_c * nav_c holds by construction.
struct VaultState {
  Micro fiat = 0;
  Micro a_value = 0;  // traditional-strategy leg
  Micro c_value = 0;  // crypto-strategy leg, capped at 50% of invested reserves
  double a_nav = 1.0;
  double c_nav = 1.0;

  // epoch bookkeeping for the monthly rewards flow
  Micro epoch_nav_gain = 0;
  Micro epoch_start_pledged = 0;

  Micro pledged_value() const { return fiat + a_value + c_value; }
  Micro invested_value() const { return a_value + c_value; }

  double a_units() const {
    return a_nav > 0.0 ? static_cast<double>(a_value) / kMicroPerUnit / a_nav : 0.0;
  }
  double c_units() const {
    return c_nav > 0.0 ? static_cast<double>(c_value) / kMicroPerUnit / c_nav : 0.0;
  }
};

// Converts the whole fiat balance into the two legs so that the traditional leg
// ends up holding target_cefi_fraction of the invested reserves. Pure asset
// swap: the pledged value is unchanged to the micro-unit.
inline void allocate_reserves(VaultState& vault, double target_cefi_fraction) {
  if (!(target_cefi_fraction >= 0.5 && target_cefi_fraction <= 1.0)) {
    throw policy_error("allocate_reserves: traditional leg must hold at least 50% of reserves");
  }
  const std::int64_t target_ppm = to_ppm(target_cefi_fraction);
  const Micro invested = vault.invested_value() + vault.fiat;
  // ceil keeps the crypto leg at or below its cap after integer rounding
  const Micro a_new = mul_ppm_ceil(invested, target_ppm);
  vault.a_value = a_new > invested ? invested : a_new;
  vault.c_value = invested - vault.a_value;
  vault.fiat = 0;
}

// Applies one period of investment returns to the legs. Returns are quantized
// to 1e-9 so the evolution is integer-exact and replayable; the resulting
// gain or loss is accumulated for the epoch rewards computation.
inline void advance_nav(VaultState& vault, double a_return, double c_return) {
  constexpr std::int64_t kNano = 1'000'000'000;
  if (!(a_return > -1.0) || !(c_return > -1.0)) {
    throw std::domain_error("advance_nav: returns must be > -1");
  }
  const std::int64_t a_nano = std::llround(a_return * kNano);
  const std::int64_t c_nano = std::llround(c_return * kNano);
  if (a_nano <= -kNano || c_nano <= -kNano) {
    throw std::domain_error("advance_nav: returns must be > -1");
  }
  const Micro a_old = vault.a_value;
  const Micro c_old = vault.c_value;
  vault.a_value = mul_div_floor(vault.a_value, kNano + a_nano, kNano);
  vault.c_value = mul_div_floor(vault.c_value, kNano + c_nano, kNano);
  if (vault.a_value > kMaxAccountMicro || vault.c_value > kMaxAccountMicro) {
    throw std::domain_error("advance_nav: reserve value exceeds the account ceiling");
  }
  vault.a_nav *= 1.0 + static_cast<double>(a_nano) / kNano;
  vault.c_nav *= 1.0 + static_cast<double>(c_nano) / kNano;
  vault.epoch_nav_gain += (vault.a_value - a_old) + (vault.c_value - c_old);
}

// Deducts an amount from the vault, fiat first and then the legs; returns what
// could actually be taken.
inline Micro deduct_from_vault(VaultState& vault, Micro amount) {
  if (amount < 0) throw std::domain_error("deduct_from_vault: amount must be >= 0");
  Micro remaining = amount;
  for (Micro* leg : {&vault.fiat, &vault.a_value, &vault.c_value}) {
    const Micro take = remaining < *leg ? remaining : *leg;
    *leg -= take;
    remaining -= take;
    if (remaining == 0) break;
  }
  return amount - remaining;
}

}  // namespace dime
