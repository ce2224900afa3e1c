#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dime/error.hpp"
#include "dime/fees.hpp"
#include "dime/ledger.hpp"
#include "dime/pool.hpp"
#include "dime/units.hpp"
#include "dime/vault.hpp"

namespace dime {

struct EpochReport {
  int month = 0;
  double nav_return = 0.0;
  Micro performance_fee = 0;
  Micro management_fee = 0;
  Micro rewards_minted = 0;
  bool reward_clamped = false;  // reward mint hit the remaining hard-cap room
  std::map<std::string, Micro> distribution;
};

namespace detail {

// Largest-remainder apportionment of `total` across the share registry, so the
// per-provider amounts sum to `total` exactly. Ties break by provider id.
inline std::map<std::string, Micro> apportion_by_shares(const std::map<std::string, Micro>& shares,
                                                        Micro share_sum, Micro total) {
  std::map<std::string, Micro> out;
  if (total <= 0 || share_sum <= 0) return out;
  struct Piece {
    const std::string* id;
    Micro base;
    unsigned __int128 remainder;
  };
  std::vector<Piece> pieces;
  pieces.reserve(shares.size());
  Micro assigned = 0;
  for (const auto& [id, s] : shares) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(total) * static_cast<unsigned __int128>(s);
    const Micro base = static_cast<Micro>(wide / static_cast<unsigned __int128>(share_sum));
    pieces.push_back({&id, base, wide % static_cast<unsigned __int128>(share_sum)});
    assigned += base;
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    return *a.id < *b.id;
  });
  Micro leftover = total - assigned;
  for (auto& p : pieces) {
    Micro extra = leftover > 0 ? 1 : 0;
    leftover -= extra;
    if (p.base + extra > 0) out[*p.id] = p.base + extra;
  }
  return out;
}

}  // namespace detail

// Month-end close: measure the NAV return accumulated by the vault over the
// epoch, take the performance fee (bracket rate on the whole gain) and the
// pro-rata management fee, mint rewards against the remaining gain at the
// reference price, and hand them to liquidity providers by share. Months with
// no gain mint nothing but still pay the management fee.
inline EpochReport monthly_rewards(int month, VaultState& vault, SupplyLedger& ledger,
                                   PoolState& pool, const FeeSchedule& fees,
                                   Micro reference_price, ManagementFeeAccrual& accrual,
                                   Micro& operator_fees, int day) {
  if (!pool.live()) throw state_error("monthly_rewards: pool is not live");
  if (reference_price <= 0) {
    throw std::domain_error("monthly_rewards: reference price must be > 0");
  }

  EpochReport report;
  report.month = month;

  const Micro gain = vault.epoch_nav_gain;
  const Micro base = vault.epoch_start_pledged;
  report.nav_return = base > 0 ? static_cast<double>(gain) / static_cast<double>(base) : 0.0;

  report.management_fee =
      accrual.accrue_month(vault.pledged_value(), to_ppm(fees.management_fee_annual));
  if (gain > 0 && report.nav_return > 0.0) {
    report.performance_fee = mul_ppm_floor(gain, to_ppm(fees.performance_rate(report.nav_return)));
  }
  operator_fees += deduct_from_vault(vault, report.performance_fee + report.management_fee);

  if (gain > 0 && report.nav_return > 0.0) {
    const Micro basis =
        std::max<Micro>(gain - report.performance_fee - report.management_fee, 0);
    Micro rewards = mul_div_floor(basis, kMicroPerUnit, reference_price);
    const Micro cap_room = ledger.max_cap - ledger.total_minted();
    if (rewards > cap_room) {
      rewards = cap_room > 0 ? cap_room : 0;
      report.reward_clamped = true;
    }
    if (rewards > 0) {
      report.distribution = detail::apportion_by_shares(pool.lp_shares, pool.total_shares, rewards);
      report.rewards_minted = rewards;
      ledger.circulating += rewards;
      ledger.mint_history.push_back({day, rewards, MintKind::Reward});
    }
  }

  vault.epoch_nav_gain = 0;
  vault.epoch_start_pledged = vault.pledged_value();
  return report;
}

}  // namespace dime
