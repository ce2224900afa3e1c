#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dime/error.hpp"
#include "dime/units.hpp"
#include "dime/vault.hpp"

namespace dime {

enum class MintKind { User, Team, Reward };

inline const char* to_string(MintKind k) {
  switch (k) {
    case MintKind::User: return "user";
    case MintKind::Team: return "team";
    case MintKind::Reward: return "reward";
  }
  return "unknown";
}

struct MintRecord {
  int day = 0;
  Micro amount = 0;
  MintKind kind = MintKind::User;
};

// Append-only token supply ledger. The team premium wallet may never exceed 4%
// of the total supply, and total supply never exceeds the hard cap.
struct SupplyLedger {
  Micro circulating = 0;  // user- and reward-minted tokens
  Micro team_wallet = 0;
  Micro max_cap = kMaxCapMicro;
  std::vector<MintRecord> mint_history;

  Micro total_minted() const { return circulating + team_wallet; }

  Micro cumulative_user_minted() const {
    Micro sum = 0;
    for (const auto& r : mint_history) {
      if (r.kind == MintKind::User) sum += r.amount;
    }
    return sum;
  }

  // Team tokens vest linearly with cumulative user mints and are fully vested
  // when user mints reach the user share (96%) of a fully minted supply.
  Micro vested_team() const {
    const Micro denom = mul_div_floor(max_cap, 96, 100);
    if (denom == 0) return team_wallet;
    const Micro users = cumulative_user_minted();
    if (users >= denom) return team_wallet;
    return mul_div_floor(team_wallet, users, denom);
  }

  bool replay_matches() const {
    Micro circ = 0;
    Micro team = 0;
    for (const auto& r : mint_history) {
      (r.kind == MintKind::Team ? team : circ) += r.amount;
    }
    return circ == circulating && team == team_wallet;
  }
};

inline constexpr Micro kBootstrapTokens = 250'000LL * kMicroPerUnit;

// First mint: the founder deposit funds the vault and creates the initial
// supply at the reference price, with no entry fee and no team premium.
inline void bootstrap(VaultState& vault, SupplyLedger& ledger, Micro reference_price,
                      int day = 0) {
  if (!ledger.mint_history.empty() || ledger.total_minted() != 0) {
    throw state_error("bootstrap: ledger is not empty");
  }
  if (reference_price <= 0) throw std::domain_error("bootstrap: reference price must be > 0");
  const Micro deposit = mul_div_floor(kBootstrapTokens, reference_price, kMicroPerUnit);
  if (deposit > kMaxAccountMicro - vault.fiat) {
    throw std::domain_error("bootstrap: deposit exceeds the account ceiling");
  }
  vault.fiat += deposit;
  ledger.circulating += kBootstrapTokens;
  ledger.mint_history.push_back({day, kBootstrapTokens, MintKind::User});
}

struct PurchaseOutcome {
  bool minted = false;
  Micro tokens_to_user = 0;
  Micro tokens_to_team = 0;
  Micro net_fiat = 0;
  Micro fee_fiat = 0;
  std::string refusal;  // non-empty when the mint was refused
};

// Primary purchase: entry fee first, then the user mint at the reference
// price, then the team premium on the user's minted amount, clamped so the
// team wallet never exceeds 4% of total supply. A mint that would break the
// hard cap is refused with no state change.
inline PurchaseOutcome process_primary_purchase(SupplyLedger& ledger, VaultState& vault,
                                                Micro fiat_in, Micro reference_price,
                                                std::int64_t entry_fee_ppm, int day,
                                                Micro& operator_fees,
                                                bool entry_fee_to_vault = false) {
  if (fiat_in <= 0) throw std::domain_error("process_primary_purchase: fiat_in must be > 0");
  if (reference_price <= 0) {
    throw std::domain_error("process_primary_purchase: reference price must be > 0");
  }
  if (entry_fee_ppm < 0 || entry_fee_ppm >= kPpmScale) {
    throw std::domain_error("process_primary_purchase: entry fee out of range");
  }

  PurchaseOutcome out;
  out.fee_fiat = mul_ppm_floor(fiat_in, entry_fee_ppm);
  out.net_fiat = fiat_in - out.fee_fiat;
  out.tokens_to_user = mul_div_floor(out.net_fiat, kMicroPerUnit, reference_price);
  if (out.tokens_to_user == 0) {
    throw std::domain_error("process_primary_purchase: purchase too small to mint");
  }

  // 4% premium on the user mint, clamped so 24 * team <= circulating holds
  const Micro circ_after_user = ledger.circulating + out.tokens_to_user;
  const Micro team_room = circ_after_user / 24 - ledger.team_wallet;
  Micro team = mul_div_floor(out.tokens_to_user, 4, 100);
  if (team > team_room) team = team_room > 0 ? team_room : 0;
  out.tokens_to_team = team;

  if (ledger.total_minted() + out.tokens_to_user + out.tokens_to_team > ledger.max_cap) {
    out.minted = false;
    out.tokens_to_user = 0;
    out.tokens_to_team = 0;
    out.refusal = "max_cap";
    return out;
  }
  if (vault.fiat > kMaxAccountMicro - fiat_in) {
    throw std::domain_error("process_primary_purchase: vault balance would exceed the ceiling");
  }

  ledger.circulating += out.tokens_to_user;
  ledger.mint_history.push_back({day, out.tokens_to_user, MintKind::User});
  if (out.tokens_to_team > 0) {
    ledger.team_wallet += out.tokens_to_team;
    ledger.mint_history.push_back({day, out.tokens_to_team, MintKind::Team});
  }
  vault.fiat += out.net_fiat;
  if (entry_fee_to_vault) {
    vault.fiat += out.fee_fiat;
  } else {
    operator_fees += out.fee_fiat;
  }
  out.minted = true;
  return out;
}

// Tokens that participate in a last-resort redemption: everything in
// circulation plus the vested part of the team wallet.
inline Micro effective_circulating(const SupplyLedger& ledger) {
  return ledger.circulating + ledger.vested_team();
}

// Last-resort redemption value in money per token.
inline double redemption_value(const VaultState& vault, const SupplyLedger& ledger) {
  const Micro circ = effective_circulating(ledger);
  if (circ <= 0) throw std::domain_error("redemption_value: nothing in circulation");
  return static_cast<double>(vault.pledged_value()) / static_cast<double>(circ);
}

}  // namespace dime
