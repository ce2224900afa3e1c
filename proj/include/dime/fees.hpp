#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "dime/error.hpp"
#include "dime/units.hpp"

namespace dime {

struct PerformanceTier {
  double lower = 0.0;  // inclusive
  double upper = 0.0;  // exclusive; +inf for the top tier
  double rate = 0.0;
};

struct FeeSchedule {
  double swap_fee = 0.0003;
  double entry_fee = 0.05;
  double management_fee_annual = 0.02;
  std::vector<PerformanceTier> performance_tiers{
      {0.0, 0.09, 0.10},
      {0.09, 0.20, 0.15},
      {0.20, std::numeric_limits<double>::infinity(), 0.25},
  };

  void validate() const {
    if (!(swap_fee >= 0.0 && swap_fee < 1.0)) {
      throw validation_error("swap_fee", "must lie in [0, 1)");
    }
    if (!(entry_fee >= 0.0 && entry_fee < 1.0)) {
      throw validation_error("entry_fee", "must lie in [0, 1)");
    }
    if (!(management_fee_annual >= 0.0 && management_fee_annual < 1.0)) {
      throw validation_error("management_fee_annual", "must lie in [0, 1)");
    }
    if (performance_tiers.empty()) {
      throw validation_error("performance_tiers", "must not be empty");
    }
    if (performance_tiers.front().lower != 0.0) {
      throw validation_error("performance_tiers", "first tier must start at 0");
    }
    for (std::size_t i = 0; i < performance_tiers.size(); ++i) {
      const auto& t = performance_tiers[i];
      if (!(t.upper > t.lower)) {
        throw validation_error("performance_tiers", "tier bounds must be increasing");
      }
      if (!(t.rate >= 0.0 && t.rate <= 1.0)) {
        throw validation_error("performance_tiers", "tier rate must lie in [0, 1]");
      }
      if (i + 1 < performance_tiers.size() &&
          performance_tiers[i + 1].lower != t.upper) {
        throw validation_error("performance_tiers", "tiers must be contiguous");
      }
    }
    if (!std::isinf(performance_tiers.back().upper)) {
      throw validation_error("performance_tiers", "last tier must be unbounded");
    }
  }

  // Bracket selection on the monthly return; tiers are left-closed, and the
  // selected rate applies to the whole monthly gain (non-marginal).
  double performance_rate(double monthly_return) const {
    if (monthly_return < 0.0) return 0.0;
    for (const auto& t : performance_tiers) {
      if (monthly_return >= t.lower && monthly_return < t.upper) return t.rate;
    }
    return performance_tiers.back().rate;
  }
};

// Accrues the pro-rata monthly management fee with an exact remainder carry, so
// twelve monthly charges on a constant reserve sum to the annual rate within
// one micro-unit instead of drifting by one micro-unit per month.
class ManagementFeeAccrual {
public:
  Micro accrue_month(Micro reserve_value, std::int64_t annual_ppm) {
    if (reserve_value < 0) throw std::domain_error("accrue_month: reserve must be >= 0");
    const unsigned __int128 denom =
        static_cast<unsigned __int128>(kPpmScale) * 12u;
    unsigned __int128 numer = static_cast<unsigned __int128>(reserve_value) *
                                  static_cast<unsigned __int128>(annual_ppm) +
                              carry_;
    const Micro fee = static_cast<Micro>(numer / denom);
    carry_ = numer % denom;
    return fee;
  }

private:
  unsigned __int128 carry_ = 0;
};

}  // namespace dime
