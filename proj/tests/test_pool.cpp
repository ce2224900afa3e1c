#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dime/pool.hpp"
#include "dime/units.hpp"
#include "oracles.hpp"

using dime::Micro;
using dime::PoolState;
using dime::SwapDirection;

namespace {
constexpr Micro kUnit = dime::kMicroPerUnit;

PoolState symmetric_pool(Micro reserve) {
  PoolState pool;
  dime::create_pool(pool, "genesis", reserve, reserve);
  return pool;
}
}  // namespace

TEST_CASE("pool creation seeds shares and price") {
  PoolState pool = symmetric_pool(100 * kUnit);
  CHECK(pool.live());
  CHECK(pool.total_shares == 100 * kUnit);
  CHECK(pool.lp_shares.at("genesis") == pool.total_shares);
  CHECK(pool.spot_price() == 1.0);
  CHECK_THROWS_AS(dime::create_pool(pool, "x", kUnit, kUnit), dime::state_error);
}

TEST_CASE("tiny swaps trade at the spot price ratio") {
  PoolState pool;
  dime::create_pool(pool, "genesis", 4'000'000 * kUnit, 1'000'000 * kUnit);
  const Micro in = 100;  // vanishing against the reserves
  const Micro out = dime::amm_swap(pool, in, SwapDirection::TokenIn, 0);
  // quote per token approaches reserve_quote / reserve_token = 0.25
  CHECK(static_cast<double>(out) / in == Catch::Approx(0.25).margin(0.02));
}

TEST_CASE("symmetric pool with no fee returns half the reserve for a full-reserve input") {
  PoolState pool = symmetric_pool(100 * kUnit);
  const Micro out = dime::amm_swap(pool, 100 * kUnit, SwapDirection::QuoteIn, 0);
  CHECK(out == 50 * kUnit);
  CHECK(pool.reserve_quote == 200 * kUnit);
  CHECK(pool.reserve_token == 50 * kUnit);
}

TEST_CASE("constant product never decreases across random swaps") {
  PoolState pool = symmetric_pool(1'000'000 * kUnit);
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<Micro> amount(1, 20'000 * kUnit);
  const std::int64_t fee_ppm = dime::to_ppm(0.0003);
  for (int i = 0; i < 100'000; ++i) {
    const auto before = pool.invariant_k();
    const SwapDirection dir = rng() % 2 ? SwapDirection::TokenIn : SwapDirection::QuoteIn;
    try {
      dime::amm_swap(pool, amount(rng), dir, fee_ppm);
    } catch (const dime::dust_error&) {
      continue;
    }
    CHECK(pool.invariant_k() > before);  // strict growth: a fee was charged
  }
}

TEST_CASE("zero-fee swaps still never shrink the product") {
  PoolState pool = symmetric_pool(1'000 * kUnit);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Micro> amount(1, 50 * kUnit);
  for (int i = 0; i < 20'000; ++i) {
    const auto before = pool.invariant_k();
    try {
      dime::amm_swap(pool, amount(rng), rng() % 2 ? SwapDirection::TokenIn : SwapDirection::QuoteIn,
                     0);
    } catch (const dime::dust_error&) {
      continue;
    }
    CHECK(pool.invariant_k() >= before);
  }
}

TEST_CASE("paused pool rejects swaps with the safeguard reason") {
  PoolState pool = symmetric_pool(100 * kUnit);
  pool.paused = true;
  try {
    dime::amm_swap(pool, kUnit, SwapDirection::QuoteIn, 0);
    FAIL("expected policy_error");
  } catch (const dime::policy_error& e) {
    CHECK(std::string(e.what()).find("safeguard") != std::string::npos);
  }
}

TEST_CASE("dust swaps are rejected") {
  PoolState pool;
  dime::create_pool(pool, "genesis", 1'000'000'000 * kUnit, 10 * kUnit);
  // one micro of token in buys far less than one micro of quote
  CHECK_THROWS_AS(dime::amm_swap(pool, 1, SwapDirection::TokenIn, 0), dime::dust_error);
  CHECK_THROWS_AS(dime::amm_swap(pool, 0, SwapDirection::QuoteIn, 0), std::domain_error);
}

TEST_CASE("liquidity adds keep the share registry consistent") {
  PoolState pool = symmetric_pool(1'000 * kUnit);
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<Micro> amount(kUnit, 100 * kUnit);
  for (int i = 0; i < 50; ++i) {
    const std::string provider = "lp" + std::to_string(i % 5);
    dime::add_liquidity(pool, provider, amount(rng));
    Micro sum = 0;
    for (const auto& [id, s] : pool.lp_shares) sum += s;
    CHECK(sum == pool.total_shares);
  }
}

TEST_CASE("safeguard pauses strictly below 70% of the weekly maximum") {
  PoolState pool = symmetric_pool(100 * kUnit);
  auto set_history = [&](const std::vector<double>& prices) {
    pool.spot_price_history.clear();
    for (std::size_t i = 0; i < prices.size(); ++i) {
      pool.spot_price_history.push_back({static_cast<int>(i), prices[i]});
    }
  };

  SECTION("flat prices never pause") {
    set_history({1, 1, 1, 1, 1, 1, 1, 1});
    const auto d = dime::safeguard_check(pool, 7);
    CHECK_FALSE(d.paused);
  }

  SECTION("a 31% drop within the window pauses; 29% does not") {
    set_history({1.0, 1.0, 1.0, 0.69});
    CHECK(dime::safeguard_check(pool, 3).paused);
    pool.paused = false;
    set_history({1.0, 1.0, 1.0, 0.71});
    CHECK_FALSE(dime::safeguard_check(pool, 3).paused);
  }

  SECTION("exactly 70% of the maximum does not pause") {
    set_history({1.0, 0.7});
    CHECK_FALSE(dime::safeguard_check(pool, 1).paused);
    set_history({1.0, std::nextafter(0.7, 0.0)});
    CHECK(dime::safeguard_check(pool, 1).paused);
  }

  SECTION("the window forgets prices older than seven days") {
    set_history({1.0, 0.69, 0.69, 0.69, 0.69, 0.69, 0.69, 0.69});
    // on day 6 the old high is still inside the window
    CHECK(dime::safeguard_check(pool, 6).paused);
    pool.paused = false;
    // on day 7 it has scrolled out and the flat tail clears the condition
    CHECK_FALSE(dime::safeguard_check(pool, 7).paused);
  }

  SECTION("auto mode releases when the condition clears") {
    set_history({1.0, 0.6});
    CHECK(dime::safeguard_check(pool, 1).paused);
    pool.spot_price_history.push_back({8, 0.65});  // window max is now 0.65
    const auto d = dime::safeguard_check(pool, 8);
    CHECK_FALSE(d.paused);
    CHECK(d.changed);
  }

  SECTION("manual mode stays paused until released") {
    pool.safeguard_mode = dime::SafeguardMode::ManualRelease;
    set_history({1.0, 0.6});
    CHECK(dime::safeguard_check(pool, 1).paused);
    pool.spot_price_history.push_back({8, 0.65});
    CHECK(dime::safeguard_check(pool, 8).paused);
    dime::release_safeguard(pool);
    CHECK_FALSE(pool.paused);
  }

  SECTION("no recorded price is a state error") {
    pool.spot_price_history.clear();
    CHECK_THROWS_AS(dime::safeguard_check(pool, 0), dime::state_error);
  }
}

TEST_CASE("safeguard agrees with the sliding-window oracle on random walks") {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> step(0.0, 0.08);
  std::vector<double> prices;
  double p = 1.0;
  for (int day = 0; day < 3000; ++day) {
    p = std::max(0.05, p * std::exp(step(rng)));
    prices.push_back(p);
  }
  const std::vector<bool> expect = oracles::sliding_window_pause(prices);

  PoolState pool = symmetric_pool(100 * kUnit);
  pool.spot_price_history.clear();
  for (int day = 0; day < static_cast<int>(prices.size()); ++day) {
    pool.spot_price_history.push_back({day, prices[day]});
    const auto d = dime::safeguard_check(pool, day);
    REQUIRE(d.paused == expect[static_cast<std::size_t>(day)]);
  }
}
