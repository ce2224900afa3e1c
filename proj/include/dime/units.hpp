#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dime {

// Token and money amounts are int64 micro-units (6 decimals). All divisions
// round toward zero; remainders that matter are carried in dust accounts.
using Micro = std::int64_t;

inline constexpr Micro kMicroPerUnit = 1'000'000;
inline constexpr std::int64_t kPpmScale = 1'000'000;  // rates as parts per million
inline constexpr Micro kMaxCapMicro = 99'000'000'000LL * kMicroPerUnit;  // 99e9 whole tokens

// Hard ceiling for any single money or token account, far below the int64
// range so sums of a few accounts can never wrap.
inline constexpr Micro kMaxAccountMicro = 1'000'000'000'000'000'000LL;  // 1e12 whole units

inline Micro mul_div_floor(Micro value, std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::domain_error("mul_div_floor: denominator must be > 0");
  if (value < 0 || num < 0) throw std::domain_error("mul_div_floor: operands must be >= 0");
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(value) * static_cast<unsigned __int128>(num);
  const unsigned __int128 res = wide / static_cast<unsigned __int128>(den);
  if (res > 0x7fffffffffffffffULL) throw std::domain_error("mul_div_floor: result overflows");
  return static_cast<Micro>(res);
}

inline Micro mul_div_ceil(Micro value, std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::domain_error("mul_div_ceil: denominator must be > 0");
  if (value < 0 || num < 0) throw std::domain_error("mul_div_ceil: operands must be >= 0");
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(value) * static_cast<unsigned __int128>(num);
  const unsigned __int128 d = static_cast<unsigned __int128>(den);
  const unsigned __int128 res = (wide + d - 1) / d;
  if (res > 0x7fffffffffffffffULL) throw std::domain_error("mul_div_ceil: result overflows");
  return static_cast<Micro>(res);
}

inline Micro mul_ppm_floor(Micro value, std::int64_t ppm) {
  return mul_div_floor(value, ppm, kPpmScale);
}

inline Micro mul_ppm_ceil(Micro value, std::int64_t ppm) {
  return mul_div_ceil(value, ppm, kPpmScale);
}

inline std::int64_t to_ppm(double rate) {
  if (!std::isfinite(rate) || rate < 0.0 || rate > 1.0) {
    throw std::domain_error("to_ppm: rate must lie in [0, 1]");
  }
  return std::llround(rate * kPpmScale);
}

inline Micro to_micro(double whole_units) {
  if (!std::isfinite(whole_units)) throw std::domain_error("to_micro: amount must be finite");
  const double scaled = whole_units * static_cast<double>(kMicroPerUnit);
  if (std::abs(scaled) > static_cast<double>(kMaxAccountMicro)) {
    throw std::domain_error("to_micro: amount out of range");
  }
  return std::llround(scaled);
}

// Exact decimal rendering, e.g. 1250000 -> "1.250000".
inline std::string format_micro(Micro value) {
  const bool neg = value < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(value + 1)) + 1
                                : static_cast<std::uint64_t>(value);
  std::string whole = std::to_string(mag / kMicroPerUnit);
  std::string frac = std::to_string(mag % kMicroPerUnit);
  frac.insert(frac.begin(), 6 - frac.size(), '0');
  return (neg ? "-" : "") + whole + "." + frac;
}

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Integer square root of a 128-bit product; used for initial pool shares.
inline std::int64_t isqrt_product(Micro a, Micro b) {
  if (a < 0 || b < 0) throw std::domain_error("isqrt_product: operands must be >= 0");
  const unsigned __int128 n =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  if (n == 0) return 0;
  unsigned __int128 x = n;
  unsigned __int128 y = (x + 1) >> 1;
  while (y < x) {
    x = y;
    y = (x + n / x) >> 1;
  }
  return static_cast<std::int64_t>(x);
}

}  // namespace dime
