#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace pseudosieve {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u128 kU128Max = ~u128{0};

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline bool checked_mul(u128 a, u128 b, u128& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

inline bool checked_add(u128 a, u128 b, u128& out) {
  return !__builtin_add_overflow(a, b, &out);
}

// Parses a nonnegative integer written either in plain decimal ("196265095009")
// or in scientific shorthand ("7.5e24", "2e11", "1E6"). The shorthand must
// denote an integer exactly; "1.25e1" is rejected.
inline u128 parse_u128(std::string_view text) {
  auto fail = [&](const char* why) -> u128 {
    throw InvalidArgument("cannot parse integer '" + std::string(text) + "': " + why);
  };
  if (text.empty()) return fail("empty");
  std::size_t epos = text.find_first_of("eE");
  std::string_view mant = text.substr(0, epos);
  long long exponent = 0;
  if (epos != std::string_view::npos) {
    std::string_view ex = text.substr(epos + 1);
    if (!ex.empty() && ex.front() == '+') ex.remove_prefix(1);
    if (ex.empty() || ex.size() > 4) return fail("bad exponent");
    for (char c : ex) {
      if (c < '0' || c > '9') return fail("bad exponent");
      exponent = exponent * 10 + (c - '0');
    }
  }
  std::string digits;
  long long frac = 0;
  bool seen_point = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_point || epos == std::string_view::npos) return fail("unexpected '.'");
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac;
    } else {
      return fail("unexpected character");
    }
  }
  if (digits.empty()) return fail("no digits");
  // Drop trailing fractional zeros so "2.50e1" behaves like "2.5e1".
  while (frac > 0 && digits.back() == '0') {
    digits.pop_back();
    --frac;
  }
  if (frac > exponent) return fail("not an integer");
  long long zeros = exponent - frac;
  u128 v = 0;
  for (char c : digits) {
    if (!checked_mul(v, 10, v) || !checked_add(v, static_cast<u128>(c - '0'), v))
      return fail("out of 128-bit range");
  }
  for (long long i = 0; i < zeros; ++i) {
    if (!checked_mul(v, 10, v)) return fail("out of 128-bit range");
  }
  return v;
}

inline u64 parse_u64(std::string_view text) {
  u128 v = parse_u128(text);
  if (v > UINT64_MAX) throw InvalidArgument("value '" + std::string(text) + "' exceeds 64 bits");
  return static_cast<u64>(v);
}

}  // namespace pseudosieve
