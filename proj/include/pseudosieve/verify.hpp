#pragma once

// The pseudosquare / pseudocube conditions at a prime level p, checked
// directly on x:
//
//   square: x = 1 (mod 8); (x/q) = 1 for every odd prime q <= p; x not a square.
//   cube:   x = +-1 (mod 9); x^((q-1)/3) = 1 (mod q) for primes q <= p with
//           q = 1 (mod 3); gcd(x, q) = 1 for every prime q <= p; x not a cube.

#include <cstdint>
#include <vector>

#include "int128.hpp"
#include "modarith.hpp"
#include "mode.hpp"
#include "primes.hpp"

namespace pseudosieve {

namespace detail {

inline const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = primes_up_to(1 << 16);
  return primes;
}

inline bool square_condition(u128 x, u64 q) { return q == 2 || legendre_symbol(x, q) == 1; }

inline bool cube_condition(u128 x, u64 q) {
  if (x % q == 0) return false;
  return q % 3 != 1 || is_cubic_residue(x, q);
}

inline bool level_condition(Mode mode, u128 x, u64 q) {
  return mode == Mode::square ? square_condition(x, q) : cube_condition(x, q);
}

}  // namespace detail

inline bool verify_pseudo(Mode mode, u128 x, u64 p_max) {
  if (x == 0) return false;
  if (mode == Mode::square) {
    if (x % 8 != 1) return false;
  } else {
    u64 r = static_cast<u64>(x % 9);
    if (r != 1 && r != 8) return false;
  }
  std::vector<u64> large;
  if (p_max > detail::small_primes().back()) large = primes_up_to(p_max);
  for (u64 q : large.empty() ? detail::small_primes() : large) {
    if (q > p_max) break;
    if (!detail::level_condition(mode, x, q)) return false;
  }
  return !is_perfect_power(x, mode == Mode::square ? 2 : 3);
}

inline bool verify_pseudosquare(u128 x, u64 p_max) { return verify_pseudo(Mode::square, x, p_max); }

inline bool verify_pseudocube(u128 x, u64 p_max) { return verify_pseudo(Mode::cube, x, p_max); }

// Largest prime level p at which x satisfies the definition, given that it is
// already known to hold at p_max (which must be prime). Scans primes past
// p_max until one fails; capped at 2^16.
inline u64 verified_level(Mode mode, u128 x, u64 p_max) {
  const auto& ps = detail::small_primes();
  u64 level = p_max;
  for (u64 q : ps) {
    if (q <= p_max) continue;
    if (!detail::level_condition(mode, x, q)) break;
    level = q;
  }
  return level;
}

}  // namespace pseudosieve
