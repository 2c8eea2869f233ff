#pragma once

// Which residues of x modulo a small prime power are compatible with x being
// a pseudosquare or pseudocube. Everything downstream (wheels, sieve tables,
// secondary filters) is derived from these tables.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"
#include "primes.hpp"

namespace pseudosieve {

enum class Mode { square, cube };

inline std::string_view to_string(Mode m) { return m == Mode::square ? "square" : "cube"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "square") return Mode::square;
  if (s == "cube") return Mode::cube;
  throw InvalidArgument("unknown mode '" + std::string(s) + "' (expected square or cube)");
}

// Residue sets are computed by enumerating squares/cubes of units rather than
// through Euler's criterion, so they stay independent of legendre_symbol.
//
// Supported moduli:
//   square: 8 (x = 1 mod 8), odd primes (x a nonzero QR)
//   cube:   2 (x odd), 9 (x = +-1 mod 9), primes q = 1 mod 3 (nonzero cubic
//           residue), primes q = 2 mod 3 (x nonzero)
inline std::vector<std::uint8_t> admissible_x_table(Mode mode, u64 f) {
  if (f < 2 || f > (u64{1} << 32)) throw InvalidArgument("unsupported filter modulus " + std::to_string(f));
  std::vector<std::uint8_t> table(f, 0);
  if (mode == Mode::square) {
    if (f == 8) {
      table[1] = 1;
      return table;
    }
    if (f == 2 || !is_prime(f)) throw InvalidArgument("square mode supports 8 and odd primes, got " + std::to_string(f));
    for (u64 s = 1; s < f; ++s) table[static_cast<u64>(static_cast<u128>(s) * s % f)] = 1;
    return table;
  }
  if (f == 2) {
    table[1] = 1;
    return table;
  }
  if (f == 9) {
    table[1] = table[8] = 1;
    return table;
  }
  if (f == 3 || !is_prime(f)) throw InvalidArgument("cube mode supports 2, 9 and primes other than 3, got " + std::to_string(f));
  if (f % 3 == 2) {
    for (u64 s = 1; s < f; ++s) table[s] = 1;
    return table;
  }
  for (u64 s = 1; s < f; ++s) table[static_cast<u64>(static_cast<u128>(s) * s % f * s % f)] = 1;
  return table;
}

inline bool x_residue_admissible(Mode mode, u64 f, u64 r) { return admissible_x_table(mode, f).at(r % f) != 0; }

// True for the moduli that the pseudo-power definition constrains at a prime
// level >= the modulus' prime.
inline bool is_filter_modulus(Mode mode, u64 f) {
  if (mode == Mode::square) return f == 8 || (f > 2 && is_prime(f));
  return f == 2 || f == 9 || (f > 3 && is_prime(f));
}

// The prime whose level first makes f a constraint.
inline u64 filter_modulus_prime(u64 f) { return prime_power_base(f); }

}  // namespace pseudosieve
