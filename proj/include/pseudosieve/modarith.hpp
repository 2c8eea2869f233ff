#pragma once

// Word-sized modular arithmetic. Moduli are below 2^64; products are formed
// in 128 bits so no intermediate ever overflows.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <type_traits>

#include "errors.hpp"
#include "int128.hpp"

namespace pseudosieve {

template <typename T>
concept WideInteger = std::is_integral_v<T> || std::is_same_v<T, u128> || std::is_same_v<T, i128>;

// Reduces any integer (signed, unsigned or 128-bit) into [0, m).
template <WideInteger T>
constexpr u64 reduce(T a, u64 m) {
  if constexpr (std::is_same_v<T, i128> || (std::is_integral_v<T> && std::is_signed_v<T>)) {
    i128 r = static_cast<i128>(a) % static_cast<i128>(m);
    if (r < 0) r += m;
    return static_cast<u64>(r);
  } else {
    return static_cast<u64>(static_cast<u128>(a) % m);
  }
}

// A value together with the modulus it lives in. 0 <= value < modulus.
class ResidueClass {
 public:
  ResidueClass(u64 value, u64 modulus) : modulus_(modulus) {
    if (modulus == 0) throw InvalidModulus("residue class modulus must be positive");
    value_ = value % modulus;
  }

  u64 value() const { return value_; }
  u64 modulus() const { return modulus_; }

  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;

 private:
  u64 value_;
  u64 modulus_;
};

inline u64 mulmod(u64 a, u64 b, u64 m) {
  if (m == 0) throw InvalidModulus("mulmod: modulus is zero");
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 addmod(u64 a, u64 b, u64 m) {
  u128 s = static_cast<u128>(a) + b;
  return static_cast<u64>(s % m);
}

inline u64 submod(u64 a, u64 b, u64 m) {
  a %= m;
  b %= m;
  return a >= b ? a - b : a + (m - b);
}

inline u64 powmod(u64 a, u64 e, u64 m) {
  if (m == 0) throw InvalidModulus("powmod: modulus is zero");
  if (m == 1) return 0;
  u64 base = a % m;
  u64 result = 1;
  while (e != 0) {
    if (e & 1) result = static_cast<u64>(static_cast<u128>(result) * base % m);
    base = static_cast<u64>(static_cast<u128>(base) * base % m);
    e >>= 1;
  }
  return result;
}

// Euler's criterion. p must be an odd prime; primality is the caller's
// responsibility.
template <WideInteger T>
int legendre_symbol(T a, u64 p) {
  if (p < 3 || p % 2 == 0) throw InvalidArgument("legendre_symbol: p must be an odd prime, got " + std::to_string(p));
  u64 r = reduce(a, p);
  if (r == 0) return 0;
  return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// a^((q-1)/3) == 1 (mod q) for a prime q = 1 (mod 3). Multiples of q are not
// cubic residues here.
template <WideInteger T>
bool is_cubic_residue(T a, u64 q) {
  if (q % 3 != 1) throw InvalidArgument("is_cubic_residue: q must be 1 mod 3, got " + std::to_string(q));
  u64 r = reduce(a, q);
  if (r == 0) return false;
  return powmod(r, (q - 1) / 3, q) == 1;
}

// Inverse of a modulo m via the extended Euclidean algorithm.
inline u64 mod_inverse(u64 a, u64 m) {
  if (m == 0) throw InvalidModulus("mod_inverse: modulus is zero");
  if (m == 1) return 0;
  i128 old_r = a % m, r = m;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    i128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) {
    throw NotInvertible("mod_inverse: " + std::to_string(a) + " is not invertible modulo " + std::to_string(m));
  }
  i128 inv = old_s % static_cast<i128>(m);
  if (inv < 0) inv += m;
  return static_cast<u64>(inv);
}

inline u64 gcd_u64(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct NthRoot {
  u128 root;
  bool exact;
};

namespace detail {

// base^n, or false if it does not fit in 128 bits.
inline bool checked_pow(u128 base, unsigned n, u128& out) {
  u128 acc = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (!checked_mul(acc, base, acc)) return false;
  }
  out = acc;
  return true;
}

}  // namespace detail

// floor(x^(1/n)) for x < 2^128. A long double estimate seeds the root; the
// integer correction loops make it exact.
inline NthRoot integer_nth_root(u128 x, unsigned n) {
  if (n == 0) throw InvalidArgument("integer_nth_root: n must be positive");
  if (n == 1 || x < 2) return {x, true};
  long double approx = std::pow(static_cast<long double>(x), 1.0L / n);
  u128 r = approx < 1.0L ? 0 : static_cast<u128>(approx);
  u128 p;
  // Step down while r^n > x (or overflows).
  while (!detail::checked_pow(r, n, p) || p > x) --r;
  // Step up while (r+1)^n <= x.
  while (detail::checked_pow(r + 1, n, p) && p <= x) ++r;
  detail::checked_pow(r, n, p);
  return {r, p == x};
}

inline bool is_perfect_power(u128 x, unsigned n) { return integer_nth_root(x, n).exact; }

}  // namespace pseudosieve
