#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"

namespace pseudosieve {

// Sieve of Eratosthenes; all primes <= limit in ascending order.
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

// If n = p^k with p prime and k >= 1, returns p; otherwise 0.
inline u64 prime_power_base(u64 n) {
  if (n < 2) return 0;
  u64 p = 0;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return n;
  while (n % p == 0) n /= p;
  return n == 1 ? p : 0;
}

// n-th prime, 1-based: nth_prime(1) == 2.
inline u64 nth_prime(std::size_t n) {
  if (n == 0) throw InvalidArgument("nth_prime: n must be >= 1");
  u64 limit = 64;
  for (;;) {
    auto ps = primes_up_to(limit);
    if (ps.size() >= n) return ps[n - 1];
    limit *= 2;
  }
}

// n-th prime congruent to 1 mod 3, 1-based: nth_prime_1mod3(1) == 7.
inline u64 nth_prime_1mod3(std::size_t n) {
  if (n == 0) throw InvalidArgument("nth_prime_1mod3: n must be >= 1");
  u64 limit = 64;
  for (;;) {
    std::size_t seen = 0;
    for (u64 p : primes_up_to(limit)) {
      if (p % 3 == 1 && ++seen == n) return p;
    }
    limit *= 2;
  }
}

}  // namespace pseudosieve
