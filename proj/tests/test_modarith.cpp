#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "pseudosieve/modarith.hpp"
#include "pseudosieve/primes.hpp"

using namespace pseudosieve;
using boost::multiprecision::cpp_int;

namespace {

// Schoolbook 64x64 -> 128 product on 32-bit limbs, reduced by binary long
// division. Independent of the compiler's 128-bit arithmetic.
u64 mulmod_oracle(u64 a, u64 b, u64 m) {
  const u64 mask = 0xffffffffULL;
  u64 a0 = a & mask, a1 = a >> 32, b0 = b & mask, b1 = b >> 32;
  u64 p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
  u64 mid = (p00 >> 32) + (p01 & mask) + (p10 & mask);
  u64 lo = (p00 & mask) | (mid << 32);
  u64 hi = p11 + (p01 >> 32) + (p10 >> 32) + (mid >> 32);
  u64 r = 0;
  for (int i = 127; i >= 0; --i) {
    u64 bit = i >= 64 ? (hi >> (i - 64)) & 1 : (lo >> i) & 1;
    bool carry = r >> 63;
    r = (r << 1) | bit;
    if (carry || r >= m) r -= m;
  }
  return r;
}

}  // namespace

TEST(Mulmod, SmallCases) {
  EXPECT_EQ(mulmod(0, 5, 7), 0u);
  EXPECT_EQ(mulmod(1, 5, 7), 5u);
}

TEST(Mulmod, WideOperands) {
  const u64 a = u64{1} << 63;
  const u64 m = ~u64{0};
  EXPECT_EQ(mulmod_oracle(a, a, m), u64{1} << 62);
  EXPECT_EQ(mulmod(a, a, m), mulmod_oracle(a, a, m));
}

TEST(Mulmod, ZeroModulusThrows) { EXPECT_THROW(mulmod(1, 1, 0), InvalidModulus); }

TEST(Mulmod, RandomAgainstSchoolbook) {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 100000; ++i) {
    u64 m = rng() | 1;
    if (i % 3 == 0) m >>= rng() % 63;
    if (m == 0) m = 1;
    u64 a = rng() % m, b = rng() % m;
    ASSERT_EQ(mulmod(a, b, m), mulmod_oracle(a, b, m)) << a << " " << b << " " << m;
  }
}

TEST(Powmod, Examples) {
  EXPECT_EQ(powmod(6, 2, 7), 1u);
  EXPECT_EQ(powmod(12345, 0, 1000), 1u);
  EXPECT_EQ(powmod(2, 10, 1000), 24u);
  EXPECT_EQ(powmod(5, 3, 1), 0u);
  EXPECT_THROW(powmod(2, 2, 0), InvalidModulus);
  // Fermat on a 61-bit prime.
  const u64 p = (u64{1} << 61) - 1;
  EXPECT_EQ(powmod(3, p - 1, p), 1u);
}

TEST(Legendre, Examples) {
  EXPECT_EQ(legendre_symbol(73, 3), 1);
  EXPECT_EQ(legendre_symbol(241, 5), 1);
  EXPECT_EQ(legendre_symbol(3, 3), 0);
  EXPECT_EQ(legendre_symbol(-1, 7), -1);
  EXPECT_EQ(legendre_symbol(-1, 5), 1);
  EXPECT_THROW(legendre_symbol(1, 2), InvalidArgument);
  EXPECT_THROW(legendre_symbol(1, 9 - 1), InvalidArgument);
}

TEST(Legendre, EulerCriterionAndCountForPrimesBelow1000) {
  for (u64 p : primes_up_to(1000)) {
    if (p == 2) continue;
    u64 residues = 0;
    for (u64 a = 0; a < p; ++a) {
      u64 e = powmod(a, (p - 1) / 2, p);
      int expect = e == 0 ? 0 : (e == 1 ? 1 : -1);
      ASSERT_TRUE(e == 0 || e == 1 || e == p - 1);
      ASSERT_EQ(legendre_symbol(a, p), expect) << a << " mod " << p;
      if (a > 0 && expect == 1) ++residues;
    }
    EXPECT_EQ(residues, (p - 1) / 2) << p;
  }
}

TEST(CubicResidue, Examples) {
  EXPECT_TRUE(is_cubic_residue(7235857, 7));
  EXPECT_FALSE(is_cubic_residue(2, 7));
  EXPECT_FALSE(is_cubic_residue(14, 7));
  for (u64 q : {7, 13, 19, 613}) EXPECT_TRUE(is_cubic_residue(1, q));
  EXPECT_THROW(is_cubic_residue(1, 5), InvalidArgument);
}

TEST(CubicResidue, CountMatchesEnumeratedCubes) {
  for (u64 q : primes_up_to(1000)) {
    if (q % 3 != 1) continue;
    std::vector<bool> cube(q, false);
    for (u64 s = 1; s < q; ++s) cube[s * s % q * s % q] = true;
    u64 n = 0;
    for (u64 a = 1; a < q; ++a) {
      ASSERT_EQ(is_cubic_residue(a, q), cube[a]) << a << " mod " << q;
      n += cube[a];
    }
    EXPECT_EQ(n, (q - 1) / 3);
  }
}

TEST(NthRoot, Examples) {
  auto r = integer_nth_root(49, 2);
  EXPECT_EQ(r.root, 7u);
  EXPECT_TRUE(r.exact);
  r = integer_nth_root(73, 2);
  EXPECT_EQ(r.root, 8u);
  EXPECT_FALSE(r.exact);
  EXPECT_FALSE(integer_nth_root(2805544681ULL, 2).exact);
  EXPECT_TRUE(integer_nth_root(27, 3).exact);
  EXPECT_EQ(integer_nth_root(26, 3).root, 2u);
  EXPECT_EQ(integer_nth_root(0, 2).root, 0u);
  EXPECT_TRUE(integer_nth_root(1, 3).exact);
}

TEST(NthRoot, BracketsNearTwoTo127) {
  std::mt19937_64 rng(99);
  std::vector<u128> xs = {(u128{1} << 127), (u128{1} << 127) - 1, (u128{1} << 127) + 1, kU128Max >> 1};
  // Squares and cubes straddling the top of the range.
  u128 s = integer_nth_root(u128{1} << 127, 2).root;
  for (int d = -3; d <= 3; ++d) xs.push_back((s + d) * (s + d) - 1), xs.push_back((s + d) * (s + d));
  u128 c = integer_nth_root(u128{1} << 127, 3).root;
  for (int d = -3; d <= 3; ++d) xs.push_back((c + d) * (c + d) * (c + d)), xs.push_back((c + d) * (c + d) * (c + d) + 1);
  for (int i = 0; i < 2000; ++i) xs.push_back(((u128{rng()} << 64) | rng()) >> (1 + rng() % 120));
  for (u128 x : xs) {
    for (unsigned n : {2u, 3u}) {
      NthRoot r = integer_nth_root(x, n);
      cpp_int X(x), R(r.root);
      ASSERT_LE(pow(R, n), X);
      ASSERT_GT(pow(R + 1, n), X);
      ASSERT_EQ(r.exact, pow(R, n) == X);
    }
  }
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(5, 7), 3u);
  EXPECT_EQ(mod_inverse(1, 1000003), 1u);
  const u64 mn = 4483259527721526840ULL;
  u64 inv = mod_inverse(mn % 101, 101);
  EXPECT_EQ(mulmod(mn % 101, inv, 101), 1u);
  EXPECT_THROW(mod_inverse(6, 9), NotInvertible);
  EXPECT_THROW(mod_inverse(1, 0), InvalidModulus);
  const u64 big = (u64{1} << 61) - 1;
  EXPECT_EQ(mulmod(mod_inverse(123456789, big), 123456789, big), 1u);
}

TEST(ResidueClassType, ReducesAndRejectsZeroModulus) {
  ResidueClass r(17, 5);
  EXPECT_EQ(r.value(), 2u);
  EXPECT_EQ(r.modulus(), 5u);
  EXPECT_THROW(ResidueClass(1, 0), InvalidModulus);
}

TEST(Primes, IndexHelpers) {
  EXPECT_EQ(nth_prime(1), 2u);
  EXPECT_EQ(nth_prime(74), 373u);
  EXPECT_EQ(nth_prime_1mod3(1), 7u);
  EXPECT_EQ(nth_prime_1mod3(53), 613u);
  EXPECT_EQ(prime_power_base(8), 2u);
  EXPECT_EQ(prime_power_base(9), 3u);
  EXPECT_EQ(prime_power_base(12), 0u);
}
