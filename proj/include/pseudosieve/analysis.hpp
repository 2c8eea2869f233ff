#pragma once

// Ground truth and distribution statistics for pseudosquare / pseudocube
// tables.
//
// brute_force_scan walks every x up to a bound and applies the definition
// directly, with Euler-criterion residue tables and exact root tests. It
// shares nothing with the wheels or the DFE engine and serves as their oracle.
//
// c2(n) = L / (2^n ln p_n), c3(n) = L / (3^n (ln q_n)^2), evaluated with
// 50-digit binary floats.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"
#include "modarith.hpp"
#include "mode.hpp"
#include "primes.hpp"

namespace pseudosieve {

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline constexpr u64 kOracleBoundLimit = 1'000'000'000;

struct PseudoRecord {
  std::size_t n = 0;
  u64 prime = 0;
  BigInt L;
  Mode kind = Mode::square;
};

// Index helpers: p_n is the n-th prime (p_1 = 2), q_n the n-th prime = 1 mod 3
// (q_1 = 7).
inline u64 level_prime(Mode kind, std::size_t n) { return kind == Mode::square ? nth_prime(n) : nth_prime_1mod3(n); }

inline void validate_record(const PseudoRecord& r) {
  if (r.n == 0 || r.L <= 0) throw InvalidRecord("record needs n >= 1 and L > 0");
  if (level_prime(r.kind, r.n) != r.prime) {
    throw InvalidRecord("record n=" + std::to_string(r.n) + " lists prime " + std::to_string(r.prime) + " but the " +
                        (r.kind == Mode::square ? "n-th prime" : "n-th prime = 1 mod 3") + " is " +
                        std::to_string(level_prime(r.kind, r.n)));
  }
}

inline u128 to_u128(const BigInt& v) {
  if (v < 0 || v > BigInt(kU128Max)) throw OutOfRepresentation("value does not fit in 128 bits");
  return static_cast<u128>(v);
}

inline BigInt to_bigint(u128 v) { return BigInt(v); }

// Fixture format: "n prime L" per line; '#' comments. The kind is inferred
// from whether prime is p_n or q_n (they never coincide).
inline std::vector<PseudoRecord> parse_table(std::istream& in) {
  std::vector<PseudoRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    std::string n, p, L, extra;
    if (!(ls >> n)) continue;
    if (!(ls >> p >> L) || (ls >> extra)) throw InvalidRecord("table line " + std::to_string(lineno) + ": expected 'n prime L'");
    PseudoRecord r;
    try {
      r.n = static_cast<std::size_t>(parse_u64(n));
      r.prime = parse_u64(p);
      for (char c : L) {
        if (c < '0' || c > '9') throw InvalidArgument("bad digit");
      }
      r.L = BigInt(L);
    } catch (const InvalidArgument& e) {
      throw InvalidRecord("table line " + std::to_string(lineno) + ": " + e.what());
    }
    if (r.n == 0) throw InvalidRecord("table line " + std::to_string(lineno) + ": n must be >= 1");
    if (nth_prime(r.n) == r.prime) {
      r.kind = Mode::square;
    } else if (nth_prime_1mod3(r.n) == r.prime) {
      r.kind = Mode::cube;
    } else {
      throw InvalidRecord("table line " + std::to_string(lineno) + ": prime " + p + " is neither p_n nor q_n for n=" + n);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<PseudoRecord> load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open table " + path);
  return parse_table(in);
}

inline double conjecture_ratio(const PseudoRecord& r) {
  validate_record(r);
  BigFloat L(r.L);
  BigFloat lg = boost::multiprecision::log(BigFloat(r.prime));
  if (r.kind == Mode::square) return static_cast<double>(L / (boost::multiprecision::pow(BigFloat(2), r.n) * lg));
  return static_cast<double>(L / (boost::multiprecision::pow(BigFloat(3), r.n) * lg * lg));
}

// L_{q_n,3}^(2/3) / L_{p_n,2}.
inline double crossover_ratio(const PseudoRecord& square_rec, const PseudoRecord& cube_rec) {
  if (square_rec.kind != Mode::square || cube_rec.kind != Mode::cube) throw InvalidRecord("crossover needs a square and a cube record");
  if (square_rec.n != cube_rec.n) throw InvalidRecord("crossover records have different n");
  BigFloat c = boost::multiprecision::cbrt(BigFloat(cube_rec.L));
  return static_cast<double>(c * c / BigFloat(square_rec.L));
}

struct TableStats {
  double min;
  double max;
  double mean;
};

inline TableStats table_stats(const std::vector<PseudoRecord>& recs) {
  if (recs.empty()) throw EmptyInput("table_stats: no records");
  TableStats s{0, 0, 0};
  BigFloat sum = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].kind != recs.front().kind) throw InvalidRecord("table_stats: mixed square and cube records");
    double c = conjecture_ratio(recs[i]);
    if (i == 0 || c < s.min) s.min = c;
    if (i == 0 || c > s.max) s.max = c;
    sum += c;
  }
  s.mean = static_cast<double>(sum / recs.size());
  return s;
}

// Every x in [2, bound] satisfying the full definition at level p_max.
inline std::vector<u64> brute_force_scan(Mode mode, u64 p_max, u64 bound) {
  if (bound > kOracleBoundLimit) throw InvalidArgument("brute_force_scan: bound above 1e9");
  if (p_max < 3 || !is_prime(p_max)) throw InvalidArgument("brute_force_scan: p_max must be an odd prime");
  // Per prime, whether residue r meets the condition for q, from Euler's
  // criterion.
  struct Check {
    u64 q;
    std::vector<std::uint8_t> ok;
  };
  std::vector<Check> checks;
  for (u64 q : primes_up_to(p_max)) {
    if (mode == Mode::square && q == 2) continue;
    if (mode == Mode::cube && q <= 3) continue;  // covered by the mod-9 / parity tests
    Check c{q, std::vector<std::uint8_t>(q, 0)};
    for (u64 r = 1; r < q; ++r) {
      if (mode == Mode::square) {
        c.ok[r] = legendre_symbol(r, q) == 1;
      } else {
        c.ok[r] = q % 3 == 1 ? is_cubic_residue(r, q) : 1;
      }
    }
    checks.push_back(std::move(c));
  }
  std::vector<u64> out;
  auto passes = [&](u64 x) {
    for (const auto& c : checks) {
      if (!c.ok[x % c.q]) return false;
    }
    return true;
  };
  if (mode == Mode::square) {
    for (u64 x = 9; x <= bound; x += 8) {
      if (passes(x) && !integer_nth_root(x, 2).exact) out.push_back(x);
    }
  } else {
    // x = +-1 mod 9 and odd: x = 1, 17 (mod 18).
    for (u64 base = 0; base <= bound; base += 18) {
      for (u64 x : {base + 1, base + 17}) {
        if (x < 2 || x > bound) continue;
        if (passes(x) && !integer_nth_root(x, 3).exact) out.push_back(x);
      }
    }
  }
  return out;
}

inline std::optional<u64> brute_force_min(Mode mode, u64 p_max, u64 bound) {
  if (bound > kOracleBoundLimit) throw InvalidArgument("brute_force_min: bound above 1e9");
  // Scan in growing windows so a small answer returns early.
  for (u64 hi = std::min<u64>(bound, 1 << 20);; hi = std::min(bound, hi * 4)) {
    auto xs = brute_force_scan(mode, p_max, hi);
    if (!xs.empty()) return xs.front();
    if (hi == bound) return std::nullopt;
  }
}

}  // namespace pseudosieve
