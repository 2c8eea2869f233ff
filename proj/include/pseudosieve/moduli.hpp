#pragma once

// Choice of the two focusing moduli M_p, M_n and of the filter prime lists
// that go with them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dfe.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "mode.hpp"
#include "primes.hpp"
#include "wheel.hpp"

namespace pseudosieve {

struct ModuliPair {
  FactoredModulus mp;
  FactoredModulus mn;
};

// The production moduli. Square: M_p = 2057046173382917717,
// M_n = 4483259527721526840. Cube: M_p = 701856356111039402,
// M_n = 693110504329192503.
inline ModuliPair production_moduli(Mode mode) {
  if (mode == Mode::square) {
    return {FactoredModulus({7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 53, 89}),
            FactoredModulus({8, 3, 5, 47, 59, 61, 67, 71, 73, 79, 83, 97})};
  }
  return {FactoredModulus({2, 7, 13, 31, 43, 73, 79, 127, 139, 157, 181}),
          FactoredModulus({9, 19, 37, 61, 67, 97, 103, 109, 151, 163})};
}

// Primes that give a strong filter in this mode: odd primes for squares,
// primes = 1 mod 3 for cubes.
inline bool is_strong_filter_prime(Mode mode, u64 q) {
  return mode == Mode::square ? (q > 2 && is_prime(q)) : (q % 3 == 1 && is_prime(q));
}

namespace detail {

inline long double count_admissible(Mode mode, u64 f) {
  auto t = admissible_x_table(mode, f);
  return static_cast<long double>(std::count(t.begin(), t.end(), 1));
}

// Rough operation count for a whole search with the given moduli. Counts
// t_p values generated and sorted, t_n values visited, and (t_p, t_n) pairs
// sent through the sieve tables.
inline long double search_cost(long double mp, long double cp, long double mn, long double cn, long double xr,
                               long double block_cap) {
  const long double dp = cp / mp;
  const long double dn = cn / mn;
  const long double range = xr / mn + mp;
  const long double tp = range * dp;
  const long double blocks = std::max<long double>(1, std::ceil(tp / (0.8L * block_cap)));
  const long double window = std::min(mn, (range / blocks * mn + xr) / mp);
  const long double tn = blocks * window * dn;
  const long double pairs = xr * dp * dn;
  const long double per_block = std::max<long double>(2, tp / blocks);
  return tp * (std::log2(per_block) + 4) + tn * 40 + pairs * 3;
}

}  // namespace detail

// Desk-scale moduli for a search of [x_lo, x_hi] at level p_max. Starting
// from the mode's forced factors (8 in M_n for squares; 2 in M_p and 9 in M_n
// for cubes), the strong filter primes up to p_max are added in ascending
// order to whichever side lowers the estimated cost, stopping at the first
// prime that helps neither side.
inline ModuliPair choose_moduli(Mode mode, u64 p_max, u128 x_lo, u128 x_hi, std::size_t block_cap = kDefaultBlockCap) {
  std::vector<u64> p_side, n_side;
  if (mode == Mode::square) {
    n_side = {8};
  } else {
    p_side = {2};
    n_side = {9};
  }
  long double mp = 1, cp = 1, mn = 1, cn = 1;
  for (u64 f : p_side) {
    mp *= f;
    cp *= detail::count_admissible(mode, f);
  }
  for (u64 f : n_side) {
    mn *= f;
    cn *= detail::count_admissible(mode, f);
  }
  const long double xr = static_cast<long double>(x_hi - x_lo) + 1;
  const long double cap = static_cast<long double>(block_cap);
  const long double limit = 0x1p62L;
  const long double tp_limit = 0x1p63L;
  long double cost = detail::search_cost(mp, cp, mn, cn, xr, cap);
  for (u64 q : primes_up_to(p_max)) {
    if (!is_strong_filter_prime(mode, q)) continue;
    const long double cq = detail::count_admissible(mode, q);
    const long double qd = static_cast<long double>(q);
    long double cost_p = INFINITY, cost_n = INFINITY;
    if (mp * qd < limit) cost_p = detail::search_cost(mp * qd, cp * cq, mn, cn, xr, cap);
    if (mn * qd < limit && static_cast<long double>(x_hi) / (mn * qd) + mp < tp_limit) {
      cost_n = detail::search_cost(mp, cp, mn * qd, cn * cq, xr, cap);
    }
    if (std::min(cost_p, cost_n) >= cost) break;
    if (cost_p <= cost_n) {
      p_side.push_back(q);
      mp *= qd;
      cp *= cq;
      cost = cost_p;
    } else {
      n_side.push_back(q);
      mn *= qd;
      cn *= cq;
      cost = cost_n;
    }
  }
  if (p_side.empty()) {
    // M_p needs at least one factor.
    for (u64 q : primes_up_to(p_max)) {
      if (is_strong_filter_prime(mode, q) && std::find(n_side.begin(), n_side.end(), q) == n_side.end()) {
        p_side.push_back(q);
        break;
      }
    }
    if (p_side.empty()) throw InvalidConfig("p_max too small to form M_p");
  }
  return {FactoredModulus(p_side), FactoredModulus(n_side)};
}

// Moduli file: a "[Mp]" section and an "[Mn]" section, each holding wheel
// config lines "factor [r1 r2 ...]". Residues may be omitted; when present
// they must equal the residues the mode implies.
inline ModuliPair parse_moduli(std::istream& in, Mode mode) {
  std::string line;
  std::ostringstream sections[2];
  int current = -1;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ls(body);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "[Mp]") {
      current = 0;
    } else if (tok == "[Mn]") {
      current = 1;
    } else {
      if (current < 0) throw InvalidConfig("moduli file line " + std::to_string(lineno) + ": expected [Mp] or [Mn]");
      sections[current] << body << '\n';
    }
  }
  std::istringstream ps(sections[0].str()), ns(sections[1].str());
  WheelConfig p = parse_wheel_config(ps);
  WheelConfig n = parse_wheel_config(ns);
  if (gcd_u64(p.modulus.product(), n.modulus.product()) != 1) throw InvalidConfig("moduli file: M_p and M_n not coprime");
  for (std::size_t i = 0; i < p.admissible.size(); ++i) {
    if (p.admissible[i].empty()) continue;
    auto want = admissible_tp_residues(mode, p.modulus.factors()[i], n.modulus.product());
    auto got = p.admissible[i];
    std::sort(got.begin(), got.end());
    if (got != want) throw InvalidConfig("moduli file: residues for M_p factor " + std::to_string(p.modulus.factors()[i]) + " do not match the mode");
  }
  for (std::size_t i = 0; i < n.admissible.size(); ++i) {
    if (n.admissible[i].empty()) continue;
    auto want = admissible_tn_residues(mode, n.modulus.factors()[i], p.modulus.product());
    auto got = n.admissible[i];
    std::sort(got.begin(), got.end());
    if (got != want) throw InvalidConfig("moduli file: residues for M_n factor " + std::to_string(n.modulus.factors()[i]) + " do not match the mode");
  }
  return {p.modulus, n.modulus};
}

inline ModuliPair load_moduli(const std::string& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open moduli file " + path);
  return parse_moduli(in, mode);
}

inline void write_moduli(std::ostream& out, Mode mode, const ModuliPair& m) {
  out << "[Mp]\n";
  write_wheel_config(out, make_tp_wheel(mode, m.mp, m.mn));
  out << "[Mn]\n";
  write_wheel_config(out, make_tn_wheel(mode, m.mp, m.mn));
}

// First `count` strong filter primes <= p_max that are not wheel factors.
inline std::vector<u64> default_normalized_primes(Mode mode, u64 p_max, const ModuliPair& m, std::size_t count = 4) {
  std::vector<u64> out;
  for (u64 q : primes_up_to(p_max)) {
    if (out.size() >= count) break;
    if (!is_strong_filter_prime(mode, q) || m.mp.has_factor(q) || m.mn.has_factor(q)) continue;
    out.push_back(q);
  }
  return out;
}

// Every remaining modulus the definition constrains at level p_max (up to
// `bound`), strong filters first, each group ascending.
inline std::vector<u64> default_secondary_moduli(Mode mode, u64 p_max, const ModuliPair& m, const std::vector<u64>& normalized,
                                                 u64 bound) {
  bound = std::min(bound, p_max);
  auto used = [&](u64 f) {
    return m.mp.has_factor(f) || m.mn.has_factor(f) || std::find(normalized.begin(), normalized.end(), f) != normalized.end();
  };
  std::vector<u64> strong, weak;
  if (mode == Mode::square) {
    if (!used(8)) strong.push_back(8);
  } else {
    if (!used(2)) strong.push_back(2);
    if (!used(9)) strong.push_back(9);
  }
  for (u64 q : primes_up_to(bound)) {
    if (q == 2 || (mode == Mode::cube && q == 3) || used(q)) continue;
    if (is_strong_filter_prime(mode, q)) {
      strong.push_back(q);
    } else if (mode == Mode::cube) {
      weak.push_back(q);
    }
  }
  strong.insert(strong.end(), weak.begin(), weak.end());
  return strong;
}

}  // namespace pseudosieve
