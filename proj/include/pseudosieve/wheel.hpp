#pragma once

// Wheels: enumerate the integers whose residue modulo each prime-power factor
// of a modulus lies in a prescribed set. Storage is one level per factor
// (sorted residues, a membership table and a CRT stride constant), so memory
// is proportional to the sum of the factors rather than their product.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"
#include "modarith.hpp"
#include "mode.hpp"
#include "primes.hpp"

namespace pseudosieve {

class FactoredModulus {
 public:
  FactoredModulus() = default;

  // Factors must be prime powers below 2^32, pairwise coprime, with a product
  // below 2^64.
  explicit FactoredModulus(std::vector<u64> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw InvalidModulus("factored modulus needs at least one factor");
    u128 prod = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      u64 f = factors_[i];
      if (f >= (u64{1} << 32)) throw InvalidModulus("factor " + std::to_string(f) + " is not below 2^32");
      if (prime_power_base(f) == 0) throw InvalidModulus("factor " + std::to_string(f) + " is not a prime power");
      for (std::size_t j = 0; j < i; ++j) {
        if (gcd_u64(f, factors_[j]) != 1) {
          throw InvalidModulus("factors " + std::to_string(factors_[j]) + " and " + std::to_string(f) + " are not coprime");
        }
      }
      prod *= f;
      if (prod > UINT64_MAX) throw InvalidModulus("modulus product does not fit in 64 bits");
    }
    product_ = static_cast<u64>(prod);
  }

  const std::vector<u64>& factors() const { return factors_; }
  u64 product() const { return product_; }

  bool has_factor(u64 f) const { return std::find(factors_.begin(), factors_.end(), f) != factors_.end(); }

  // Largest prime dividing the modulus.
  u64 largest_prime() const {
    u64 best = 0;
    for (u64 f : factors_) best = std::max(best, prime_power_base(f));
    return best;
  }

  friend bool operator==(const FactoredModulus&, const FactoredModulus&) = default;

 private:
  std::vector<u64> factors_;
  u64 product_ = 1;
};

class Wheel {
 public:
  struct Level {
    u64 factor;
    u64 prefix;      // product of the factors of all earlier levels
    u64 prefix_inv;  // prefix^-1 mod factor
    std::vector<u64> residues;
    std::vector<std::uint8_t> member;
  };

  Wheel(FactoredModulus modulus, std::vector<std::vector<u64>> admissible) : modulus_(std::move(modulus)) {
    const auto& fs = modulus_.factors();
    if (admissible.size() != fs.size()) {
      throw InvalidArgument("wheel: expected " + std::to_string(fs.size()) + " admissible sets, got " +
                            std::to_string(admissible.size()));
    }
    u64 prefix = 1;
    period_count_ = 1;
    levels_.reserve(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
      Level lv;
      lv.factor = fs[i];
      lv.prefix = prefix;
      lv.prefix_inv = mod_inverse(prefix % fs[i], fs[i]);
      lv.residues = std::move(admissible[i]);
      std::sort(lv.residues.begin(), lv.residues.end());
      lv.residues.erase(std::unique(lv.residues.begin(), lv.residues.end()), lv.residues.end());
      if (lv.residues.empty()) throw EmptyWheel("wheel: no admissible residues modulo " + std::to_string(fs[i]));
      if (lv.residues.back() >= fs[i]) {
        throw InvalidArgument("wheel: residue " + std::to_string(lv.residues.back()) + " out of range for factor " +
                              std::to_string(fs[i]));
      }
      lv.member.assign(fs[i], 0);
      for (u64 r : lv.residues) lv.member[r] = 1;
      period_count_ *= lv.residues.size();
      prefix *= fs[i];
      levels_.push_back(std::move(lv));
    }
  }

  const FactoredModulus& modulus() const { return modulus_; }
  const std::vector<Level>& levels() const { return levels_; }
  u64 period_count() const { return period_count_; }
  double density() const { return static_cast<double>(period_count_) / static_cast<double>(modulus_.product()); }

  bool contains(u64 t) const {
    for (const auto& lv : levels_) {
      if (!lv.member[t % lv.factor]) return false;
    }
    return true;
  }

  // Number of stored residue and table entries; grows with the sum of the
  // factor sizes.
  std::size_t storage_size() const {
    std::size_t n = 0;
    for (const auto& lv : levels_) n += lv.residues.size() + lv.member.size();
    return n;
  }

  // Calls emit(t) for every admissible t in [lo, hi), each exactly once, in no
  // particular order.
  template <typename F>
  void for_each(u64 lo, u64 hi, F&& emit) const {
    if (lo > hi) throw InvalidArgument("wheel enumeration: lo > hi");
    if (lo == hi) return;
    walk(0, 0, lo, hi, emit);
  }

  std::vector<u64> enumerate(u64 lo, u64 hi) const {
    std::vector<u64> out;
    for_each(lo, hi, [&](u64 t) { out.push_back(t); });
    return out;
  }

 private:
  // c is admissible modulo the product of levels [0, j). Either split c into
  // its children modulo the next factor, or, once the progression
  // c + k * prefix inside [lo, hi) is shorter than the child list, test its
  // terms directly against the remaining levels.
  template <typename F>
  void walk(std::size_t j, u64 c, u64 lo, u64 hi, F& emit) const {
    const bool leaf = j == levels_.size();
    const u64 step = leaf ? modulus_.product() : levels_[j].prefix;
    u128 first = lo + (static_cast<u128>(c) + step - lo % step) % step;
    if (first >= hi) return;
    const u128 count = (hi - 1 - first) / step + 1;
    if (leaf) {
      for (u128 t = first; t < hi; t += step) emit(static_cast<u64>(t));
      return;
    }
    const Level& lv = levels_[j];
    if (count <= lv.residues.size()) {
      for (u128 t = first; t < hi; t += step) {
        bool ok = true;
        for (std::size_t k = j; k < levels_.size(); ++k) {
          const Level& l = levels_[k];
          if (!l.member[static_cast<u64>(t % l.factor)]) {
            ok = false;
            break;
          }
        }
        if (ok) emit(static_cast<u64>(t));
      }
      return;
    }
    const u64 cmod = c % lv.factor;
    for (u64 r : lv.residues) {
      u64 u = mulmod(submod(r, cmod, lv.factor), lv.prefix_inv, lv.factor);
      walk(j + 1, c + lv.prefix * u, lo, hi, emit);
    }
  }

  FactoredModulus modulus_;
  std::vector<Level> levels_;
  u64 period_count_ = 0;
};

inline Wheel build_wheel(FactoredModulus modulus, std::vector<std::vector<u64>> admissible) {
  return Wheel(std::move(modulus), std::move(admissible));
}

// t_p residues modulo a factor q of M_p: those s with s * M_n mod q admissible
// for x.
inline std::vector<u64> admissible_tp_residues(Mode mode, u64 q, u64 mn) {
  if (gcd_u64(mn % q, q) != 1) throw InvalidArgument("admissible_tp_residues: M_n shares a factor with " + std::to_string(q));
  auto table = admissible_x_table(mode, q);
  u64 step = mn % q;
  std::vector<u64> out;
  u64 x = 0;
  for (u64 s = 0; s < q; ++s, x = addmod(x, step, q)) {
    if (table[x]) out.push_back(s);
  }
  return out;
}

inline std::vector<u64> admissible_tp_residues(Mode mode, const FactoredModulus& mp, u64 q, u64 mn) {
  if (!mp.has_factor(q)) throw InvalidArgument("admissible_tp_residues: " + std::to_string(q) + " is not a factor of M_p");
  return admissible_tp_residues(mode, q, mn);
}

// t_n residues modulo a factor f of M_n: those s with -s * M_p mod f
// admissible for x.
inline std::vector<u64> admissible_tn_residues(Mode mode, u64 f, u64 mp) {
  if (gcd_u64(mp % f, f) != 1) throw InvalidArgument("admissible_tn_residues: M_p shares a factor with " + std::to_string(f));
  auto table = admissible_x_table(mode, f);
  u64 step = (f - mp % f) % f;
  std::vector<u64> out;
  u64 x = 0;
  for (u64 s = 0; s < f; ++s, x = addmod(x, step, f)) {
    if (table[x]) out.push_back(s);
  }
  return out;
}

inline std::vector<u64> admissible_tn_residues(Mode mode, const FactoredModulus& mn, u64 f, u64 mp) {
  if (!mn.has_factor(f)) throw InvalidArgument("admissible_tn_residues: " + std::to_string(f) + " is not a factor of M_n");
  return admissible_tn_residues(mode, f, mp);
}

inline Wheel make_tp_wheel(Mode mode, const FactoredModulus& mp, const FactoredModulus& mn) {
  std::vector<std::vector<u64>> sets;
  for (u64 q : mp.factors()) sets.push_back(admissible_tp_residues(mode, q, mn.product()));
  return Wheel(mp, std::move(sets));
}

inline Wheel make_tn_wheel(Mode mode, const FactoredModulus& mp, const FactoredModulus& mn) {
  std::vector<std::vector<u64>> sets;
  for (u64 f : mn.factors()) sets.push_back(admissible_tn_residues(mode, f, mp.product()));
  return Wheel(mn, std::move(sets));
}

struct WheelConfig {
  FactoredModulus modulus;
  std::vector<std::vector<u64>> admissible;
};

// Plain-text wheel description: one line per factor, "factor r1 r2 ...".
// '#' starts a comment.
inline WheelConfig parse_wheel_config(std::istream& in) {
  std::vector<u64> factors;
  std::vector<std::vector<u64>> sets;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    std::vector<u64> nums;
    try {
      while (ls >> tok) nums.push_back(parse_u64(tok));
    } catch (const InvalidArgument& e) {
      throw InvalidConfig("wheel config line " + std::to_string(lineno) + ": " + e.what());
    }
    if (nums.empty()) continue;
    factors.push_back(nums.front());
    sets.emplace_back(nums.begin() + 1, nums.end());
  }
  if (factors.empty()) throw InvalidConfig("wheel config has no factors");
  return {FactoredModulus(std::move(factors)), std::move(sets)};
}

inline void write_wheel_config(std::ostream& out, const Wheel& w) {
  for (const auto& lv : w.levels()) {
    out << lv.factor;
    for (u64 r : lv.residues) out << ' ' << r;
    out << '\n';
  }
}

}  // namespace pseudosieve
