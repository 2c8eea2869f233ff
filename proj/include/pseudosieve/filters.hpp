#pragma once

// Staged rejection of (t_p, t_n) pairs before x is ever formed.
//
// NormalizedTableSet: for a fixed t_n, table_q[s] says whether
// s * M_n - t_n * M_p is admissible mod q, so each candidate t_p costs one
// reduction and one lookup per prime.
//
// SecondaryFilter: x mod q from precomputed M_p mod q and M_n mod q, tested
// prime by prime with early exit.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dfe.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "modarith.hpp"
#include "mode.hpp"

namespace pseudosieve {

namespace detail {

struct FilterModulus {
  u64 q;
  u64 mp_mod;
  u64 mn_mod;
  std::vector<std::uint8_t> x_table;
};

inline FilterModulus make_filter_modulus(const DfeParams& params, u64 q) {
  const u64 mp = params.mp.product();
  const u64 mn = params.mn.product();
  if (gcd_u64(mp % q, q) != 1 || gcd_u64(mn % q, q) != 1) {
    throw InvalidConfig("filter modulus " + std::to_string(q) + " divides M_p * M_n");
  }
  return {q, mp % q, mn % q, admissible_x_table(params.mode, q)};
}

// Moduli are below 2^32, so residue products fit in 64 bits.
inline u64 x_mod(const FilterModulus& f, u64 tp, u64 tn) {
  u64 a = (tp % f.q) * f.mn_mod % f.q;
  u64 b = (tn % f.q) * f.mp_mod % f.q;
  return a >= b ? a - b : a + f.q - b;
}

}  // namespace detail

class NormalizedTableSet {
 public:
  NormalizedTableSet(const DfeParams& params, const std::vector<u64>& primes) {
    entries_.reserve(primes.size());
    for (u64 q : primes) {
      Entry e{detail::make_filter_modulus(params, q), {}};
      e.table.assign(q, 0);
      entries_.push_back(std::move(e));
    }
  }

  // Rebuild every table for a new t_n. Cost is the sum of the primes.
  void normalize(u64 tn) {
    tn_ = tn;
    for (auto& e : entries_) {
      const u64 q = e.mod.q;
      u64 r = (q - (tn % q) * e.mod.mp_mod % q) % q;
      const u64 step = e.mod.mn_mod;
      for (u64 s = 0; s < q; ++s) {
        e.table[s] = e.mod.x_table[r];
        r += step;
        if (r >= q) r -= q;
      }
    }
  }

  bool passes(u64 tp) const {
    for (const auto& e : entries_) {
      if (!e.table[tp % e.mod.q]) return false;
    }
    return true;
  }

  // Same answer as passes() against the tables normalized for tn, computed
  // without the tables.
  bool passes_direct(u64 tp, u64 tn) const {
    for (const auto& e : entries_) {
      if (!e.mod.x_table[detail::x_mod(e.mod, tp, tn)]) return false;
    }
    return true;
  }

  u64 t_n() const { return tn_; }
  std::size_t size() const { return entries_.size(); }
  u64 prime(std::size_t i) const { return entries_[i].mod.q; }
  const std::vector<std::uint8_t>& table(std::size_t i) const { return entries_[i].table; }

  // Total table length, i.e. the cost of one normalize().
  u64 rebuild_cost() const {
    u64 c = 0;
    for (const auto& e : entries_) c += e.mod.q;
    return c;
  }

 private:
  struct Entry {
    detail::FilterModulus mod;
    std::vector<std::uint8_t> table;
  };
  std::vector<Entry> entries_;
  u64 tn_ = 0;
};

inline NormalizedTableSet build_normalized_tables(u64 tn, const DfeParams& params, const std::vector<u64>& primes) {
  NormalizedTableSet ts(params, primes);
  ts.normalize(tn);
  return ts;
}

inline bool passes_normalized(u64 tp, const NormalizedTableSet& ts) { return ts.passes(tp); }

class SecondaryFilter {
 public:
  SecondaryFilter() = default;

  SecondaryFilter(const DfeParams& params, const std::vector<u64>& moduli) {
    mods_.reserve(moduli.size());
    for (u64 q : moduli) mods_.push_back(detail::make_filter_modulus(params, q));
  }

  // Index of the first modulus that rejects, or size() when all pass.
  std::size_t first_failure(u64 tp, u64 tn) const {
    for (std::size_t i = 0; i < mods_.size(); ++i) {
      if (!mods_[i].x_table[detail::x_mod(mods_[i], tp, tn)]) return i;
    }
    return mods_.size();
  }

  bool passes(u64 tp, u64 tn) const { return first_failure(tp, tn) == mods_.size(); }

  std::size_t size() const { return mods_.size(); }
  u64 modulus(std::size_t i) const { return mods_[i].q; }
  u64 mp_mod(std::size_t i) const { return mods_[i].mp_mod; }
  u64 mn_mod(std::size_t i) const { return mods_[i].mn_mod; }

 private:
  std::vector<detail::FilterModulus> mods_;
};

inline bool passes_secondary(u64 tp, u64 tn, const SecondaryFilter& sf) { return sf.passes(tp, tn); }

}  // namespace pseudosieve
