#pragma once

// Doubly-focused enumeration. Every x in the search range is written as
//   x = t_p * M_n - t_n * M_p,   gcd(M_p, M_n) = 1,  0 <= t_n < M_n,
// so residue conditions modulo factors of M_p constrain only t_p and those
// modulo factors of M_n constrain only t_n. Sorted blocks of admissible t_p
// are matched against admissible t_n by binary search.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"
#include "modarith.hpp"
#include "mode.hpp"
#include "wheel.hpp"

namespace pseudosieve {

inline constexpr std::size_t kDefaultBlockCap = 40'000'000;

// Largest supported x bound; keeps x + t_n * M_p inside 128 bits.
inline constexpr u128 kMaxSearchBound = u128{1} << 126;

struct DfeParams {
  Mode mode = Mode::square;
  FactoredModulus mp;
  FactoredModulus mn;
  u128 x_lo = 0;
  u128 x_hi = 0;  // inclusive
  std::size_t block_cap = kDefaultBlockCap;

  void validate() const {
    if (gcd_u64(mp.product(), mn.product()) != 1) throw InvalidConfig("M_p and M_n are not coprime");
    if (mp.product() >= (u64{1} << 63) || mn.product() >= (u64{1} << 63)) {
      throw InvalidConfig("M_p and M_n must both be below 2^63");
    }
    if (x_lo >= x_hi) throw InvalidConfig("empty x range: need x_lo < x_hi");
    if (x_hi >= kMaxSearchBound) throw InvalidConfig("x_hi must be below 2^126");
    if (block_cap == 0) throw InvalidConfig("block cap must be positive");
    if (tp_end() > UINT64_MAX) throw InvalidConfig("t_p range exceeds 64 bits; use a larger M_n");
  }

  // Half-open t_p range that can produce some x in [x_lo, x_hi]:
  // floor(x_lo / M_n) .. floor((x_hi + M_n * M_p) / M_n).
  u128 tp_begin() const { return x_lo / mn.product(); }
  u128 tp_end() const { return (x_hi + static_cast<u128>(mn.product()) * mp.product()) / mn.product() + 1; }
};

struct Witness {
  u64 tp;
  u64 tn;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct TpBlock {
  u64 h_lo = 0;
  u64 h_hi = 0;
  std::vector<u64> values;  // strictly increasing
};

struct TnWindow {
  u64 lo;  // inclusive
  u64 hi;  // inclusive
};

struct IndexRange {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
};

inline u128 recombine(u64 tp, u64 tn, u64 mp, u64 mn) {
  u128 plus = static_cast<u128>(tp) * mn;
  u128 minus = static_cast<u128>(tn) * mp;
  if (minus > plus) throw OutOfRepresentation("recombine: t_p * M_n < t_n * M_p");
  return plus - minus;
}

inline u128 recombine(u64 tp, u64 tn, const DfeParams& params) {
  return recombine(tp, tn, params.mp.product(), params.mn.product());
}

// Explicit CRT: t_n = -x * M_p^-1 mod M_n, then t_p = (x + t_n * M_p) / M_n.
inline Witness decompose(u128 x, u64 mp, u64 mn) {
  u64 tn = 0;
  if (mn > 1) {
    u64 inv = mod_inverse(mp % mn, mn);
    u64 xr = static_cast<u64>(x % mn);
    tn = mulmod((mn - xr) % mn, inv, mn);
  }
  u128 tp = (x + static_cast<u128>(tn) * mp) / mn;
  if (tp > UINT64_MAX) throw OutOfRepresentation("decompose: t_p exceeds 64 bits");
  return {static_cast<u64>(tp), tn};
}

inline Witness decompose(u128 x, const DfeParams& params) { return decompose(x, params.mp.product(), params.mn.product()); }

// All admissible t_p in [h_lo, h_hi), sorted.
inline TpBlock generate_tp_block(const DfeParams& params, const Wheel& tp_wheel, u64 h_lo, u64 h_hi) {
  if (h_lo > h_hi) throw InvalidArgument("generate_tp_block: h_lo > h_hi");
  TpBlock block{h_lo, h_hi, {}};
  const std::size_t cap = params.block_cap;
  // Reserve from the density estimate; the wheel emits in CRT order, not
  // numeric order.
  double expect = static_cast<double>(h_hi - h_lo) * tp_wheel.density();
  block.values.reserve(static_cast<std::size_t>(std::min<double>(expect * 1.05 + 16, static_cast<double>(cap))));
  tp_wheel.for_each(h_lo, h_hi, [&](u64 t) {
    if (block.values.size() >= cap) {
      throw BlockTooLarge("t_p interval [" + std::to_string(h_lo) + ", " + std::to_string(h_hi) + ") holds more than " +
                          std::to_string(cap) + " admissible values");
    }
    block.values.push_back(t);
  });
  std::sort(block.values.begin(), block.values.end());
  return block;
}

inline u128 ceil_div(u128 a, u128 b) { return a / b + (a % b != 0); }

// The t_n values for which some t_p in the block lands in [x_lo, x_hi].
inline std::optional<TnWindow> tn_window(const TpBlock& block, const DfeParams& params) {
  if (block.values.empty()) throw InvalidArgument("tn_window: empty block");
  const u128 mp = params.mp.product();
  const u128 mn = params.mn.product();
  const u128 top = static_cast<u128>(block.values.back()) * mn;
  const u128 bottom = static_cast<u128>(block.values.front()) * mn;
  if (top < params.x_lo) return std::nullopt;
  u128 lo = bottom <= params.x_hi ? 0 : ceil_div(bottom - params.x_hi, mp);
  u128 hi = std::min<u128>(mn - 1, (top - params.x_lo) / mp);
  if (lo > hi) return std::nullopt;
  return TnWindow{static_cast<u64>(lo), static_cast<u64>(hi)};
}

// Indices i with x_lo <= values[i] * M_n - t_n * M_p <= x_hi. The bounds are
// turned into a t_p interval once per t_n; no x is formed here.
inline IndexRange match_tp_range(const TpBlock& block, u64 tn, const DfeParams& params) {
  const u128 mp = params.mp.product();
  const u128 mn = params.mn.product();
  const u128 shift = static_cast<u128>(tn) * mp;
  const u128 v_lo = ceil_div(params.x_lo + shift, mn);
  const u128 v_hi = (params.x_hi + shift) / mn;
  const auto& v = block.values;
  if (v_lo > v_hi || v.empty() || v_lo > v.back()) return {v.size(), v.size()};
  auto b = std::lower_bound(v.begin(), v.end(), static_cast<u64>(v_lo));
  auto e = v_hi >= v.back() ? v.end() : std::upper_bound(b, v.end(), static_cast<u64>(v_hi));
  return {static_cast<std::size_t>(b - v.begin()), static_cast<std::size_t>(e - v.begin())};
}

}  // namespace pseudosieve
