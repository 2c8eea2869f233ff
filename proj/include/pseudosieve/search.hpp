#pragma once

// Full search pipeline. The t_p range is cut into intervals; workers pull
// intervals from a shared cursor and, for each one:
//
//   1. generate the admissible t_p in the interval from the M_p wheel, sort;
//   2. derive the t_n window from the first and last t_p;
//   3. walk admissible t_n in that window (M_n wheel order);
//   4. per t_n, normalize the sieve tables and binary-search the matching t_p;
//   5. reject with the normalized tables, then the secondary moduli;
//   6. form x in 128 bits, drop perfect powers, verify, record.
//
// Completed intervals go to the checkpoint; candidates go to per-worker
// append-only files that are merged (sorted, deduplicated) at the end.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "checkpoint.hpp"
#include "dfe.hpp"
#include "errors.hpp"
#include "filters.hpp"
#include "int128.hpp"
#include "moduli.hpp"
#include "mode.hpp"
#include "primes.hpp"
#include "records.hpp"
#include "verify.hpp"
#include "wheel.hpp"

namespace pseudosieve {

struct SearchConfig {
  DfeParams dfe;
  u64 p_max = 0;
  std::vector<u64> normalized_primes;
  std::vector<u64> secondary_moduli;
  unsigned workers = 1;
  std::filesystem::path checkpoint_path;  // empty: no checkpointing
  bool resume = false;
  std::filesystem::path output_dir;  // empty: results kept in memory only

  Mode mode() const { return dfe.mode; }
  ModuliPair moduli() const { return {dfe.mp, dfe.mn}; }

  void validate() const {
    if (p_max < 3 || !is_prime(p_max)) throw InvalidConfig("p_max must be an odd prime, got " + std::to_string(p_max));
    dfe.validate();
    if (dfe.x_lo < 2) throw InvalidConfig("x_lo must be at least 2");
    if (workers == 0) throw InvalidConfig("worker count must be at least 1");
    auto check_filter = [&](u64 f, const char* what) {
      if (!is_filter_modulus(mode(), f)) {
        throw InvalidConfig(std::string(what) + " " + std::to_string(f) + " is not a " + std::string(to_string(mode())) +
                            "-mode filter modulus");
      }
      if (filter_modulus_prime(f) > p_max) {
        throw InvalidConfig(std::string(what) + " " + std::to_string(f) + " exceeds p_max " + std::to_string(p_max));
      }
    };
    for (u64 f : dfe.mp.factors()) check_filter(f, "M_p factor");
    for (u64 f : dfe.mn.factors()) check_filter(f, "M_n factor");
    for (u64 f : normalized_primes) check_filter(f, "normalized prime");
    for (u64 f : secondary_moduli) check_filter(f, "secondary modulus");
    if (resume && checkpoint_path.empty()) throw InvalidConfig("resume requested without a checkpoint path");
    if (!checkpoint_path.empty() && output_dir.empty()) throw InvalidConfig("checkpointing needs an output directory");
  }
};

struct SearchOptions {
  std::optional<ModuliPair> moduli;  // default: choose_moduli
  std::size_t block_cap = kDefaultBlockCap;
  std::size_t normalized_count = 4;
  std::optional<u64> secondary_bound;  // default: p_max
  unsigned workers = 1;
  std::filesystem::path checkpoint_path;
  bool resume = false;
  std::filesystem::path output_dir;
};

inline SearchConfig make_search_config(Mode mode, u64 p_max, u128 x_lo, u128 x_hi, const SearchOptions& opt = {}) {
  SearchConfig cfg;
  x_lo = std::max<u128>(x_lo, 2);
  ModuliPair m = opt.moduli ? *opt.moduli : choose_moduli(mode, p_max, x_lo, x_hi, opt.block_cap);
  cfg.dfe = DfeParams{mode, m.mp, m.mn, x_lo, x_hi, opt.block_cap};
  cfg.p_max = p_max;
  cfg.normalized_primes = default_normalized_primes(mode, p_max, m, opt.normalized_count);
  cfg.secondary_moduli = default_secondary_moduli(mode, p_max, m, cfg.normalized_primes, opt.secondary_bound.value_or(p_max));
  cfg.workers = opt.workers;
  cfg.checkpoint_path = opt.checkpoint_path;
  cfg.resume = opt.resume;
  cfg.output_dir = opt.output_dir;
  return cfg;
}

// FNV-1a over every parameter that affects which intervals exist and what
// they produce. Worker count and paths are excluded.
inline std::string fingerprint(const SearchConfig& cfg) {
  std::ostringstream s;
  s << to_string(cfg.mode()) << '|' << cfg.p_max << '|';
  for (u64 f : cfg.dfe.mp.factors()) s << f << ',';
  s << '|';
  for (u64 f : cfg.dfe.mn.factors()) s << f << ',';
  s << '|' << to_string(cfg.dfe.x_lo) << '|' << to_string(cfg.dfe.x_hi) << '|' << cfg.dfe.block_cap << '|';
  for (u64 f : cfg.normalized_primes) s << f << ',';
  s << '|';
  for (u64 f : cfg.secondary_moduli) s << f << ',';
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

// Intervals of t_p covering [floor(x_lo / M_n), floor((x_hi + M_n M_p) / M_n)],
// each sized so its expected admissible count is 80% of the block cap.
inline std::vector<TpInterval> partition_work(const SearchConfig& cfg) {
  cfg.dfe.validate();
  const u64 begin = static_cast<u64>(cfg.dfe.tp_begin());
  const u64 end = static_cast<u64>(cfg.dfe.tp_end());
  long double density = 1;
  for (u64 q : cfg.dfe.mp.factors()) {
    density *= static_cast<long double>(admissible_tp_residues(cfg.mode(), q, cfg.dfe.mn.product()).size()) / q;
  }
  long double w = 0.8L * static_cast<long double>(cfg.dfe.block_cap) / density;
  u64 width = w >= static_cast<long double>(UINT64_MAX) ? UINT64_MAX : std::max<u64>(1, static_cast<u64>(w));
  std::vector<TpInterval> out;
  for (u64 lo = begin; lo < end;) {
    u64 hi = end - lo <= width ? end : lo + width;
    out.push_back({lo, hi});
    lo = hi;
  }
  return out;
}

struct SearchStats {
  u64 tp_generated = 0;
  u64 tn_visited = 0;
  u64 pairs = 0;
  u64 normalized_passed = 0;
  u64 secondary_passed = 0;
  u64 survivors = 0;  // non-perfect-power x reaching full verification
  u64 verified = 0;
  u64 table_rebuilds = 0;

  SearchStats& operator+=(const SearchStats& o) {
    tp_generated += o.tp_generated;
    tn_visited += o.tn_visited;
    pairs += o.pairs;
    normalized_passed += o.normalized_passed;
    secondary_passed += o.secondary_passed;
    survivors += o.survivors;
    verified += o.verified;
    table_rebuilds += o.table_rebuilds;
    return *this;
  }
};

struct Progress {
  std::size_t intervals_done;
  std::size_t intervals_total;
  std::size_t candidates;
};

struct SearchHooks {
  // Called under the coordinator lock once per completed interval.
  std::function<void(std::span<const Candidate>)> on_batch;
  std::function<void(const Progress&)> on_progress;
  // Asked after each completed interval; true stops handing out work.
  std::function<bool(std::size_t completed)> should_stop;
  // Every step-8 survivor, before full verification. Called from workers.
  std::function<void(const Candidate&)> on_survivor;
  bool collect = true;
};

struct SearchOutcome {
  std::vector<Candidate> candidates;  // sorted by x
  bool complete = false;
  std::size_t intervals_total = 0;
  std::size_t intervals_done = 0;
  SearchStats stats;
};

namespace detail {

struct SearchContext {
  const SearchConfig& cfg;
  Wheel tp_wheel;
  Wheel tn_wheel;
};

class IntervalWorker {
 public:
  explicit IntervalWorker(const SearchContext& ctx)
      : ctx_(ctx), tables_(ctx.cfg.dfe, ctx.cfg.normalized_primes), secondary_(ctx.cfg.dfe, ctx.cfg.secondary_moduli) {
    // Rebuild the tables for a t_n only when enough t_p will use them.
    rebuild_min_ = std::max<u64>(1, tables_.rebuild_cost() / 16);
  }

  void run(u64 lo, u64 hi, std::vector<Candidate>& out, SearchStats& st, const SearchHooks& hooks) {
    if (lo >= hi) return;
    const DfeParams& dfe = ctx_.cfg.dfe;
    TpBlock block;
    try {
      block = generate_tp_block(dfe, ctx_.tp_wheel, lo, hi);
    } catch (const BlockTooLarge&) {
      if (hi - lo < 2) throw;
      u64 mid = lo + (hi - lo) / 2;
      run(lo, mid, out, st, hooks);
      run(mid, hi, out, st, hooks);
      return;
    }
    st.tp_generated += block.values.size();
    if (block.values.empty()) return;
    auto window = tn_window(block, dfe);
    if (!window) return;
    const Mode mode = dfe.mode;
    const unsigned power = mode == Mode::square ? 2 : 3;
    const u64 mp = dfe.mp.product();
    const u64 mn = dfe.mn.product();
    ctx_.tn_wheel.for_each(window->lo, window->hi + 1, [&](u64 tn) {
      ++st.tn_visited;
      IndexRange r = match_tp_range(block, tn, dfe);
      if (r.empty()) return;
      st.pairs += r.size();
      const bool use_tables = r.size() >= rebuild_min_;
      if (use_tables) {
        tables_.normalize(tn);
        ++st.table_rebuilds;
      }
      for (std::size_t i = r.begin; i < r.end; ++i) {
        const u64 tp = block.values[i];
        if (use_tables ? !tables_.passes(tp) : !tables_.passes_direct(tp, tn)) continue;
        ++st.normalized_passed;
        if (!secondary_.passes(tp, tn)) continue;
        ++st.secondary_passed;
        const u128 x = recombine(tp, tn, mp, mn);
        if (is_perfect_power(x, power)) continue;
        ++st.survivors;
        Candidate c{x, tp, tn, 0};
        if (hooks.on_survivor) hooks.on_survivor(c);
        if (!verify_pseudo(mode, x, ctx_.cfg.p_max)) continue;
        ++st.verified;
        c.verified_p = verified_level(mode, x, ctx_.cfg.p_max);
        out.push_back(c);
      }
    });
  }

 private:
  const SearchContext& ctx_;
  NormalizedTableSet tables_;
  SecondaryFilter secondary_;
  u64 rebuild_min_ = 1;
};

inline std::filesystem::path worker_file(const std::filesystem::path& dir, unsigned id) {
  return dir / ("worker-" + std::to_string(id) + ".txt");
}

inline std::vector<std::filesystem::path> worker_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::exists(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("worker-", 0) == 0 && e.path().extension() == ".txt") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool in_intervals(const std::vector<TpInterval>& sorted, u64 tp) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), tp, [](u64 v, const TpInterval& iv) { return v < iv.lo; });
  if (it == sorted.begin()) return false;
  --it;
  return tp >= it->lo && tp < it->hi;
}

}  // namespace detail

inline Candidate to_candidate(const OutputRecord& r, Mode mode, u64 p_max) {
  return {r.x, r.tp, r.tn, verified_level(mode, r.x, p_max)};
}

inline SearchOutcome run_search(const SearchConfig& cfg, const SearchHooks& hooks = {}) {
  cfg.validate();
  namespace fs = std::filesystem;
  detail::SearchContext ctx{cfg, make_tp_wheel(cfg.mode(), cfg.dfe.mp, cfg.dfe.mn),
                            make_tn_wheel(cfg.mode(), cfg.dfe.mp, cfg.dfe.mn)};
  const std::vector<TpInterval> intervals = partition_work(cfg);
  const std::string fp = fingerprint(cfg);

  Checkpoint cp{cfg.mode(), cfg.p_max, cfg.dfe.mp.product(), cfg.dfe.mn.product(), cfg.dfe.x_lo, cfg.dfe.x_hi, fp, {}, 0};
  const bool checkpointing = !cfg.checkpoint_path.empty();
  const bool have_output = !cfg.output_dir.empty();
  if (checkpointing && fs::exists(cfg.checkpoint_path)) {
    if (!cfg.resume) throw InvalidConfig("checkpoint " + cfg.checkpoint_path.string() + " exists; resume it or remove it");
    Checkpoint old = checkpoint_load(cfg.checkpoint_path);
    if (old.fingerprint != fp) {
      throw FingerprintMismatch("checkpoint fingerprint " + old.fingerprint + " does not match this search (" + fp + ")");
    }
    for (const auto& iv : old.done) {
      if (!std::binary_search(intervals.begin(), intervals.end(), iv)) {
        throw CheckpointCorrupt("checkpoint lists an interval that is not part of this search");
      }
    }
    cp.done = old.done;
  }
  std::vector<TpInterval> done_sorted = cp.done;
  std::sort(done_sorted.begin(), done_sorted.end());

  if (have_output) {
    fs::create_directories(cfg.output_dir);
    for (const auto& f : detail::worker_files(cfg.output_dir)) {
      if (cp.done.empty()) {
        fs::remove(f);
        continue;
      }
      // Drop records from intervals that never reached the checkpoint; they
      // will be produced again.
      auto recs = read_records(f);
      std::vector<OutputRecord> keep;
      for (auto& r : recs) {
        if (detail::in_intervals(done_sorted, r.tp)) keep.push_back(std::move(r));
      }
      if (keep.size() != recs.size()) write_records_atomic(f, keep);
    }
    fs::remove(cfg.output_dir / "results.txt");
  }

  std::vector<TpInterval> pending;
  for (const auto& iv : intervals) {
    if (!std::binary_search(done_sorted.begin(), done_sorted.end(), iv)) pending.push_back(iv);
  }

  SearchOutcome outcome;
  outcome.intervals_total = intervals.size();
  std::mutex mu;
  std::size_t next = 0;
  std::size_t completed = cp.done.size();
  std::size_t found = 0;
  bool stop = false;
  std::exception_ptr failure;

  auto cursor_value = [&] { return next < pending.size() ? pending[next].lo : static_cast<u64>(cfg.dfe.tp_end()); };
  cp.cursor = cursor_value();
  if (checkpointing) checkpoint_save(cp, cfg.checkpoint_path);

  auto worker_main = [&](unsigned id) {
    try {
      detail::IntervalWorker worker(ctx);
      std::ofstream file;
      if (have_output) {
        file.open(detail::worker_file(cfg.output_dir, id), std::ios::app);
        if (!file) throw OutputError("cannot open output file for worker " + std::to_string(id));
      }
      for (;;) {
        TpInterval iv;
        {
          std::lock_guard lock(mu);
          if (stop || next >= pending.size()) return;
          iv = pending[next++];
        }
        std::vector<Candidate> batch;
        SearchStats st;
        worker.run(iv.lo, iv.hi, batch, st, hooks);
        std::sort(batch.begin(), batch.end(), [](const Candidate& a, const Candidate& b) { return a.x < b.x; });
        if (have_output) {
          const std::string ts = iso8601_now();
          for (const auto& c : batch) write_record(file, c, ts);
          file.flush();
          if (!file) throw OutputError("write failed for worker " + std::to_string(id));
        }
        std::lock_guard lock(mu);
        cp.done.push_back(iv);
        cp.cursor = cursor_value();
        if (checkpointing) checkpoint_save(cp, cfg.checkpoint_path);
        ++completed;
        found += batch.size();
        outcome.stats += st;
        if (hooks.on_batch) hooks.on_batch(batch);
        if (hooks.collect && !have_output) outcome.candidates.insert(outcome.candidates.end(), batch.begin(), batch.end());
        if (hooks.on_progress) hooks.on_progress({completed, intervals.size(), found});
        if (hooks.should_stop && hooks.should_stop(completed)) stop = true;
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      stop = true;
    }
  };

  const unsigned nworkers = static_cast<unsigned>(std::min<std::size_t>(cfg.workers, std::max<std::size_t>(1, pending.size())));
  if (nworkers <= 1) {
    worker_main(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < nworkers; ++i) threads.emplace_back(worker_main, i);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  outcome.intervals_done = completed;
  outcome.complete = completed == intervals.size();
  if (have_output && outcome.complete) {
    std::vector<OutputRecord> all;
    for (const auto& f : detail::worker_files(cfg.output_dir)) {
      auto recs = read_records(f);
      all.insert(all.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    sort_unique_records(all);
    write_records_atomic(cfg.output_dir / "results.txt", all);
    if (hooks.collect) {
      outcome.candidates.reserve(all.size());
      for (const auto& r : all) outcome.candidates.push_back(to_candidate(r, cfg.mode(), cfg.p_max));
    }
  }
  std::sort(outcome.candidates.begin(), outcome.candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.x < b.x; });
  return outcome;
}

struct LevelMinimum {
  u64 level;
  u128 x;
};

// For each prime level from p_max up to the highest level any candidate
// reaches, the smallest candidate valid at that level. These are the
// pseudo-powers for those levels when the search started at x = 2.
inline std::vector<LevelMinimum> minimal_by_level(const std::vector<Candidate>& cands, u64 p_max) {
  std::vector<std::pair<u128, u64>> byx;
  byx.reserve(cands.size());
  u64 top = 0;
  for (const auto& c : cands) {
    byx.emplace_back(c.x, c.verified_p);
    top = std::max(top, c.verified_p);
  }
  std::sort(byx.begin(), byx.end());
  std::vector<u64> levels;
  for (u64 p : primes_up_to(top)) {
    if (p >= p_max) levels.push_back(p);
  }
  std::vector<LevelMinimum> out;
  std::size_t assigned = 0;
  for (const auto& [x, v] : byx) {
    while (assigned < levels.size() && levels[assigned] <= v) out.push_back({levels[assigned++], x});
    if (assigned == levels.size()) break;
  }
  return out;
}

}  // namespace pseudosieve
