#pragma once

// Command-line front end: search, verify, oracle, analyze.
//
// Results go to `out`, progress and diagnostics to `err`. Nothing touches the
// filesystem until every flag has parsed.

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "moduli.hpp"
#include "mode.hpp"
#include "search.hpp"
#include "verify.hpp"

namespace pseudosieve {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

struct UsageError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

inline u128 flag_u128(const std::string& name, const std::string& v) {
  try {
    return parse_u128(v);
  } catch (const InvalidArgument& e) {
    throw UsageError(name + ": " + e.what());
  }
}

inline u64 flag_u64(const std::string& name, const std::string& v) {
  u128 x = flag_u128(name, v);
  if (x > UINT64_MAX) throw UsageError(name + ": value exceeds 64 bits");
  return static_cast<u64>(x);
}

inline Mode flag_mode(const std::string& v) {
  try {
    return parse_mode(v);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--mode: ") + e.what());
  }
}

inline std::string factors_string(const FactoredModulus& m) {
  std::string s;
  for (u64 f : m.factors()) s += (s.empty() ? "" : "*") + std::to_string(f);
  return s;
}

}  // namespace detail

inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search for pseudosquares and pseudocubes with doubly-focused enumeration.", "pseudosieve"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string mode_s, pmax_s, from_s, to_s, workers_s, checkpoint, output, moduli_s, block_cap_s;
  bool resume = false;
  auto* search = app.add_subcommand("search", "Run a doubly-focused search over an x range");
  search->add_option("--mode", mode_s, "square or cube")->required();
  search->add_option("--pmax", pmax_s, "Prime level the results must satisfy")->required();
  search->add_option("--from", from_s, "Lower x bound (decimal or e.g. 7.5e24)")->required();
  search->add_option("--to", to_s, "Upper x bound, inclusive")->required();
  search->add_option("--workers", workers_s, "Worker threads (default: $PSEUDOSIEVE_WORKERS or 1)");
  search->add_option("--checkpoint", checkpoint, "Checkpoint file");
  search->add_flag("--resume", resume, "Resume from the checkpoint");
  search->add_option("--output", output, "Output directory for per-worker and merged records");
  search->add_option("--moduli", moduli_s, "Moduli file, or 'production' for the record-run moduli");
  search->add_option("--block-cap", block_cap_s, "Maximum t_p values per block (default 40000000)");

  std::string vmode_s, value_s, vpmax_s;
  auto* verify = app.add_subcommand("verify", "Check whether a value is a pseudosquare/pseudocube at a prime level");
  verify->add_option("--mode", vmode_s, "square or cube")->required();
  verify->add_option("--value", value_s, "Value to check")->required();
  verify->add_option("--pmax", vpmax_s, "Prime level")->required();

  std::string omode_s, opmax_s, bound_s;
  auto* oracle = app.add_subcommand("oracle", "Smallest value at a prime level by direct scanning");
  oracle->add_option("--mode", omode_s, "square or cube")->required();
  oracle->add_option("--pmax", opmax_s, "Prime level")->required();
  oracle->add_option("--bound", bound_s, "Scan bound (at most 1e9)")->required();

  std::vector<std::string> tables;
  bool crossover = false;
  auto* analyze = app.add_subcommand("analyze", "Growth-constant statistics for a table of known values");
  analyze->add_option("--table", tables, "Table file(s): 'n prime L' per line")->required();
  analyze->add_flag("--crossover", crossover, "Print L_q^(2/3) / L_p for n present in both a square and a cube table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) {
      Mode mode = detail::flag_mode(vmode_s);
      u128 x = detail::flag_u128("--value", value_s);
      u64 p = detail::flag_u64("--pmax", vpmax_s);
      if (p < 3 || !is_prime(p)) throw detail::UsageError("--pmax must be an odd prime");
      out << (verify_pseudo(mode, x, p) ? "true" : "false") << '\n';
      return kExitOk;
    }
    if (*oracle) {
      Mode mode = detail::flag_mode(omode_s);
      u64 p = detail::flag_u64("--pmax", opmax_s);
      u64 bound = detail::flag_u64("--bound", bound_s);
      if (p < 3 || !is_prime(p)) throw detail::UsageError("--pmax must be an odd prime");
      if (bound > kOracleBoundLimit) throw detail::UsageError("--bound must be at most 1e9");
      auto v = brute_force_min(mode, p, bound);
      out << (v ? std::to_string(*v) : std::string("none")) << '\n';
      return kExitOk;
    }
    if (*analyze) {
      std::vector<PseudoRecord> squares, cubes;
      for (const auto& path : tables) {
        for (auto& r : load_table(path)) (r.kind == Mode::square ? squares : cubes).push_back(std::move(r));
      }
      for (const auto* group : {&squares, &cubes}) {
        if (group->empty()) continue;
        const char* name = group == &squares ? "c2" : "c3";
        out << std::setw(4) << "n" << ' ' << std::setw(6) << "prime" << ' ' << std::setw(30) << "L" << ' ' << std::setw(12)
            << name << '\n';
        for (const auto& r : *group) {
          out << std::setw(4) << r.n << ' ' << std::setw(6) << r.prime << ' ' << std::setw(30) << r.L.str() << ' '
              << std::setw(12) << std::setprecision(6) << conjecture_ratio(r) << '\n';
        }
        TableStats s = table_stats(*group);
        out << name << " min " << s.min << " max " << s.max << " mean " << s.mean << '\n';
      }
      if (crossover) {
        std::map<std::size_t, const PseudoRecord*> by_n;
        for (const auto& r : squares) by_n[r.n] = &r;
        for (const auto& c : cubes) {
          auto it = by_n.find(c.n);
          if (it == by_n.end()) continue;
          out << "crossover n=" << c.n << ' ' << std::setprecision(6) << crossover_ratio(*it->second, c) << '\n';
        }
      }
      return kExitOk;
    }

    // search
    Mode mode = detail::flag_mode(mode_s);
    u64 p_max = detail::flag_u64("--pmax", pmax_s);
    if (p_max < 3 || !is_prime(p_max)) throw detail::UsageError("--pmax must be an odd prime");
    u128 from = detail::flag_u128("--from", from_s);
    u128 to = detail::flag_u128("--to", to_s);
    SearchOptions opt;
    if (!block_cap_s.empty()) opt.block_cap = static_cast<std::size_t>(detail::flag_u64("--block-cap", block_cap_s));
    if (workers_s.empty()) {
      if (const char* env = std::getenv("PSEUDOSIEVE_WORKERS"); env && *env) workers_s = env;
    }
    if (!workers_s.empty()) opt.workers = static_cast<unsigned>(detail::flag_u64("--workers", workers_s));
    if (!moduli_s.empty()) opt.moduli = moduli_s == "production" ? production_moduli(mode) : load_moduli(moduli_s, mode);
    opt.checkpoint_path = checkpoint;
    opt.resume = resume;
    opt.output_dir = output;
    SearchConfig cfg = make_search_config(mode, p_max, from, to, opt);
    cfg.validate();
    err << "moduli M_p=" << cfg.dfe.mp.product() << " (" << detail::factors_string(cfg.dfe.mp) << ") M_n=" << cfg.dfe.mn.product()
        << " (" << detail::factors_string(cfg.dfe.mn) << ")\n";

    SearchHooks hooks;
    hooks.on_progress = [&](const Progress& p) {
      err << "intervals " << p.intervals_done << '/' << p.intervals_total << ", candidates " << p.candidates << '\n';
    };
    SearchOutcome res = run_search(cfg, hooks);
    out << "count " << res.candidates.size() << '\n';
    out << "min " << (res.candidates.empty() ? std::string("none") : to_string(res.candidates.front().x)) << '\n';
    for (const auto& lm : minimal_by_level(res.candidates, p_max)) out << "level " << lm.level << ' ' << to_string(lm.x) << '\n';
    return kExitOk;
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace pseudosieve
