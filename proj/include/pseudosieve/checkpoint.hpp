#pragma once

// Line-oriented checkpoint file:
//
//   <mode> <pmax> <Mp> <Mn> <Xlo> <Xhi> <fingerprint>
//   done <tp_lo> <tp_hi>          (one per completed interval)
//   cursor <next_tp>
//
// The cursor line is always last, so a file cut short is detected.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"
#include "mode.hpp"

namespace pseudosieve {

struct TpInterval {
  u64 lo;  // inclusive
  u64 hi;  // exclusive
  friend bool operator==(const TpInterval&, const TpInterval&) = default;
  friend auto operator<=>(const TpInterval&, const TpInterval&) = default;
};

struct Checkpoint {
  Mode mode = Mode::square;
  u64 p_max = 0;
  u64 mp = 0;
  u64 mn = 0;
  u128 x_lo = 0;
  u128 x_hi = 0;
  std::string fingerprint;
  std::vector<TpInterval> done;
  u64 cursor = 0;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Writes to a sibling temp file, then renames over the target.
inline void checkpoint_save(const Checkpoint& cp, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw OutputError("cannot write checkpoint " + tmp.string());
    out << to_string(cp.mode) << ' ' << cp.p_max << ' ' << cp.mp << ' ' << cp.mn << ' ' << to_string(cp.x_lo) << ' '
        << to_string(cp.x_hi) << ' ' << cp.fingerprint << '\n';
    for (const auto& iv : cp.done) out << "done " << iv.lo << ' ' << iv.hi << '\n';
    out << "cursor " << cp.cursor << '\n';
    out.flush();
    if (!out) throw OutputError("failed writing checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw OutputError("cannot move checkpoint into place: " + ec.message());
}

inline Checkpoint checkpoint_load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointCorrupt("cannot open checkpoint " + path.string());
  auto corrupt = [&](const std::string& why) -> CheckpointCorrupt {
    return CheckpointCorrupt("checkpoint " + path.string() + ": " + why);
  };
  std::string line;
  if (!std::getline(in, line)) throw corrupt("missing header");
  Checkpoint cp;
  {
    std::istringstream hs(line);
    std::string mode, pmax, mp, mn, xlo, xhi, fp, extra;
    if (!(hs >> mode >> pmax >> mp >> mn >> xlo >> xhi >> fp) || (hs >> extra)) throw corrupt("malformed header");
    try {
      cp.mode = parse_mode(mode);
      cp.p_max = parse_u64(pmax);
      cp.mp = parse_u64(mp);
      cp.mn = parse_u64(mn);
      cp.x_lo = parse_u128(xlo);
      cp.x_hi = parse_u128(xhi);
    } catch (const InvalidArgument& e) {
      throw corrupt(e.what());
    }
    cp.fingerprint = fp;
  }
  bool have_cursor = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (have_cursor) throw corrupt("data after cursor line");
    std::istringstream ls(line);
    std::string tag, a, b, extra;
    ls >> tag;
    try {
      if (tag == "done") {
        if (!(ls >> a >> b) || (ls >> extra)) throw corrupt("malformed done line");
        TpInterval iv{parse_u64(a), parse_u64(b)};
        if (iv.lo >= iv.hi) throw corrupt("empty interval");
        cp.done.push_back(iv);
      } else if (tag == "cursor") {
        if (!(ls >> a) || (ls >> extra)) throw corrupt("malformed cursor line");
        cp.cursor = parse_u64(a);
        have_cursor = true;
      } else {
        throw corrupt("unknown line '" + line + "'");
      }
    } catch (const InvalidArgument& e) {
      throw corrupt(e.what());
    }
  }
  if (!have_cursor) throw corrupt("truncated (no cursor line)");
  auto sorted = cp.done;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].lo < sorted[i - 1].hi) throw corrupt("overlapping completed intervals");
  }
  return cp;
}

}  // namespace pseudosieve
