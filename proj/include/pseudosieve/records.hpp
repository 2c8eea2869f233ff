#pragma once

// Output records, one per line: "<x> <t_p> <t_n> <iso8601-timestamp>".

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"

namespace pseudosieve {

struct Candidate {
  u128 x = 0;
  u64 tp = 0;
  u64 tn = 0;
  u64 verified_p = 0;  // largest prime level x satisfies

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct OutputRecord {
  u128 x;
  u64 tp;
  u64 tn;
  std::string timestamp;
};

inline std::string iso8601_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_record(std::ostream& out, const Candidate& c, const std::string& timestamp) {
  out << to_string(c.x) << ' ' << c.tp << ' ' << c.tn << ' ' << timestamp << '\n';
}

inline OutputRecord parse_record(const std::string& line) {
  std::istringstream ls(line);
  std::string x, tp, tn, ts, extra;
  if (!(ls >> x >> tp >> tn >> ts) || (ls >> extra)) throw InvalidRecord("malformed output record '" + line + "'");
  try {
    return {parse_u128(x), parse_u64(tp), parse_u64(tn), ts};
  } catch (const InvalidArgument& e) {
    throw InvalidRecord(std::string("malformed output record: ") + e.what());
  }
}

inline std::vector<OutputRecord> read_records(const std::filesystem::path& path) {
  std::vector<OutputRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_record(line));
  }
  return out;
}

// Sort by x and drop repeated x values, keeping the first occurrence.
inline void sort_unique_records(std::vector<OutputRecord>& recs) {
  std::stable_sort(recs.begin(), recs.end(), [](const OutputRecord& a, const OutputRecord& b) { return a.x < b.x; });
  recs.erase(std::unique(recs.begin(), recs.end(), [](const OutputRecord& a, const OutputRecord& b) { return a.x == b.x; }),
             recs.end());
}

inline void write_records_atomic(const std::filesystem::path& path, const std::vector<OutputRecord>& recs) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw OutputError("cannot write " + tmp.string());
    for (const auto& r : recs) out << to_string(r.x) << ' ' << r.tp << ' ' << r.tn << ' ' << r.timestamp << '\n';
    out.flush();
    if (!out) throw OutputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw OutputError("cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace pseudosieve
