#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reviewnet/util.hpp"

namespace reviewnet {

struct CommitRecord {
  std::string hash;  // 40 lowercase hex chars
  std::string author_name;
  std::string author_email;
  std::string author_date;  // ISO-8601 as read from the stream
  std::string commit_date;
  std::int64_t author_time = 0;  // UTC epoch seconds
  std::int64_t commit_time = 0;  // window bucketing uses this one
  bool is_merge = false;
  std::vector<std::string> body;  // line-ending normalization only
  std::vector<std::string> paths;
};

// A top-level source directory. Files sitting directly in the repository
// root map to the ROOT sentinel.
struct Subsystem {
  std::string name;

  static constexpr std::string_view kRootName = "ROOT";
  static Subsystem root() { return Subsystem{std::string(kRootName)}; }
  bool is_root() const { return name == kRootName; }

  auto operator<=>(const Subsystem&) const = default;
};

// Half-open interval over UTC epoch seconds.
struct TimeWindow {
  std::int64_t start = 0;  // inclusive
  std::int64_t end = 0;    // exclusive
  std::string label;

  bool contains(std::int64_t t) const { return t >= start && t < end; }
};

TimeWindow calendar_year_window(int year);

// Canonical log framing: records separated by 0x1E, header fields separated
// by 0x1F (hash, author name, author e-mail, author date, commit date, merge
// flag, body), a line "--" closing the body, then one touched path per line.
inline constexpr char kRecordSeparator = '\x1e';
inline constexpr char kFieldSeparator = '\x1f';
inline constexpr std::string_view kPathSectionMarker = "--";

// Parses a canonical log stream. Malformed records are counted in `diag` and
// skipped; a partial record at end of stream is discarded with a truncation
// warning. Record order follows the stream.
std::vector<CommitRecord> parse_commit_stream(std::string_view input, Diagnostics& diag);
std::vector<CommitRecord> parse_commit_stream(std::istream& input, Diagnostics& diag);

// Serializes records into the canonical format (the inverse of the parser,
// used to build replayable fixtures).
std::string write_commit_stream(const std::vector<CommitRecord>& records);

// Keeps non-merge records whose commit date falls inside the window.
std::vector<CommitRecord> filter_commits(const std::vector<CommitRecord>& records,
                                         const TimeWindow& window);

// Distinct first path components of the touched files; empty only when the
// record touches no files.
std::set<Subsystem> assign_subsystems(const CommitRecord& record);

Subsystem subsystem_of_path(std::string_view path);

}  // namespace reviewnet
