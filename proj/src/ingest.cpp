#include "reviewnet/ingest.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace reviewnet {

TimeWindow calendar_year_window(int year) {
  return TimeWindow{utc_year_start(year), utc_year_start(year + 1), std::to_string(year)};
}

namespace {

bool is_valid_hash(std::string_view h) {
  if (h.size() != 40) return false;
  for (char c : h) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!ok) return false;
  }
  return true;
}

std::string describe(std::string_view chunk) {
  std::string_view head = chunk.substr(0, std::min<std::size_t>(chunk.size(), 12));
  return std::string(trim(head));
}

// Parses one 0x1E-delimited chunk. Returns false with `reason` set when the
// chunk is not a well-formed record.
bool parse_record(std::string_view chunk, CommitRecord& out, std::string& reason) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (int i = 0; i < 6; ++i) {
    std::size_t sep = chunk.find(kFieldSeparator, pos);
    if (sep == std::string_view::npos) {
      reason = "expected 7 fields";
      return false;
    }
    fields.emplace_back(chunk.substr(pos, sep - pos));
    pos = sep + 1;
  }
  std::string_view tail = chunk.substr(pos);
  if (tail.find(kFieldSeparator) != std::string_view::npos) {
    reason = "expected 7 fields";
    return false;
  }

  out.hash = std::string(trim(fields[0]));
  if (!is_valid_hash(out.hash)) {
    reason = "invalid hash";
    return false;
  }
  out.author_name = sanitize_utf8(fields[1]);
  out.author_email = sanitize_utf8(fields[2]);
  out.author_date = std::string(trim(fields[3]));
  out.commit_date = std::string(trim(fields[4]));

  auto author_time = parse_iso8601(out.author_date);
  auto commit_time = parse_iso8601(out.commit_date);
  if (!author_time || !commit_time) {
    reason = "unparseable date";
    return false;
  }
  out.author_time = *author_time;
  out.commit_time = *commit_time;

  std::string_view flag = trim(fields[5]);
  if (flag == "0") {
    out.is_merge = false;
  } else if (flag == "1") {
    out.is_merge = true;
  } else {
    reason = "merge flag must be 0 or 1";
    return false;
  }

  // Body runs up to the last line equal to "--"; touched paths follow it.
  std::vector<std::string> lines = split_lines(normalize_newlines(sanitize_utf8(tail)));
  std::size_t marker = lines.size();
  for (std::size_t i = lines.size(); i > 0; --i) {
    if (lines[i - 1] == kPathSectionMarker) {
      marker = i - 1;
      break;
    }
  }
  if (marker == lines.size()) {
    reason = "missing path section marker";
    return false;
  }
  out.body.assign(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(marker));
  out.paths.clear();
  for (std::size_t i = marker + 1; i < lines.size(); ++i) {
    if (!trim(lines[i]).empty()) out.paths.push_back(lines[i]);
  }
  return true;
}

}  // namespace

std::vector<CommitRecord> parse_commit_stream(std::string_view input, Diagnostics& diag) {
  std::vector<CommitRecord> out;
  std::size_t pos = 0;
  std::size_t ordinal = 0;
  while (pos <= input.size()) {
    std::size_t next = input.find(kRecordSeparator, pos);
    bool last = next == std::string_view::npos;
    std::string_view chunk = last ? input.substr(pos) : input.substr(pos, next - pos);
    pos = last ? input.size() + 1 : next + 1;
    if (trim(chunk).empty()) continue;  // separator framing / blank tail
    ++ordinal;
    CommitRecord record;
    std::string reason;
    if (parse_record(chunk, record, reason)) {
      out.push_back(std::move(record));
    } else if (last) {
      ++diag.truncated_streams;
      diag.warn("truncated stream: discarding partial final record (" + reason + ", near '" +
                describe(chunk) + "')");
    } else {
      ++diag.malformed_records;
      diag.warn("malformed record #" + std::to_string(ordinal) + ": " + reason + " (near '" +
                describe(chunk) + "')");
    }
  }
  return out;
}

std::vector<CommitRecord> parse_commit_stream(std::istream& input, Diagnostics& diag) {
  std::ostringstream buffer;
  buffer << input.rdbuf();
  std::string data = buffer.str();
  return parse_commit_stream(std::string_view(data), diag);
}

std::string write_commit_stream(const std::vector<CommitRecord>& records) {
  std::string out;
  for (const CommitRecord& r : records) {
    out.push_back(kRecordSeparator);
    out += r.hash;
    out.push_back(kFieldSeparator);
    out += r.author_name;
    out.push_back(kFieldSeparator);
    out += r.author_email;
    out.push_back(kFieldSeparator);
    out += r.author_date;
    out.push_back(kFieldSeparator);
    out += r.commit_date;
    out.push_back(kFieldSeparator);
    out += r.is_merge ? "1" : "0";
    out.push_back(kFieldSeparator);
    for (const std::string& line : r.body) {
      out += line;
      out.push_back('\n');
    }
    out += kPathSectionMarker;
    for (const std::string& path : r.paths) {
      out.push_back('\n');
      out += path;
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<CommitRecord> filter_commits(const std::vector<CommitRecord>& records,
                                         const TimeWindow& window) {
  if (window.start >= window.end) throw InternalError("filter_commits: empty window");
  std::vector<CommitRecord> out;
  for (const CommitRecord& r : records) {
    if (!r.is_merge && window.contains(r.commit_time)) out.push_back(r);
  }
  return out;
}

Subsystem subsystem_of_path(std::string_view path) {
  std::size_t begin = 0;
  while (begin < path.size() && path[begin] == '/') ++begin;
  std::size_t slash = path.find('/', begin);
  if (slash == std::string_view::npos) return Subsystem::root();
  return Subsystem{std::string(path.substr(begin, slash - begin))};
}

std::set<Subsystem> assign_subsystems(const CommitRecord& record) {
  std::set<Subsystem> out;
  for (const std::string& path : record.paths) {
    if (trim(path).empty()) continue;
    out.insert(subsystem_of_path(path));
  }
  return out;
}

}  // namespace reviewnet
