#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reviewnet {

// Problems with user-supplied inputs that cannot be recovered from.
// The CLI maps these to exit code 1.
class FatalInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariants. The CLI maps these to exit code 2.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Counters and messages for recoverable input problems. Messages are meant
// for stderr; they never end up inside emitted artifacts.
struct Diagnostics {
  std::uint64_t malformed_records = 0;
  std::uint64_t truncated_streams = 0;
  std::uint64_t unresolved_trailers = 0;
  std::uint64_t unknown_override_aliases = 0;
  std::uint64_t empty_snapshots = 0;
  std::uint64_t bad_map_lines = 0;
  std::uint64_t emails_without_at = 0;

  std::vector<std::string> messages;

  void warn(std::string message) { messages.push_back(std::move(message)); }
  void merge(const Diagnostics& other);
  bool clean() const;
};

// ---------------------------------------------------------------------------
// UTF-8

// Decodes UTF-8 into Unicode scalar values. Invalid sequences decode to one
// U+FFFD per rejected byte; overlong forms, surrogates and values beyond
// U+10FFFF are rejected.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

// Replaces invalid UTF-8 with U+FFFD and leaves valid text untouched.
std::string sanitize_utf8(std::string_view text);

// ---------------------------------------------------------------------------
// Text helpers

bool is_ascii_space(char c);
std::string_view trim(std::string_view s);
std::string ascii_lower(std::string_view s);

// Case-folds scalar values for comparison purposes. Covers ASCII, Latin-1,
// Latin Extended-A, Greek and Cyrillic uppercase ranges; other scripts pass
// through unchanged.
char32_t fold_scalar(char32_t c);
std::string fold_case_utf8(std::string_view s);

// Collapses every run of whitespace (ASCII plus the common Unicode space
// characters) to a single U+0020 and trims both ends.
std::string collapse_whitespace(std::string_view s);

// Splits on '\n'. "a\nb\n" and "a\nb" both give {"a", "b"}.
std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view text);

// ---------------------------------------------------------------------------
// Timestamps

// Parses ISO-8601 (YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+HH:MM|+HHMM|+HH]) into
// UTC epoch seconds. A missing zone designator is read as UTC.
std::optional<std::int64_t> parse_iso8601(std::string_view text);

int utc_year(std::int64_t epoch_seconds);
std::int64_t utc_year_start(int year);

// ---------------------------------------------------------------------------
// Parallelism

// Thread budget: `requested` if positive, else REVIEWNET_THREADS, else the
// hardware concurrency. Always at least 1.
int resolve_thread_count(int requested);

// Runs fn(0..n-1) on up to `threads` workers. Callers are responsible for
// writing to disjoint slots; results must not depend on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace reviewnet
