#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace reviewnet {

// The three review keyword groups. Other commit-footer keywords
// (Tested-by, Reported-by, CC, ...) are deliberately not extracted.
enum class TrailerKind { kSigned, kAcked, kReviewed };

const char* to_string(TrailerKind kind);

struct Trailer {
  TrailerKind kind;
  std::string raw_name;    // captured from the original line, case preserved
  std::string raw_email;   // between '<' and '>' (or end of line), trimmed
  std::size_t line_index;  // 0-based position in the commit body
};

// Removes keyword prefixes that were accidentally stacked in front of a line
// ("Signed-off-by: Signed-off-by: ..."). The leftmost keyword wins. Stable
// under repeated application.
std::string sanitize_trailer_line(std::string_view line);

// Scans a commit body for qualified review keyword lines.
//
// Keyword matching is case-insensitive and anchored at line start. The eight
// accepted forms are signed/signed-of/signed-off + by, acked / acked-off-by /
// acked-by, and reviewed / reviewed-by, with space-or-hyphen word joiners and
// a space/colon/semicolon terminator (a bare colon for the short acked/
// reviewed forms). The keyword must be directly followed by a
// name '<' local '@' domain ('.'|',') tld ['>'] tail, each part non-empty,
// with every wildcard running to the nearest following delimiter. Lines
// failing any part of the shape yield nothing.
std::vector<Trailer> extract_trailers(const std::vector<std::string>& body);

}  // namespace reviewnet
