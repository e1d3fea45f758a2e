#include "reviewnet/trailers.hpp"

#include <array>
#include <optional>

#include "reviewnet/util.hpp"

namespace reviewnet {

const char* to_string(TrailerKind kind) {
  switch (kind) {
    case TrailerKind::kSigned:
      return "signed";
    case TrailerKind::kAcked:
      return "acked";
    case TrailerKind::kReviewed:
      return "reviewed";
  }
  return "?";
}

namespace {

// One keyword alternative: lowercase words joined by space-or-hyphen. The
// short forms ("acked:", "reviewed:") carry their colon in the last word and
// take no extra terminator.
struct KeywordForm {
  TrailerKind kind;
  std::array<std::string_view, 3> words;
  int word_count;
  bool wants_terminator;  // space, colon, or semicolon after the last word
};

// Longest forms first so that e.g. "signed-off-by" is not eaten by
// "signed-by" + terminator logic.
constexpr KeywordForm kForms[] = {
    {TrailerKind::kSigned, {"signed", "off", "by"}, 3, true},
    {TrailerKind::kSigned, {"signed", "of", "by"}, 3, true},
    {TrailerKind::kSigned, {"signed", "by", ""}, 2, true},
    {TrailerKind::kAcked, {"acked", "off", "by"}, 3, true},
    {TrailerKind::kAcked, {"acked", "by", ""}, 2, true},
    {TrailerKind::kAcked, {"acked:", "", ""}, 1, false},
    {TrailerKind::kReviewed, {"reviewed", "by", ""}, 2, true},
    {TrailerKind::kReviewed, {"reviewed:", "", ""}, 1, false},
};

bool is_joiner(char c) { return c == ' ' || c == '-'; }
bool is_terminator(char c) { return c == ' ' || c == ':' || c == ';'; }

char lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

bool matches_word(std::string_view line, std::size_t pos, std::string_view word) {
  if (pos + word.size() > line.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (lower_ascii(line[pos + i]) != word[i]) return false;
  }
  return true;
}

struct KeywordMatch {
  TrailerKind kind;
  std::size_t end;  // first position after the terminator
};

std::optional<KeywordMatch> match_keyword_at(std::string_view line, std::size_t pos) {
  for (const KeywordForm& form : kForms) {
    std::size_t p = pos;
    bool ok = true;
    for (int w = 0; w < form.word_count && ok; ++w) {
      if (w > 0) {
        if (p < line.size() && is_joiner(line[p])) {
          ++p;
        } else {
          ok = false;
          break;
        }
      }
      if (matches_word(line, p, form.words[static_cast<std::size_t>(w)])) {
        p += form.words[static_cast<std::size_t>(w)].size();
      } else {
        ok = false;
      }
    }
    if (!ok) continue;
    if (form.wants_terminator) {
      if (p < line.size() && is_terminator(line[p])) {
        ++p;
      } else {
        continue;
      }
    }
    return KeywordMatch{form.kind, p};
  }
  return std::nullopt;
}

struct TailMatch {
  std::string name;
  std::string email;
};

// Matches  name '<' local '@' head ('.'|',') tld ['>']  starting at `begin`,
// every wildcard running to the nearest following delimiter.
std::optional<TailMatch> match_tail(std::string_view line, std::size_t begin) {
  std::size_t lt = line.find('<', begin);
  if (lt == std::string_view::npos || lt == begin) return std::nullopt;
  std::string_view name = trim(line.substr(begin, lt - begin));
  if (name.empty()) return std::nullopt;

  std::size_t at = line.find('@', lt + 1);
  if (at == std::string_view::npos || at == lt + 1) return std::nullopt;

  std::size_t sep = line.find_first_of(".,", at + 1);
  if (sep == std::string_view::npos || sep == at + 1) return std::nullopt;

  std::size_t gt = line.find('>', sep + 1);
  std::size_t email_end = (gt == std::string_view::npos) ? line.size() : gt;
  if (email_end == sep + 1) return std::nullopt;  // empty tail after the dot

  std::string_view email = trim(line.substr(lt + 1, email_end - (lt + 1)));
  std::size_t at_count = 0;
  for (char c : email) {
    if (c == '@') ++at_count;
  }
  if (at_count != 1) return std::nullopt;

  return TailMatch{std::string(name), std::string(email)};
}

}  // namespace

std::string sanitize_trailer_line(std::string_view line) {
  std::string out(line);
  for (;;) {
    auto first = match_keyword_at(out, 0);
    if (!first) return out;
    std::size_t probe = first->end;
    while (probe < out.size() && (out[probe] == ' ' || out[probe] == '\t')) ++probe;
    auto duplicate = match_keyword_at(out, probe);
    if (!duplicate) return out;
    out.erase(first->end, duplicate->end - first->end);
  }
}

std::vector<Trailer> extract_trailers(const std::vector<std::string>& body) {
  std::vector<Trailer> out;
  for (std::size_t index = 0; index < body.size(); ++index) {
    std::string line = sanitize_trailer_line(body[index]);
    auto keyword = match_keyword_at(line, 0);
    if (!keyword) continue;
    auto tail = match_tail(line, keyword->end);
    if (!tail) continue;
    out.push_back(Trailer{keyword->kind, std::move(tail->name), std::move(tail->email), index});
  }
  return out;
}

}  // namespace reviewnet
