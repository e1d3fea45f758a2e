#include "reviewnet/attributes.hpp"

#include <fstream>
#include <sstream>

namespace reviewnet {

std::string_view affiliation_label(const Affiliation& affiliation) {
  return affiliation ? std::string_view(*affiliation) : kUnaffiliatedLabel;
}

AffiliationMap parse_affiliation_map(std::istream& in, Diagnostics& diag) {
  AffiliationMap map;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> fields = split(view, '\t');
    if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
      ++diag.bad_map_lines;
      diag.warn("affiliation map line " + std::to_string(line_number) +
                " is not 'domain<TAB>organization', skipped");
      continue;
    }
    map.domain_to_org[ascii_lower(trim(fields[0]))] = std::string(trim(fields[1]));
  }
  return map;
}

MaintainerHistory load_maintainer_history(const std::filesystem::path& dir,
                                          std::string_view window) {
  MaintainerHistory history;
  auto read_file = [](const std::filesystem::path& path) -> std::string {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  history.snapshot = read_file(dir / (std::string(window) + ".snapshot"));
  std::string added = read_file(dir / (std::string(window) + ".added"));
  history.added_lines = split_lines(normalize_newlines(added));
  return history;
}

MaintainerSet extract_maintainers(std::string_view first_snapshot,
                                  const std::vector<std::string>& added_lines,
                                  const IdentityTable& identities, std::string window,
                                  Diagnostics& diag) {
  MaintainerSet set;
  set.window = std::move(window);
  if (trim(first_snapshot).empty()) {
    ++diag.empty_snapshots;
    diag.warn("window " + set.window + ": empty maintainers snapshot");
  }

  // One folded haystack; lines are '\n'-joined, and alias names cannot span
  // the separator because they never contain newlines.
  std::string haystack = fold_case_utf8(first_snapshot);
  for (const std::string& line : added_lines) {
    haystack.push_back('\n');
    haystack += fold_case_utf8(line);
  }

  for (std::size_t id = 0; id < identities.person_count(); ++id) {
    for (const auto& [name, count] : identities.clusters[id].members) {
      std::string needle = fold_case_utf8(name);
      if (needle.empty()) continue;
      if (haystack.find(needle) != std::string::npos) {
        set.members.insert(static_cast<PersonId>(id));
        break;
      }
    }
  }
  return set;
}

namespace {

std::string domain_of(std::string_view email) {
  std::size_t at = email.rfind('@');
  if (at == std::string_view::npos) return {};
  std::string domain = ascii_lower(trim(email.substr(at + 1)));
  while (!domain.empty() && domain.back() == '.') domain.pop_back();
  return domain;
}

}  // namespace

Affiliation extract_affiliation(std::string_view email, const AffiliationMap& map,
                                Diagnostics* diag) {
  if (email.find('@') == std::string_view::npos) {
    if (diag) {
      ++diag->emails_without_at;
      diag->warn("e-mail without '@': '" + std::string(email) + "'");
    }
    return std::nullopt;
  }
  std::string domain = domain_of(email);
  if (domain.empty()) return std::nullopt;

  // Registrable suffix first ("vger.kernel.org" -> "kernel.org"), then the
  // full domain for maps that carry deeper entries.
  std::size_t last_dot = domain.rfind('.');
  if (last_dot != std::string::npos && last_dot > 0) {
    std::size_t second_dot = domain.rfind('.', last_dot - 1);
    std::string suffix =
        second_dot == std::string::npos ? domain : domain.substr(second_dot + 1);
    auto it = map.domain_to_org.find(suffix);
    if (it != map.domain_to_org.end()) return it->second;
  }
  auto it = map.domain_to_org.find(domain);
  if (it != map.domain_to_org.end()) return it->second;
  return std::nullopt;
}

Affiliation assign_person_affiliation(const std::map<std::string, std::uint64_t>& window_emails,
                                      const AffiliationMap& map) {
  std::map<std::string, std::uint64_t> votes;
  for (const auto& [email, count] : window_emails) {
    Affiliation org = extract_affiliation(email, map, nullptr);
    if (org) votes[*org] += count;
  }
  if (votes.empty()) return std::nullopt;
  const std::string* best = nullptr;
  std::uint64_t best_count = 0;
  for (const auto& [org, count] : votes) {
    if (count > best_count) {  // ties keep the first (smallest) key
      best = &org;
      best_count = count;
    }
  }
  return *best;
}

const Affiliation& WindowAttributes::affiliation(PersonId id) const {
  static const Affiliation kNone = std::nullopt;
  if (id < 0 || static_cast<std::size_t>(id) >= affiliation_by_person.size()) return kNone;
  return affiliation_by_person[static_cast<std::size_t>(id)];
}

}  // namespace reviewnet
