#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reviewnet/util.hpp"

namespace reviewnet {

using PersonId = std::int32_t;

// One raw contributor name as observed in the corpus.
struct Alias {
  std::string raw_name;
  std::uint64_t occurrence_count = 0;
  std::set<std::string> emails_seen;
};

// Exact decimal similarity threshold. Comparisons stay in integer arithmetic
// so the strict "similarity > threshold" rule has no floating-point edges.
struct SimilarityThreshold {
  std::int64_t num = 85;
  std::int64_t den = 100;

  static SimilarityThreshold parse(std::string_view text);  // throws FatalInputError
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  // True iff 1 - distance/max_len > num/den.
  bool links(std::size_t distance, std::size_t max_len) const;
  // Largest distance that can still link two strings of length <= max_len;
  // -1 when no distance qualifies.
  std::int64_t max_linking_distance(std::size_t max_len) const;
};

struct OverrideDirective {
  enum class Kind { kMerge, kSplit };
  Kind kind;
  std::string first;
  std::string second;  // empty for splits
  int line_number = 0;
};
using OverrideList = std::vector<OverrideDirective>;

// Tab-separated override file: "merge\tnameA\tnameB" or "split\tname";
// '#' starts a comment. Syntactically bad lines are counted and skipped.
OverrideList parse_override_list(std::istream& in, Diagnostics& diag);

struct IdentityCluster {
  std::string canonical_name;  // the member with the highest occurrence count
  // (name, occurrence count), sorted by name.
  std::vector<std::pair<std::string, std::uint64_t>> members;
};

// A partition of all observed aliases into persons. person_id values are
// dense 0..n-1 in canonical-name order, so the table is reproducible for a
// given alias set regardless of input order.
struct IdentityTable {
  std::vector<IdentityCluster> clusters;  // index == person_id
  std::unordered_map<std::string, PersonId> person_by_alias;

  std::optional<PersonId> person_of(std::string_view raw_name) const;
  const std::string& canonical_name(PersonId id) const;
  std::size_t person_count() const { return clusters.size(); }
};

// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

// Early-exit variant: exact when the distance is <= bound, otherwise returns
// some value > bound.
std::size_t levenshtein_bounded(std::u32string_view a, std::u32string_view b, std::size_t bound);

// 1 - L(a,b) / max(|a|,|b|) over scalar values; 1.0 for two empty strings.
double similarity(std::string_view a, std::string_view b);

// Clusters aliases: names are case-folded and whitespace-collapsed, every
// pair with similarity strictly above the threshold is linked, clusters are
// the transitive closure of the links, then overrides are applied (merges
// force-link, splits pin an alias into a singleton). Throws FatalInputError
// on an alias that is both merged and split.
IdentityTable resolve_identities(const std::vector<Alias>& aliases,
                                 const SimilarityThreshold& threshold,
                                 const OverrideList& overrides, Diagnostics& diag,
                                 int threads = 1);

// Applies overrides to an existing table; unknown alias names are warned
// about and skipped.
IdentityTable apply_overrides(const IdentityTable& table, const OverrideList& overrides,
                              Diagnostics& diag);

// The normal form used for alias comparison (case fold + whitespace collapse).
std::string normalize_name(std::string_view raw_name);

}  // namespace reviewnet
