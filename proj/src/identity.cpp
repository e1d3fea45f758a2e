#include "reviewnet/identity.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>

namespace reviewnet {

SimilarityThreshold SimilarityThreshold::parse(std::string_view text) {
  std::string_view s = trim(text);
  std::int64_t num = 0;
  std::int64_t den = 1;
  std::size_t i = 0;
  bool any_digit = false;
  for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
    num = num * 10 + (s[i] - '0');
    any_digit = true;
    if (num > 1'000'000'000) throw FatalInputError("threshold out of range: " + std::string(text));
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
      num = num * 10 + (s[i] - '0');
      den *= 10;
      any_digit = true;
      if (den > 1'000'000'000) throw FatalInputError("threshold has too many digits: " + std::string(text));
    }
  }
  if (!any_digit || i != s.size())
    throw FatalInputError("threshold must be a decimal number, got: " + std::string(text));
  if (num <= 0 || num > den)
    throw FatalInputError("threshold must lie in (0, 1], got: " + std::string(text));
  return SimilarityThreshold{num, den};
}

bool SimilarityThreshold::links(std::size_t distance, std::size_t max_len) const {
  const auto m = static_cast<std::int64_t>(max_len);
  const auto d = static_cast<std::int64_t>(distance);
  if (m == 0) return d == 0 && num < den;  // two empty strings: similarity 1
  return den * (m - d) > num * m;
}

std::int64_t SimilarityThreshold::max_linking_distance(std::size_t max_len) const {
  const auto m = static_cast<std::int64_t>(max_len);
  const std::int64_t scaled = m * (den - num);
  if (scaled <= 0) return -1;
  return (scaled - 1) / den;
}

// ---------------------------------------------------------------------------
// Edit distance

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t n = b.size();
  std::vector<std::size_t> row(n + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      diagonal = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, substitution});
    }
  }
  return row[n];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(decode_utf8(a), decode_utf8(b));
}

std::size_t levenshtein_bounded(std::u32string_view a, std::u32string_view b, std::size_t bound) {
  if (a.size() < b.size()) std::swap(a, b);
  if (a.size() - b.size() > bound) return bound + 1;
  const std::size_t n = b.size();
  const std::size_t kInf = bound + 1;
  std::vector<std::size_t> row(n + 1, kInf);
  for (std::size_t j = 0; j <= std::min(n, bound); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    // Only the diagonal band [i-bound, i+bound] can stay within the bound.
    std::size_t lo = (i > bound) ? i - bound : 1;
    std::size_t hi = std::min(n, i + bound);
    std::size_t diagonal = (lo == 1) ? row[0] : row[lo - 1];
    std::size_t previous_left = (i <= bound) ? i : kInf;  // row[lo-1] for this row
    if (lo == 1) row[0] = previous_left;
    std::size_t best = previous_left;
    for (std::size_t j = lo; j <= hi; ++j) {
      std::size_t substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      diagonal = row[j];
      std::size_t up = row[j] < kInf ? row[j] + 1 : kInf;
      std::size_t left = previous_left < kInf ? previous_left + 1 : kInf;
      std::size_t value = std::min({up, left, substitution, kInf});
      row[j] = value;
      previous_left = value;
      best = std::min(best, value);
    }
    if (hi < n) row[hi + 1] = kInf;  // left edge of the next row's band
    if (best > bound) return bound + 1;
  }
  return std::min(row[n], kInf);
}

double similarity(std::string_view a, std::string_view b) {
  std::u32string ua = decode_utf8(a);
  std::u32string ub = decode_utf8(b);
  std::size_t max_len = std::max(ua.size(), ub.size());
  if (max_len == 0) return 1.0;  // identical empties
  std::size_t distance = levenshtein(ua, ub);
  return 1.0 - static_cast<double>(distance) / static_cast<double>(max_len);
}

std::string normalize_name(std::string_view raw_name) {
  return fold_case_utf8(collapse_whitespace(raw_name));
}

// ---------------------------------------------------------------------------
// Override file

OverrideList parse_override_list(std::istream& in, Diagnostics& diag) {
  OverrideList out;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    if (trim(view).empty() || trim(view).front() == '#') continue;
    std::vector<std::string> fields = split(view, '\t');
    if (fields[0] == "merge" && fields.size() == 3 && !fields[1].empty() && !fields[2].empty()) {
      out.push_back({OverrideDirective::Kind::kMerge, fields[1], fields[2], line_number});
    } else if (fields[0] == "split" && fields.size() == 2 && !fields[1].empty()) {
      out.push_back({OverrideDirective::Kind::kSplit, fields[1], "", line_number});
    } else {
      ++diag.bad_map_lines;
      diag.warn("override line " + std::to_string(line_number) + " is not a merge/split directive");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clustering

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);  // keep the smaller index as root
    parent[a] = b;
  }
};

// Internal clustering state: aliases plus a partition given as groups of
// indices into the alias vector.
struct Partition {
  std::vector<Alias> aliases;                   // sorted by raw_name
  std::vector<std::vector<std::size_t>> groups;
};

IdentityTable finalize(const Partition& partition) {
  IdentityTable table;
  table.clusters.reserve(partition.groups.size());
  for (const auto& group : partition.groups) {
    if (group.empty()) continue;
    IdentityCluster cluster;
    std::uint64_t best_count = 0;
    for (std::size_t idx : group) {
      const Alias& alias = partition.aliases[idx];
      cluster.members.emplace_back(alias.raw_name, alias.occurrence_count);
      if (alias.occurrence_count > best_count ||
          (alias.occurrence_count == best_count &&
           (cluster.canonical_name.empty() || alias.raw_name < cluster.canonical_name))) {
        best_count = alias.occurrence_count;
        cluster.canonical_name = alias.raw_name;
      }
    }
    std::sort(cluster.members.begin(), cluster.members.end());
    table.clusters.push_back(std::move(cluster));
  }
  std::sort(table.clusters.begin(), table.clusters.end(),
            [](const IdentityCluster& a, const IdentityCluster& b) {
              return a.canonical_name < b.canonical_name;
            });
  for (std::size_t id = 0; id < table.clusters.size(); ++id) {
    for (const auto& [name, count] : table.clusters[id].members) {
      table.person_by_alias.emplace(name, static_cast<PersonId>(id));
    }
  }
  return table;
}

void check_override_conflicts(const OverrideList& overrides) {
  std::set<std::string> split_names;
  for (const OverrideDirective& d : overrides) {
    if (d.kind == OverrideDirective::Kind::kSplit) split_names.insert(d.first);
  }
  if (split_names.empty()) return;
  std::vector<std::string> conflicts;
  for (const OverrideDirective& d : overrides) {
    if (d.kind != OverrideDirective::Kind::kMerge) continue;
    if (split_names.count(d.first) || split_names.count(d.second)) {
      conflicts.push_back("line " + std::to_string(d.line_number) + ": merge '" + d.first +
                          "' + '" + d.second + "' conflicts with a split directive");
    }
  }
  if (!conflicts.empty()) {
    std::string message = "conflicting identity overrides:";
    for (const std::string& c : conflicts) message += "\n  " + c;
    throw FatalInputError(message);
  }
}

Partition apply_override_directives(Partition partition, const OverrideList& overrides,
                                    Diagnostics& diag) {
  check_override_conflicts(overrides);

  std::unordered_map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < partition.aliases.size(); ++i)
    index_of.emplace(partition.aliases[i].raw_name, i);

  std::vector<std::size_t> group_of(partition.aliases.size());
  for (std::size_t g = 0; g < partition.groups.size(); ++g)
    for (std::size_t idx : partition.groups[g]) group_of[idx] = g;

  auto lookup = [&](const std::string& name, int line_number) -> std::optional<std::size_t> {
    auto it = index_of.find(name);
    if (it == index_of.end()) {
      ++diag.unknown_override_aliases;
      diag.warn("override line " + std::to_string(line_number) + ": unknown alias '" + name +
                "', skipped");
      return std::nullopt;
    }
    return it->second;
  };

  for (const OverrideDirective& d : overrides) {
    if (d.kind != OverrideDirective::Kind::kMerge) continue;
    auto a = lookup(d.first, d.line_number);
    auto b = lookup(d.second, d.line_number);
    if (!a || !b) continue;
    std::size_t ga = group_of[*a];
    std::size_t gb = group_of[*b];
    if (ga == gb) continue;
    if (gb < ga) std::swap(ga, gb);
    for (std::size_t idx : partition.groups[gb]) {
      group_of[idx] = ga;
      partition.groups[ga].push_back(idx);
    }
    partition.groups[gb].clear();
  }

  for (const OverrideDirective& d : overrides) {
    if (d.kind != OverrideDirective::Kind::kSplit) continue;
    auto a = lookup(d.first, d.line_number);
    if (!a) continue;
    std::size_t g = group_of[*a];
    if (partition.groups[g].size() <= 1) continue;
    auto& members = partition.groups[g];
    members.erase(std::remove(members.begin(), members.end(), *a), members.end());
    group_of[*a] = partition.groups.size();
    partition.groups.push_back({*a});
  }

  return partition;
}

}  // namespace

IdentityTable resolve_identities(const std::vector<Alias>& aliases,
                                 const SimilarityThreshold& threshold,
                                 const OverrideList& overrides, Diagnostics& diag, int threads) {
  if (threshold.num <= 0 || threshold.num > threshold.den)
    throw FatalInputError("similarity threshold must lie in (0, 1]");

  Partition partition;
  partition.aliases = aliases;
  std::sort(partition.aliases.begin(), partition.aliases.end(),
            [](const Alias& a, const Alias& b) { return a.raw_name < b.raw_name; });
  // Fold accidental duplicates of the same raw name into one alias.
  std::size_t write = 0;
  for (std::size_t read = 0; read < partition.aliases.size(); ++read) {
    if (write > 0 && partition.aliases[write - 1].raw_name == partition.aliases[read].raw_name) {
      Alias& keep = partition.aliases[write - 1];
      Alias& dup = partition.aliases[read];
      keep.occurrence_count += dup.occurrence_count;
      keep.emails_seen.insert(dup.emails_seen.begin(), dup.emails_seen.end());
    } else {
      if (write != read) partition.aliases[write] = std::move(partition.aliases[read]);
      ++write;
    }
  }
  partition.aliases.resize(write);

  const std::size_t n = partition.aliases.size();
  UnionFind uf(n);

  // Aliases sharing a normal form are identical for comparison purposes;
  // dedupe them first so the quadratic pass only sees distinct forms.
  std::vector<std::u32string> norms(n);
  for (std::size_t i = 0; i < n; ++i)
    norms[i] = decode_utf8(normalize_name(partition.aliases[i].raw_name));

  std::map<std::u32string, std::size_t> first_with_norm;
  std::vector<std::size_t> representatives;
  const bool equal_links = threshold.num < threshold.den;  // similarity 1 > threshold
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = first_with_norm.emplace(norms[i], i);
    if (inserted) {
      representatives.push_back(i);
    } else if (equal_links) {
      uf.unite(it->second, i);
    }
  }

  const std::size_t r = representatives.size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> linked_per_rep(r);
  parallel_for(r, threads, [&](std::size_t a) {
    const std::size_t i = representatives[a];
    const std::u32string& na = norms[i];
    for (std::size_t b = a + 1; b < r; ++b) {
      const std::size_t j = representatives[b];
      const std::u32string& nb = norms[j];
      std::size_t max_len = std::max(na.size(), nb.size());
      std::int64_t max_distance = threshold.max_linking_distance(max_len);
      if (max_distance < 0) continue;
      std::size_t length_gap = na.size() > nb.size() ? na.size() - nb.size() : nb.size() - na.size();
      if (static_cast<std::int64_t>(length_gap) > max_distance) continue;
      std::size_t distance = levenshtein_bounded(na, nb, static_cast<std::size_t>(max_distance));
      if (threshold.links(distance, max_len)) linked_per_rep[a].emplace_back(i, j);
    }
  });
  for (const auto& links : linked_per_rep)
    for (const auto& [i, j] : links) uf.unite(i, j);

  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < n; ++i) by_root[uf.find(i)].push_back(i);
  for (auto& [root, members] : by_root) partition.groups.push_back(std::move(members));

  partition = apply_override_directives(std::move(partition), overrides, diag);
  return finalize(partition);
}

IdentityTable apply_overrides(const IdentityTable& table, const OverrideList& overrides,
                              Diagnostics& diag) {
  Partition partition;
  for (const IdentityCluster& cluster : table.clusters) {
    std::vector<std::size_t> group;
    for (const auto& [name, count] : cluster.members) {
      group.push_back(partition.aliases.size());
      Alias alias;
      alias.raw_name = name;
      alias.occurrence_count = count;
      partition.aliases.push_back(std::move(alias));
    }
    partition.groups.push_back(std::move(group));
  }
  partition = apply_override_directives(std::move(partition), overrides, diag);
  return finalize(partition);
}

std::optional<PersonId> IdentityTable::person_of(std::string_view raw_name) const {
  auto it = person_by_alias.find(std::string(raw_name));
  if (it == person_by_alias.end()) return std::nullopt;
  return it->second;
}

const std::string& IdentityTable::canonical_name(PersonId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= clusters.size())
    throw InternalError("person id out of range");
  return clusters[static_cast<std::size_t>(id)].canonical_name;
}

}  // namespace reviewnet
