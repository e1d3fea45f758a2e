#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reviewnet/identity.hpp"
#include "reviewnet/ingest.hpp"
#include "reviewnet/trailers.hpp"
#include "reviewnet/util.hpp"

namespace reviewnet {

struct EdgeCounts {
  std::uint64_t weight = 0;
  std::uint64_t signed_off = 0;
  std::uint64_t acked = 0;
  std::uint64_t reviewed = 0;

  bool operator==(const EdgeCounts&) const = default;
};

// Weighted directed review adjacency for one (subsystem, window) slice.
// Rows are reviewers, columns are authors; the diagonal counts self
// sign-offs. Weights are raw counts, never truncated or dichotomized.
struct ReviewNetwork {
  std::string window;
  Subsystem subsystem;
  std::vector<PersonId> nodes;  // ascending person ids
  // (reviewer index, author index) -> counts; absent means zero.
  std::map<std::pair<std::int32_t, std::int32_t>, EdgeCounts> weights;
  bool diagonal_stripped = false;

  std::optional<std::int32_t> index_of(PersonId id) const;
  std::uint64_t weight_at(std::int32_t reviewer_index, std::int32_t author_index) const;
  std::size_t node_count() const { return nodes.size(); }
};

struct CommitTrailers {
  const CommitRecord* commit = nullptr;
  const std::vector<Trailer>* trailers = nullptr;
};

// Accumulates one network from commits already filtered to the slice. Every
// trailer resolving to person v on a commit authored by person u adds one to
// a[v][u] and to the matching kind counter; the author's own sign-off lands
// on the diagonal. Trailer names missing from the identity table are counted
// in `diag` and dropped.
ReviewNetwork build_network(const std::vector<CommitTrailers>& commits,
                            const IdentityTable& identities, Subsystem subsystem,
                            std::string window, Diagnostics& diag);

// a[i][i] per node, i.e. the number of commits each node authored and
// signed off itself.
std::vector<std::uint64_t> diagonal(const ReviewNetwork& net);

// The analysis view: same nodes, all diagonal entries removed. The input is
// left untouched.
ReviewNetwork strip_diagonal(const ReviewNetwork& net);

// Row sum for one node: total reviews performed on others. Requires a
// diagonal-stripped network and a known node.
std::uint64_t out_strength(const ReviewNetwork& net, PersonId v);
// Column sum: reviews received.
std::uint64_t in_strength(const ReviewNetwork& net, PersonId v);

std::uint64_t total_weight(const ReviewNetwork& net);
std::vector<std::uint64_t> row_sums(const ReviewNetwork& net);
std::vector<std::uint64_t> column_sums(const ReviewNetwork& net);

}  // namespace reviewnet
