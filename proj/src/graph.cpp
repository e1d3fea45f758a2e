#include "reviewnet/graph.hpp"

#include <algorithm>

namespace reviewnet {

std::optional<std::int32_t> ReviewNetwork::index_of(PersonId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) return std::nullopt;
  return static_cast<std::int32_t>(it - nodes.begin());
}

std::uint64_t ReviewNetwork::weight_at(std::int32_t reviewer_index,
                                       std::int32_t author_index) const {
  auto it = weights.find({reviewer_index, author_index});
  return it == weights.end() ? 0 : it->second.weight;
}

ReviewNetwork build_network(const std::vector<CommitTrailers>& commits,
                            const IdentityTable& identities, Subsystem subsystem,
                            std::string window, Diagnostics& diag) {
  ReviewNetwork net;
  net.window = std::move(window);
  net.subsystem = std::move(subsystem);

  // First pass: the node set is everyone who authored or reviewed here.
  std::vector<PersonId> persons;
  for (const CommitTrailers& entry : commits) {
    auto author = identities.person_of(entry.commit->author_name);
    if (!author) continue;  // reported in the counting pass
    persons.push_back(*author);
    for (const Trailer& trailer : *entry.trailers) {
      if (auto reviewer = identities.person_of(trailer.raw_name)) persons.push_back(*reviewer);
    }
  }
  std::sort(persons.begin(), persons.end());
  persons.erase(std::unique(persons.begin(), persons.end()), persons.end());
  net.nodes = std::move(persons);

  for (const CommitTrailers& entry : commits) {
    auto author = identities.person_of(entry.commit->author_name);
    if (!author) {
      ++diag.unresolved_trailers;
      diag.warn("commit " + entry.commit->hash + ": author '" + entry.commit->author_name +
                "' missing from the identity table; commit dropped");
      continue;
    }
    std::int32_t author_index = *net.index_of(*author);
    for (const Trailer& trailer : *entry.trailers) {
      auto reviewer = identities.person_of(trailer.raw_name);
      if (!reviewer) {
        ++diag.unresolved_trailers;
        diag.warn("commit " + entry.commit->hash + ": trailer name '" + trailer.raw_name +
                  "' missing from the identity table; trailer dropped");
        continue;
      }
      std::int32_t reviewer_index = *net.index_of(*reviewer);
      EdgeCounts& edge = net.weights[{reviewer_index, author_index}];
      ++edge.weight;
      switch (trailer.kind) {
        case TrailerKind::kSigned:
          ++edge.signed_off;
          break;
        case TrailerKind::kAcked:
          ++edge.acked;
          break;
        case TrailerKind::kReviewed:
          ++edge.reviewed;
          break;
      }
    }
  }
  return net;
}

std::vector<std::uint64_t> diagonal(const ReviewNetwork& net) {
  std::vector<std::uint64_t> out(net.nodes.size(), 0);
  for (const auto& [key, edge] : net.weights) {
    if (key.first == key.second) out[static_cast<std::size_t>(key.first)] = edge.weight;
  }
  return out;
}

ReviewNetwork strip_diagonal(const ReviewNetwork& net) {
  ReviewNetwork out;
  out.window = net.window;
  out.subsystem = net.subsystem;
  out.nodes = net.nodes;
  out.diagonal_stripped = true;
  for (const auto& [key, edge] : net.weights) {
    if (key.first != key.second) out.weights.emplace(key, edge);
  }
  return out;
}

namespace {

std::int32_t require_node(const ReviewNetwork& net, PersonId v, const char* op) {
  if (!net.diagonal_stripped)
    throw InternalError(std::string(op) + " requires a diagonal-stripped network");
  auto index = net.index_of(v);
  if (!index) throw InternalError(std::string(op) + ": unknown node " + std::to_string(v));
  return *index;
}

}  // namespace

std::uint64_t out_strength(const ReviewNetwork& net, PersonId v) {
  std::int32_t row = require_node(net, v, "out_strength");
  std::uint64_t sum = 0;
  for (auto it = net.weights.lower_bound({row, 0});
       it != net.weights.end() && it->first.first == row; ++it) {
    sum += it->second.weight;
  }
  return sum;
}

std::uint64_t in_strength(const ReviewNetwork& net, PersonId v) {
  std::int32_t column = require_node(net, v, "in_strength");
  std::uint64_t sum = 0;
  for (const auto& [key, edge] : net.weights) {
    if (key.second == column) sum += edge.weight;
  }
  return sum;
}

std::uint64_t total_weight(const ReviewNetwork& net) {
  std::uint64_t sum = 0;
  for (const auto& [key, edge] : net.weights) sum += edge.weight;
  return sum;
}

std::vector<std::uint64_t> row_sums(const ReviewNetwork& net) {
  std::vector<std::uint64_t> out(net.nodes.size(), 0);
  for (const auto& [key, edge] : net.weights) out[static_cast<std::size_t>(key.first)] += edge.weight;
  return out;
}

std::vector<std::uint64_t> column_sums(const ReviewNetwork& net) {
  std::vector<std::uint64_t> out(net.nodes.size(), 0);
  for (const auto& [key, edge] : net.weights)
    out[static_cast<std::size_t>(key.second)] += edge.weight;
  return out;
}

}  // namespace reviewnet
