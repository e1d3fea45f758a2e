#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reviewnet/attributes.hpp"
#include "reviewnet/graph.hpp"

namespace reviewnet {

// Share of one node's reviews that target a given attribute group. Undefined
// when the node itself lacks the qualifying attribute; zero when the node
// qualifies but has performed no reviews at all.
struct ReviewRatio {
  PersonId person = -1;
  bool defined = false;
  double value = 0.0;
  std::uint64_t basis = 0;  // total reviews carried out (the denominator)
};

// Defined iff v is a maintainer; value = reviews targeting maintainers over
// all reviews by v. Requires a diagonal-stripped network.
ReviewRatio maintainer_review_ratio(const ReviewNetwork& net, const MaintainerSet& maintainers,
                                    PersonId v);

// Defined iff v has an affiliation; value = reviews targeting authors with
// the same affiliation over all reviews by v.
ReviewRatio affiliation_review_ratio(const ReviewNetwork& net, const WindowAttributes& attrs,
                                     PersonId v);

// Mean and sample standard deviation (n-1), both scaled to percent.
struct GroupStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;

  bool empty() const { return n == 0; }
  bool degenerate() const { return n < 2; }
};

// For ratio lists (values are fractions in [0,1]; output is in percent).
GroupStats group_stats(const std::vector<double>& fractions);
// For plain values (out-strengths and the like; no scaling).
GroupStats summarize(const std::vector<double>& values);

// All per-(subsystem, window) descriptive statistics.
struct CellStats {
  std::string window;
  Subsystem subsystem;
  bool present = false;  // false for grid cells with no commits at all

  std::uint32_t node_count = 0;
  std::uint32_t maintainer_count = 0;
  double maintainer_share_pct = 0.0;
  std::uint64_t review_weight = 0;  // diagonal-stripped total

  GroupStats maintainer_ratio;                   // over maintainers only
  std::map<std::string, GroupStats> affiliation_ratio;  // organization -> stats
  GroupStats out_strength_maintainers;           // raw units, not percent
  GroupStats out_strength_others;

  // Marks for cells whose mean maintainer ratio reaches the mean over the
  // whole grid / over the cell's subsystem column.
  bool shaded_vs_table_mean = false;
  bool shaded_vs_column_mean = false;
};

struct HomophilyReport {
  std::vector<std::string> windows;     // sorted labels
  std::vector<Subsystem> subsystems;    // sorted
  std::vector<CellStats> cells;         // subsystem-major, then window

  const CellStats* cell(const Subsystem& subsystem, const std::string& window) const;
};

// Builds the full per-cell report from diagonal-stripped networks and the
// per-window attributes. Networks must cover a (subsystem x window) grid;
// cells whose network has no nodes are marked absent. Throws FatalInputError
// when no networks are given.
HomophilyReport trend_series(const std::vector<ReviewNetwork>& stripped_networks,
                             const std::vector<WindowAttributes>& window_attributes);

}  // namespace reviewnet
