#include "reviewnet/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace reviewnet {

namespace {

std::int32_t require_stripped_node(const ReviewNetwork& net, PersonId v, const char* op) {
  if (!net.diagonal_stripped)
    throw InternalError(std::string(op) + " requires a diagonal-stripped network");
  auto index = net.index_of(v);
  if (!index) throw InternalError(std::string(op) + ": unknown node " + std::to_string(v));
  return *index;
}

}  // namespace

ReviewRatio maintainer_review_ratio(const ReviewNetwork& net, const MaintainerSet& maintainers,
                                    PersonId v) {
  std::int32_t row = require_stripped_node(net, v, "maintainer_review_ratio");
  ReviewRatio ratio;
  ratio.person = v;
  if (!maintainers.contains(v)) return ratio;  // undefined for non-maintainers
  ratio.defined = true;

  std::uint64_t total = 0;
  std::uint64_t targeted = 0;
  for (auto it = net.weights.lower_bound({row, 0});
       it != net.weights.end() && it->first.first == row; ++it) {
    total += it->second.weight;
    PersonId author = net.nodes[static_cast<std::size_t>(it->first.second)];
    if (maintainers.contains(author)) targeted += it->second.weight;
  }
  ratio.basis = total;
  ratio.value = total == 0 ? 0.0 : static_cast<double>(targeted) / static_cast<double>(total);
  return ratio;
}

ReviewRatio affiliation_review_ratio(const ReviewNetwork& net, const WindowAttributes& attrs,
                                     PersonId v) {
  std::int32_t row = require_stripped_node(net, v, "affiliation_review_ratio");
  ReviewRatio ratio;
  ratio.person = v;
  const Affiliation& own = attrs.affiliation(v);
  if (!own) return ratio;  // undefined without an organization
  ratio.defined = true;

  std::uint64_t total = 0;
  std::uint64_t targeted = 0;
  for (auto it = net.weights.lower_bound({row, 0});
       it != net.weights.end() && it->first.first == row; ++it) {
    total += it->second.weight;
    PersonId author = net.nodes[static_cast<std::size_t>(it->first.second)];
    const Affiliation& theirs = attrs.affiliation(author);
    if (theirs && *theirs == *own) targeted += it->second.weight;
  }
  ratio.basis = total;
  ratio.value = total == 0 ? 0.0 : static_cast<double>(targeted) / static_cast<double>(total);
  return ratio;
}

GroupStats summarize(const std::vector<double>& values) {
  GroupStats stats;
  stats.n = values.size();
  if (values.empty()) return stats;
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double squares = 0.0;
    for (double v : values) squares += (v - stats.mean) * (v - stats.mean);
    stats.sd = std::sqrt(squares / static_cast<double>(values.size() - 1));
  }
  return stats;
}

GroupStats group_stats(const std::vector<double>& fractions) {
  std::vector<double> percentages;
  percentages.reserve(fractions.size());
  for (double f : fractions) percentages.push_back(f * 100.0);
  return summarize(percentages);
}

const CellStats* HomophilyReport::cell(const Subsystem& subsystem,
                                       const std::string& window) const {
  for (const CellStats& c : cells) {
    if (c.subsystem == subsystem && c.window == window) return &c;
  }
  return nullptr;
}

HomophilyReport trend_series(const std::vector<ReviewNetwork>& stripped_networks,
                             const std::vector<WindowAttributes>& window_attributes) {
  if (stripped_networks.empty()) throw FatalInputError("no networks: the report grid is empty");

  HomophilyReport report;
  for (const ReviewNetwork& net : stripped_networks) {
    if (!net.diagonal_stripped) throw InternalError("trend_series requires stripped networks");
    if (std::find(report.windows.begin(), report.windows.end(), net.window) ==
        report.windows.end())
      report.windows.push_back(net.window);
    if (std::find(report.subsystems.begin(), report.subsystems.end(), net.subsystem) ==
        report.subsystems.end())
      report.subsystems.push_back(net.subsystem);
  }
  std::sort(report.windows.begin(), report.windows.end());
  std::sort(report.subsystems.begin(), report.subsystems.end());

  auto attributes_for = [&](const std::string& window) -> const WindowAttributes* {
    for (const WindowAttributes& attrs : window_attributes) {
      if (attrs.window == window) return &attrs;
    }
    return nullptr;
  };

  for (const Subsystem& subsystem : report.subsystems) {
    for (const std::string& window : report.windows) {
      const ReviewNetwork* net = nullptr;
      for (const ReviewNetwork& candidate : stripped_networks) {
        if (candidate.subsystem == subsystem && candidate.window == window) {
          net = &candidate;
          break;
        }
      }
      CellStats cell;
      cell.window = window;
      cell.subsystem = subsystem;
      if (net == nullptr || net->nodes.empty()) {
        report.cells.push_back(std::move(cell));
        continue;
      }
      const WindowAttributes* attrs = attributes_for(window);
      if (attrs == nullptr)
        throw InternalError("no attributes for window " + window);

      cell.present = true;
      cell.node_count = static_cast<std::uint32_t>(net->nodes.size());
      cell.review_weight = total_weight(*net);

      std::vector<double> maintainer_ratios;
      std::map<std::string, std::vector<double>> affiliation_ratios;
      std::vector<double> out_maintainers;
      std::vector<double> out_others;
      for (PersonId v : net->nodes) {
        bool is_maintainer = attrs->maintainers.contains(v);
        if (is_maintainer) {
          ++cell.maintainer_count;
          maintainer_ratios.push_back(maintainer_review_ratio(*net, attrs->maintainers, v).value);
        }
        ReviewRatio affiliation = affiliation_review_ratio(*net, *attrs, v);
        if (affiliation.defined)
          affiliation_ratios[*attrs->affiliation(v)].push_back(affiliation.value);
        double strength = static_cast<double>(out_strength(*net, v));
        (is_maintainer ? out_maintainers : out_others).push_back(strength);
      }
      cell.maintainer_share_pct =
          100.0 * static_cast<double>(cell.maintainer_count) / static_cast<double>(cell.node_count);
      cell.maintainer_ratio = group_stats(maintainer_ratios);
      for (const auto& [org, values] : affiliation_ratios)
        cell.affiliation_ratio[org] = group_stats(values);
      cell.out_strength_maintainers = summarize(out_maintainers);
      cell.out_strength_others = summarize(out_others);
      report.cells.push_back(std::move(cell));
    }
  }

  // Shading marks: cells whose mean reaches the table mean / their
  // subsystem-column mean over all defined cells.
  double table_sum = 0.0;
  std::size_t table_n = 0;
  std::map<std::string, std::pair<double, std::size_t>> column_acc;
  for (const CellStats& cell : report.cells) {
    if (!cell.present || cell.maintainer_ratio.empty()) continue;
    table_sum += cell.maintainer_ratio.mean;
    ++table_n;
    auto& acc = column_acc[cell.subsystem.name];
    acc.first += cell.maintainer_ratio.mean;
    ++acc.second;
  }
  if (table_n > 0) {
    double table_mean = table_sum / static_cast<double>(table_n);
    for (CellStats& cell : report.cells) {
      if (!cell.present || cell.maintainer_ratio.empty()) continue;
      cell.shaded_vs_table_mean = cell.maintainer_ratio.mean >= table_mean;
      const auto& acc = column_acc[cell.subsystem.name];
      double column_mean = acc.first / static_cast<double>(acc.second);
      cell.shaded_vs_column_mean = cell.maintainer_ratio.mean >= column_mean;
    }
  }
  return report;
}

}  // namespace reviewnet
