#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "reviewnet/attributes.hpp"
#include "reviewnet/graph.hpp"
#include "reviewnet/metrics.hpp"

namespace reviewnet {

// Per-node attribute row as written to nodes.csv, aligned with the node list
// of its network.
struct NodeRow {
  PersonId person = -1;
  std::string canonical_name;
  bool is_maintainer = false;
  Affiliation affiliation;
  std::uint64_t signed_commits = 0;  // diagonal entry
  std::uint64_t out_strength = 0;    // on the diagonal-stripped view
  std::uint64_t in_strength = 0;
};

struct NetworkRecord {
  ReviewNetwork full;  // diagonal included; the stripped view is derived
  std::vector<NodeRow> node_rows;
};

// Everything one mining run produces; report.json serializes this whole
// structure, and the report subcommand reloads it to re-emit any format.
struct ReportData {
  std::string threshold;
  std::string window_kind;
  std::string attribution;
  std::string from_window;
  std::string to_window;
  HomophilyReport report;
  std::vector<NetworkRecord> networks;  // ordered by (subsystem, window)
};

inline constexpr int kReportSchemaVersion = 1;

// --- tables ---
void write_nodes_csv(std::ostream& out, const ReportData& data);
void write_edges_csv(std::ostream& out, const ReportData& data);
void write_cells_csv(std::ostream& out, const ReportData& data);
void write_affiliations_csv(std::ostream& out, const ReportData& data);

// --- json ---
void write_report_json(std::ostream& out, const ReportData& data);
ReportData load_report_json(std::istream& in);  // throws FatalInputError

// --- graphml ---
// Directed graph of the diagonal-stripped view with canonical_name /
// is_maintainer / affiliation node attributes and a weight edge attribute.
std::string graphml_document(const NetworkRecord& record);

// --- svg ---
std::string trend_chart_svg(const HomophilyReport& report, const std::string& title,
                            const std::string& metric);  // metric: node_count |
                                                         // maintainer_share_pct |
                                                         // maintainer_ratio_mean_pct
std::string box_chart_svg(const HomophilyReport& report, const std::string& organization);

// Organizations that appear with at least one defined ratio anywhere.
std::vector<std::string> organizations_in(const HomophilyReport& report);

// --- bundle ---
enum class ReportFormat { kCsv, kJson, kGraphml, kSvg };
std::set<ReportFormat> parse_formats(const std::string& text);  // "csv|json|graphml|svg|all"

// Writes the selected formats under `dir` (created if missing) and a MANIFEST
// listing every emitted file, written last. All artifact bytes are a pure
// function of `data`.
void write_bundle(const std::filesystem::path& dir, const ReportData& data,
                  const std::set<ReportFormat>& formats);

std::string csv_field(std::string_view value);
std::string xml_escape(std::string_view value);
std::string format_fixed(double value, int decimals = 2);

}  // namespace reviewnet
