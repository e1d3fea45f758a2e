#include "reviewnet/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace reviewnet {

using ordered_json = nlohmann::ordered_json;

std::string format_fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  // Avoid the "-0.00" artifact.
  std::string out(buffer);
  bool zero = true;
  for (char c : out) {
    if (c >= '1' && c <= '9') {
      zero = false;
      break;
    }
  }
  if (zero && !out.empty() && out[0] == '-') out.erase(0, 1);
  return out;
}

std::string csv_field(std::string_view value) {
  bool needs_quotes = value.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string xml_escape(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

namespace {

const char* bool_text(bool b) { return b ? "true" : "false"; }

constexpr std::string_view kNA = "NA";

std::string stat_or_na(bool defined, double value) {
  return defined ? format_fixed(value) : std::string(kNA);
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV tables

void write_nodes_csv(std::ostream& out, const ReportData& data) {
  out << "window,subsystem,person_id,canonical_name,is_maintainer,affiliation,"
         "signed_commits,out_strength,in_strength\n";
  for (const NetworkRecord& record : data.networks) {
    for (const NodeRow& row : record.node_rows) {
      out << csv_field(record.full.window) << ',' << csv_field(record.full.subsystem.name) << ','
          << row.person << ',' << csv_field(row.canonical_name) << ','
          << bool_text(row.is_maintainer) << ',' << csv_field(affiliation_label(row.affiliation))
          << ',' << row.signed_commits << ',' << row.out_strength << ',' << row.in_strength
          << '\n';
    }
  }
}

void write_edges_csv(std::ostream& out, const ReportData& data) {
  out << "window,subsystem,reviewer_id,author_id,weight,signed,acked,reviewed\n";
  for (const NetworkRecord& record : data.networks) {
    const ReviewNetwork& net = record.full;
    for (const auto& [key, edge] : net.weights) {
      PersonId reviewer = net.nodes[static_cast<std::size_t>(key.first)];
      PersonId author = net.nodes[static_cast<std::size_t>(key.second)];
      out << csv_field(net.window) << ',' << csv_field(net.subsystem.name) << ',' << reviewer
          << ',' << author << ',' << edge.weight << ',' << edge.signed_off << ',' << edge.acked
          << ',' << edge.reviewed << '\n';
    }
  }
}

void write_cells_csv(std::ostream& out, const ReportData& data) {
  out << "window,subsystem,present,node_count,maintainer_count,maintainer_share_pct,"
         "review_weight,maintainer_ratio_n,maintainer_ratio_mean_pct,maintainer_ratio_sd_pct,"
         "shaded_vs_table_mean,shaded_vs_column_mean,"
         "out_strength_maintainer_n,out_strength_maintainer_mean,out_strength_maintainer_sd,"
         "out_strength_other_n,out_strength_other_mean,out_strength_other_sd\n";
  for (const CellStats& cell : data.report.cells) {
    out << csv_field(cell.window) << ',' << csv_field(cell.subsystem.name) << ','
        << bool_text(cell.present) << ',' << cell.node_count << ',' << cell.maintainer_count
        << ',' << stat_or_na(cell.present, cell.maintainer_share_pct) << ',' << cell.review_weight
        << ',' << cell.maintainer_ratio.n << ','
        << stat_or_na(!cell.maintainer_ratio.empty(), cell.maintainer_ratio.mean) << ','
        << stat_or_na(!cell.maintainer_ratio.empty(), cell.maintainer_ratio.sd) << ','
        << bool_text(cell.shaded_vs_table_mean) << ',' << bool_text(cell.shaded_vs_column_mean)
        << ',' << cell.out_strength_maintainers.n << ','
        << stat_or_na(!cell.out_strength_maintainers.empty(), cell.out_strength_maintainers.mean)
        << ','
        << stat_or_na(!cell.out_strength_maintainers.empty(), cell.out_strength_maintainers.sd)
        << ',' << cell.out_strength_others.n << ','
        << stat_or_na(!cell.out_strength_others.empty(), cell.out_strength_others.mean) << ','
        << stat_or_na(!cell.out_strength_others.empty(), cell.out_strength_others.sd) << '\n';
  }
}

void write_affiliations_csv(std::ostream& out, const ReportData& data) {
  out << "window,subsystem,organization,n,ratio_mean_pct,ratio_sd_pct\n";
  for (const CellStats& cell : data.report.cells) {
    for (const auto& [org, stats] : cell.affiliation_ratio) {
      if (stats.empty()) continue;
      out << csv_field(cell.window) << ',' << csv_field(cell.subsystem.name) << ','
          << csv_field(org) << ',' << stats.n << ',' << format_fixed(stats.mean) << ','
          << format_fixed(stats.sd) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ordered_json stats_json(const GroupStats& stats) {
  ordered_json j;
  j["n"] = stats.n;
  if (stats.empty()) {
    j["mean"] = nullptr;
    j["sd"] = nullptr;
  } else {
    j["mean"] = stats.mean;
    j["sd"] = stats.sd;
  }
  return j;
}

GroupStats stats_from_json(const ordered_json& j) {
  GroupStats stats;
  stats.n = j.at("n").get<std::size_t>();
  if (!j.at("mean").is_null()) stats.mean = j.at("mean").get<double>();
  if (!j.at("sd").is_null()) stats.sd = j.at("sd").get<double>();
  return stats;
}

}  // namespace

void write_report_json(std::ostream& out, const ReportData& data) {
  ordered_json root;
  root["schema_version"] = kReportSchemaVersion;
  ordered_json parameters;
  parameters["threshold"] = data.threshold;
  parameters["window"] = data.window_kind;
  parameters["subsystem_attribution"] = data.attribution;
  parameters["from"] = data.from_window;
  parameters["to"] = data.to_window;
  root["parameters"] = parameters;

  root["windows"] = data.report.windows;
  {
    ordered_json subsystems = ordered_json::array();
    for (const Subsystem& s : data.report.subsystems) subsystems.push_back(s.name);
    root["subsystems"] = subsystems;
  }

  ordered_json cells = ordered_json::array();
  for (const CellStats& cell : data.report.cells) {
    ordered_json j;
    j["window"] = cell.window;
    j["subsystem"] = cell.subsystem.name;
    j["present"] = cell.present;
    j["node_count"] = cell.node_count;
    j["maintainer_count"] = cell.maintainer_count;
    if (cell.present)
      j["maintainer_share_pct"] = cell.maintainer_share_pct;
    else
      j["maintainer_share_pct"] = nullptr;
    j["review_weight"] = cell.review_weight;
    j["maintainer_ratio"] = stats_json(cell.maintainer_ratio);
    j["shaded_vs_table_mean"] = cell.shaded_vs_table_mean;
    j["shaded_vs_column_mean"] = cell.shaded_vs_column_mean;
    ordered_json orgs = ordered_json::object();
    for (const auto& [org, stats] : cell.affiliation_ratio) orgs[org] = stats_json(stats);
    j["affiliation_ratio"] = orgs;
    j["out_strength_maintainers"] = stats_json(cell.out_strength_maintainers);
    j["out_strength_others"] = stats_json(cell.out_strength_others);
    cells.push_back(std::move(j));
  }
  root["cells"] = cells;

  std::uint64_t total_nodes = 0, total_edges = 0, total_weight_sum = 0;
  std::uint64_t total_signed = 0, total_acked = 0, total_reviewed = 0;
  ordered_json networks = ordered_json::array();
  for (const NetworkRecord& record : data.networks) {
    ordered_json j;
    j["window"] = record.full.window;
    j["subsystem"] = record.full.subsystem.name;
    ordered_json nodes = ordered_json::array();
    for (const NodeRow& row : record.node_rows) {
      ordered_json n;
      n["person_id"] = row.person;
      n["canonical_name"] = row.canonical_name;
      n["is_maintainer"] = row.is_maintainer;
      if (row.affiliation)
        n["affiliation"] = *row.affiliation;
      else
        n["affiliation"] = nullptr;
      n["signed_commits"] = row.signed_commits;
      n["out_strength"] = row.out_strength;
      n["in_strength"] = row.in_strength;
      nodes.push_back(std::move(n));
      ++total_nodes;
    }
    j["nodes"] = nodes;
    ordered_json edges = ordered_json::array();
    for (const auto& [key, edge] : record.full.weights) {
      ordered_json e;
      e["reviewer_id"] = record.full.nodes[static_cast<std::size_t>(key.first)];
      e["author_id"] = record.full.nodes[static_cast<std::size_t>(key.second)];
      e["weight"] = edge.weight;
      e["signed"] = edge.signed_off;
      e["acked"] = edge.acked;
      e["reviewed"] = edge.reviewed;
      edges.push_back(std::move(e));
      ++total_edges;
      total_weight_sum += edge.weight;
      total_signed += edge.signed_off;
      total_acked += edge.acked;
      total_reviewed += edge.reviewed;
    }
    j["edges"] = edges;
    networks.push_back(std::move(j));
  }
  root["networks"] = networks;

  ordered_json totals;
  totals["node_rows"] = total_nodes;
  totals["edge_rows"] = total_edges;
  totals["weight"] = total_weight_sum;
  totals["signed"] = total_signed;
  totals["acked"] = total_acked;
  totals["reviewed"] = total_reviewed;
  root["totals"] = totals;

  out << root.dump(2) << '\n';
}

ReportData load_report_json(std::istream& in) {
  ordered_json root;
  try {
    root = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw FatalInputError(std::string("report.json is not valid JSON: ") + e.what());
  }
  try {
    if (root.at("schema_version").get<int>() != kReportSchemaVersion)
      throw FatalInputError("unsupported report.json schema version");
    ReportData data;
    const auto& parameters = root.at("parameters");
    data.threshold = parameters.at("threshold").get<std::string>();
    data.window_kind = parameters.at("window").get<std::string>();
    data.attribution = parameters.at("subsystem_attribution").get<std::string>();
    data.from_window = parameters.at("from").get<std::string>();
    data.to_window = parameters.at("to").get<std::string>();

    data.report.windows = root.at("windows").get<std::vector<std::string>>();
    for (const auto& s : root.at("subsystems"))
      data.report.subsystems.push_back(Subsystem{s.get<std::string>()});

    for (const auto& j : root.at("cells")) {
      CellStats cell;
      cell.window = j.at("window").get<std::string>();
      cell.subsystem = Subsystem{j.at("subsystem").get<std::string>()};
      cell.present = j.at("present").get<bool>();
      cell.node_count = j.at("node_count").get<std::uint32_t>();
      cell.maintainer_count = j.at("maintainer_count").get<std::uint32_t>();
      if (!j.at("maintainer_share_pct").is_null())
        cell.maintainer_share_pct = j.at("maintainer_share_pct").get<double>();
      cell.review_weight = j.at("review_weight").get<std::uint64_t>();
      cell.maintainer_ratio = stats_from_json(j.at("maintainer_ratio"));
      cell.shaded_vs_table_mean = j.at("shaded_vs_table_mean").get<bool>();
      cell.shaded_vs_column_mean = j.at("shaded_vs_column_mean").get<bool>();
      for (const auto& [org, stats] : j.at("affiliation_ratio").items())
        cell.affiliation_ratio[org] = stats_from_json(stats);
      cell.out_strength_maintainers = stats_from_json(j.at("out_strength_maintainers"));
      cell.out_strength_others = stats_from_json(j.at("out_strength_others"));
      data.report.cells.push_back(std::move(cell));
    }

    for (const auto& j : root.at("networks")) {
      NetworkRecord record;
      record.full.window = j.at("window").get<std::string>();
      record.full.subsystem = Subsystem{j.at("subsystem").get<std::string>()};
      for (const auto& n : j.at("nodes")) {
        NodeRow row;
        row.person = n.at("person_id").get<PersonId>();
        row.canonical_name = n.at("canonical_name").get<std::string>();
        row.is_maintainer = n.at("is_maintainer").get<bool>();
        if (!n.at("affiliation").is_null()) row.affiliation = n.at("affiliation").get<std::string>();
        row.signed_commits = n.at("signed_commits").get<std::uint64_t>();
        row.out_strength = n.at("out_strength").get<std::uint64_t>();
        row.in_strength = n.at("in_strength").get<std::uint64_t>();
        record.full.nodes.push_back(row.person);
        record.node_rows.push_back(std::move(row));
      }
      for (const auto& e : j.at("edges")) {
        PersonId reviewer = e.at("reviewer_id").get<PersonId>();
        PersonId author = e.at("author_id").get<PersonId>();
        auto reviewer_index = record.full.index_of(reviewer);
        auto author_index = record.full.index_of(author);
        if (!reviewer_index || !author_index)
          throw FatalInputError("report.json edge references an unknown node");
        EdgeCounts edge;
        edge.weight = e.at("weight").get<std::uint64_t>();
        edge.signed_off = e.at("signed").get<std::uint64_t>();
        edge.acked = e.at("acked").get<std::uint64_t>();
        edge.reviewed = e.at("reviewed").get<std::uint64_t>();
        record.full.weights.emplace(std::make_pair(*reviewer_index, *author_index), edge);
      }
      data.networks.push_back(std::move(record));
    }
    return data;
  } catch (const FatalInputError&) {
    throw;
  } catch (const std::exception& e) {
    throw FatalInputError(std::string("report.json does not match the schema: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// GraphML

std::string graphml_document(const NetworkRecord& record) {
  ReviewNetwork stripped = strip_diagonal(record.full);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\""
         " xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\""
         " xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns"
         " http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
      << "  <key id=\"d0\" for=\"node\" attr.name=\"canonical_name\" attr.type=\"string\"/>\n"
      << "  <key id=\"d1\" for=\"node\" attr.name=\"is_maintainer\" attr.type=\"boolean\"/>\n"
      << "  <key id=\"d2\" for=\"node\" attr.name=\"affiliation\" attr.type=\"string\"/>\n"
      << "  <key id=\"d3\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      << "  <graph id=\"" << xml_escape(record.full.subsystem.name) << "-"
      << xml_escape(record.full.window) << "\" edgedefault=\"directed\">\n";
  for (const NodeRow& row : record.node_rows) {
    out << "    <node id=\"n" << row.person << "\">\n"
        << "      <data key=\"d0\">" << xml_escape(row.canonical_name) << "</data>\n"
        << "      <data key=\"d1\">" << bool_text(row.is_maintainer) << "</data>\n"
        << "      <data key=\"d2\">" << xml_escape(affiliation_label(row.affiliation))
        << "</data>\n"
        << "    </node>\n";
  }
  for (const auto& [key, edge] : stripped.weights) {
    PersonId reviewer = stripped.nodes[static_cast<std::size_t>(key.first)];
    PersonId author = stripped.nodes[static_cast<std::size_t>(key.second)];
    out << "    <edge source=\"n" << reviewer << "\" target=\"n" << author << "\">"
        << "<data key=\"d3\">" << edge.weight << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// SVG charts

namespace {

constexpr double kChartWidth = 720.0;
constexpr double kChartHeight = 420.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 160.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 48.0;

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27824d", "#8e44ad", "#d4880b",
                          "#148f8f", "#7f8c1f", "#5d4037", "#34495e", "#a3326e"};

std::string svg_open(const std::string& title) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_fixed(kChartWidth, 0)
      << "\" height=\"" << format_fixed(kChartHeight, 0) << "\" viewBox=\"0 0 "
      << format_fixed(kChartWidth, 0) << ' ' << format_fixed(kChartHeight, 0) << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "  <text x=\"" << format_fixed(kChartWidth / 2) << "\" y=\"24\" font-family=\"sans-serif\""
      << " font-size=\"15\" text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";
  return out.str();
}

struct Scale {
  double min = 0.0;
  double max = 1.0;
  double plot_x0, plot_x1, plot_y0, plot_y1;

  double x(double t) const { return plot_x0 + t * (plot_x1 - plot_x0); }
  double y(double v) const {
    double span = max - min;
    double t = span <= 0.0 ? 0.5 : (v - min) / span;
    return plot_y1 - t * (plot_y1 - plot_y0);
  }
};

Scale make_scale(double max_value) {
  Scale s;
  s.min = 0.0;
  s.max = max_value <= 0.0 ? 1.0 : max_value * 1.05;
  s.plot_x0 = kMarginLeft;
  s.plot_x1 = kChartWidth - kMarginRight;
  s.plot_y0 = kMarginTop;
  s.plot_y1 = kChartHeight - kMarginBottom;
  return s;
}

void draw_axes(std::ostringstream& out, const Scale& s, const std::vector<std::string>& x_labels) {
  out << "  <line x1=\"" << format_fixed(s.plot_x0) << "\" y1=\"" << format_fixed(s.plot_y1)
      << "\" x2=\"" << format_fixed(s.plot_x1) << "\" y2=\"" << format_fixed(s.plot_y1)
      << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << format_fixed(s.plot_x0) << "\" y1=\"" << format_fixed(s.plot_y0)
      << "\" x2=\"" << format_fixed(s.plot_x0) << "\" y2=\"" << format_fixed(s.plot_y1)
      << "\" stroke=\"black\"/>\n";
  const std::size_t n = x_labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    double t = n <= 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
    double x = s.x(t);
    out << "  <line x1=\"" << format_fixed(x) << "\" y1=\"" << format_fixed(s.plot_y1)
        << "\" x2=\"" << format_fixed(x) << "\" y2=\"" << format_fixed(s.plot_y1 + 4)
        << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << format_fixed(x) << "\" y=\"" << format_fixed(s.plot_y1 + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << xml_escape(x_labels[i]) << "</text>\n";
  }
  for (int tick = 0; tick <= 4; ++tick) {
    double v = s.min + (s.max - s.min) * tick / 4.0;
    double y = s.y(v);
    out << "  <line x1=\"" << format_fixed(s.plot_x0 - 4) << "\" y1=\"" << format_fixed(y)
        << "\" x2=\"" << format_fixed(s.plot_x0) << "\" y2=\"" << format_fixed(y)
        << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << format_fixed(s.plot_x0 - 8) << "\" y=\"" << format_fixed(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << format_fixed(v) << "</text>\n";
  }
}

}  // namespace

std::string trend_chart_svg(const HomophilyReport& report, const std::string& title,
                            const std::string& metric) {
  auto value_of = [&](const CellStats& cell) -> std::optional<double> {
    if (!cell.present) return std::nullopt;
    if (metric == "node_count") return static_cast<double>(cell.node_count);
    if (metric == "maintainer_share_pct") return cell.maintainer_share_pct;
    if (metric == "maintainer_ratio_mean_pct") {
      if (cell.maintainer_ratio.empty()) return std::nullopt;
      return cell.maintainer_ratio.mean;
    }
    throw InternalError("unknown trend metric: " + metric);
  };

  double max_value = 0.0;
  for (const CellStats& cell : report.cells) {
    if (auto v = value_of(cell)) max_value = std::max(max_value, *v);
  }
  Scale scale = make_scale(max_value);

  std::ostringstream out;
  out << svg_open(title);
  draw_axes(out, scale, report.windows);

  const std::size_t window_count = report.windows.size();
  std::size_t series_index = 0;
  for (const Subsystem& subsystem : report.subsystems) {
    const char* color = kPalette[series_index % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream points;
    std::ostringstream dots;
    bool any = false;
    for (std::size_t w = 0; w < window_count; ++w) {
      const CellStats* cell = report.cell(subsystem, report.windows[w]);
      if (cell == nullptr) continue;
      auto v = value_of(*cell);
      if (!v) continue;
      double t = window_count <= 1 ? 0.5 : static_cast<double>(w) / static_cast<double>(window_count - 1);
      double x = scale.x(t);
      double y = scale.y(*v);
      if (any) points << ' ';
      points << format_fixed(x) << ',' << format_fixed(y);
      dots << "  <circle cx=\"" << format_fixed(x) << "\" cy=\"" << format_fixed(y)
           << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
      any = true;
    }
    if (any) {
      out << "  <polyline points=\"" << points.str() << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n"
          << dots.str();
    }
    double legend_y = kMarginTop + 16.0 * static_cast<double>(series_index);
    out << "  <rect x=\"" << format_fixed(kChartWidth - kMarginRight + 12) << "\" y=\""
        << format_fixed(legend_y) << "\" width=\"12\" height=\"4\" fill=\"" << color << "\"/>\n"
        << "  <text x=\"" << format_fixed(kChartWidth - kMarginRight + 30) << "\" y=\""
        << format_fixed(legend_y + 6) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(subsystem.name) << "</text>\n";
    ++series_index;
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

struct BoxSummary {
  double low_whisker, q1, median, q3, high_whisker;
  std::vector<double> outliers;
};

double quantile_linear(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  auto lo = static_cast<std::size_t>(h);
  double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxSummary box_summary(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  BoxSummary box{};
  box.q1 = quantile_linear(values, 0.25);
  box.median = quantile_linear(values, 0.50);
  box.q3 = quantile_linear(values, 0.75);
  double iqr = box.q3 - box.q1;
  double low_fence = box.q1 - 1.5 * iqr;
  double high_fence = box.q3 + 1.5 * iqr;
  box.low_whisker = box.q3;
  box.high_whisker = box.q1;
  bool any_in_fence = false;
  for (double v : values) {
    if (v < low_fence || v > high_fence) {
      box.outliers.push_back(v);
    } else {
      if (!any_in_fence) {
        box.low_whisker = v;
        box.high_whisker = v;
        any_in_fence = true;
      } else {
        box.low_whisker = std::min(box.low_whisker, v);
        box.high_whisker = std::max(box.high_whisker, v);
      }
    }
  }
  if (!any_in_fence) {
    box.low_whisker = box.q1;
    box.high_whisker = box.q3;
  }
  return box;
}

void draw_box(std::ostringstream& out, const Scale& scale, double center_x, double width,
              const BoxSummary& box, const char* color) {
  double half = width / 2.0;
  auto vline = [&](double x, double y1, double y2) {
    out << "  <line x1=\"" << format_fixed(x) << "\" y1=\"" << format_fixed(y1) << "\" x2=\""
        << format_fixed(x) << "\" y2=\"" << format_fixed(y2) << "\" stroke=\"" << color
        << "\"/>\n";
  };
  auto hline = [&](double x1, double x2, double y) {
    out << "  <line x1=\"" << format_fixed(x1) << "\" y1=\"" << format_fixed(y) << "\" x2=\""
        << format_fixed(x2) << "\" y2=\"" << format_fixed(y) << "\" stroke=\"" << color
        << "\"/>\n";
  };
  double y_q1 = scale.y(box.q1);
  double y_q3 = scale.y(box.q3);
  out << "  <rect x=\"" << format_fixed(center_x - half) << "\" y=\"" << format_fixed(y_q3)
      << "\" width=\"" << format_fixed(width) << "\" height=\"" << format_fixed(y_q1 - y_q3)
      << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
  hline(center_x - half, center_x + half, scale.y(box.median));
  vline(center_x, scale.y(box.low_whisker), y_q1);
  vline(center_x, y_q3, scale.y(box.high_whisker));
  hline(center_x - half / 2, center_x + half / 2, scale.y(box.low_whisker));
  hline(center_x - half / 2, center_x + half / 2, scale.y(box.high_whisker));
  for (double v : box.outliers) {
    out << "  <circle cx=\"" << format_fixed(center_x) << "\" cy=\"" << format_fixed(scale.y(v))
        << "\" r=\"2\" fill=\"none\" stroke=\"" << color << "\"/>\n";
  }
}

}  // namespace

std::vector<std::string> organizations_in(const HomophilyReport& report) {
  std::set<std::string> set;
  for (const CellStats& cell : report.cells) {
    for (const auto& [org, stats] : cell.affiliation_ratio) {
      if (!stats.empty()) set.insert(org);
    }
  }
  return {set.begin(), set.end()};
}

std::string box_chart_svg(const HomophilyReport& report, const std::string& organization) {
  // Two panels: annual mean ratios (%) on the left, their standard
  // deviations on the right, one box per subsystem across the windows.
  std::map<std::string, std::vector<double>> means;
  std::map<std::string, std::vector<double>> sds;
  double max_value = 0.0;
  for (const CellStats& cell : report.cells) {
    auto it = cell.affiliation_ratio.find(organization);
    if (it == cell.affiliation_ratio.end() || it->second.empty()) continue;
    means[cell.subsystem.name].push_back(it->second.mean);
    sds[cell.subsystem.name].push_back(it->second.sd);
    max_value = std::max({max_value, it->second.mean, it->second.sd});
  }

  Scale scale = make_scale(max_value);
  scale.plot_x1 = kChartWidth - 24.0;  // boxes use the full width; no legend column

  std::ostringstream out;
  out << svg_open("Review ratios (%): " + organization);

  const double mid = (scale.plot_x0 + scale.plot_x1) / 2.0;
  out << "  <line x1=\"" << format_fixed(mid) << "\" y1=\"" << format_fixed(scale.plot_y0)
      << "\" x2=\"" << format_fixed(mid) << "\" y2=\"" << format_fixed(scale.plot_y1)
      << "\" stroke=\"#cccccc\" stroke-dasharray=\"4 3\"/>\n"
      << "  <text x=\"" << format_fixed((scale.plot_x0 + mid) / 2) << "\" y=\""
      << format_fixed(scale.plot_y0 - 6)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">mean</text>\n"
      << "  <text x=\"" << format_fixed((mid + scale.plot_x1) / 2) << "\" y=\""
      << format_fixed(scale.plot_y0 - 6)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">sd</text>\n";

  // Axes and ticks.
  out << "  <line x1=\"" << format_fixed(scale.plot_x0) << "\" y1=\""
      << format_fixed(scale.plot_y1) << "\" x2=\"" << format_fixed(scale.plot_x1) << "\" y2=\""
      << format_fixed(scale.plot_y1) << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << format_fixed(scale.plot_x0) << "\" y1=\""
      << format_fixed(scale.plot_y0) << "\" x2=\"" << format_fixed(scale.plot_x0) << "\" y2=\""
      << format_fixed(scale.plot_y1) << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    double v = scale.min + (scale.max - scale.min) * tick / 4.0;
    double y = scale.y(v);
    out << "  <text x=\"" << format_fixed(scale.plot_x0 - 8) << "\" y=\"" << format_fixed(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << format_fixed(v) << "</text>\n";
  }

  const std::size_t k = report.subsystems.size();
  std::size_t series_index = 0;
  for (const Subsystem& subsystem : report.subsystems) {
    const char* color = kPalette[series_index % (sizeof(kPalette) / sizeof(kPalette[0]))];
    double slot = (mid - scale.plot_x0) / static_cast<double>(k + 1);
    double x_mean = scale.plot_x0 + slot * static_cast<double>(series_index + 1);
    double x_sd = mid + slot * static_cast<double>(series_index + 1);
    auto mean_it = means.find(subsystem.name);
    if (mean_it != means.end() && !mean_it->second.empty()) {
      draw_box(out, scale, x_mean, std::min(24.0, slot * 0.8), box_summary(mean_it->second), color);
      draw_box(out, scale, x_sd, std::min(24.0, slot * 0.8), box_summary(sds[subsystem.name]),
               color);
    }
    out << "  <text x=\"" << format_fixed(x_mean) << "\" y=\""
        << format_fixed(scale.plot_y1 + 18)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\" fill=\""
        << color << "\">" << xml_escape(subsystem.name) << "</text>\n"
        << "  <text x=\"" << format_fixed(x_sd) << "\" y=\"" << format_fixed(scale.plot_y1 + 18)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\" fill=\""
        << color << "\">" << xml_escape(subsystem.name) << "</text>\n";
    ++series_index;
  }
  out << "</svg>\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Bundle

std::set<ReportFormat> parse_formats(const std::string& text) {
  if (text == "all")
    return {ReportFormat::kCsv, ReportFormat::kJson, ReportFormat::kGraphml, ReportFormat::kSvg};
  std::set<ReportFormat> formats;
  for (const std::string& part : split(text, ',')) {
    std::string p = ascii_lower(trim(part));
    if (p == "csv") formats.insert(ReportFormat::kCsv);
    else if (p == "json") formats.insert(ReportFormat::kJson);
    else if (p == "graphml") formats.insert(ReportFormat::kGraphml);
    else if (p == "svg") formats.insert(ReportFormat::kSvg);
    else throw FatalInputError("unknown report format: '" + p + "'");
  }
  if (formats.empty()) throw FatalInputError("no report format selected");
  return formats;
}

namespace {

std::string slugify(std::string_view name) {
  std::string folded = fold_case_utf8(name);
  std::string out;
  bool pending_dash = false;
  for (char c : folded) {
    bool alnum = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (alnum) {
      if (pending_dash && !out.empty()) out.push_back('-');
      pending_dash = false;
      out.push_back(c);
    } else {
      pending_dash = true;
    }
  }
  return out.empty() ? "org" : out;
}

void write_file(const std::filesystem::path& path, std::string_view content,
                std::vector<std::string>& manifest, const std::filesystem::path& root) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FatalInputError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw FatalInputError("write failed for " + path.string());
  manifest.push_back(std::filesystem::relative(path, root).generic_string());
}

}  // namespace

void write_bundle(const std::filesystem::path& dir, const ReportData& data,
                  const std::set<ReportFormat>& formats) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> manifest;

  auto emit = [&](const std::filesystem::path& relative, const std::string& content) {
    write_file(dir / relative, content, manifest, dir);
  };

  if (formats.count(ReportFormat::kCsv)) {
    std::ostringstream nodes, edges, cells, affiliations;
    write_nodes_csv(nodes, data);
    write_edges_csv(edges, data);
    write_cells_csv(cells, data);
    write_affiliations_csv(affiliations, data);
    emit("nodes.csv", nodes.str());
    emit("edges.csv", edges.str());
    emit("cells.csv", cells.str());
    emit("affiliations.csv", affiliations.str());
  }
  if (formats.count(ReportFormat::kJson)) {
    std::ostringstream json;
    write_report_json(json, data);
    emit("report.json", json.str());
  }
  if (formats.count(ReportFormat::kGraphml)) {
    for (const NetworkRecord& record : data.networks) {
      std::filesystem::path name = std::filesystem::path("graphml") /
                                   (record.full.subsystem.name + "_" + record.full.window +
                                    ".graphml");
      emit(name, graphml_document(record));
    }
  }
  if (formats.count(ReportFormat::kSvg)) {
    emit(std::filesystem::path("charts") / "trend_node_count.svg",
         trend_chart_svg(data.report, "Nodes per window", "node_count"));
    emit(std::filesystem::path("charts") / "trend_maintainer_share_pct.svg",
         trend_chart_svg(data.report, "Maintainer share (%)", "maintainer_share_pct"));
    emit(std::filesystem::path("charts") / "trend_maintainer_ratio_mean_pct.svg",
         trend_chart_svg(data.report, "Mean maintainer review ratio (%)",
                         "maintainer_ratio_mean_pct"));
    std::map<std::string, int> used_slugs;
    for (const std::string& org : organizations_in(data.report)) {
      std::string slug = slugify(org);
      int n = ++used_slugs[slug];
      if (n > 1) slug += "-" + std::to_string(n);
      emit(std::filesystem::path("charts") / ("box_" + slug + ".svg"),
           box_chart_svg(data.report, org));
    }
  }

  std::sort(manifest.begin(), manifest.end());
  std::string listing;
  for (const std::string& entry : manifest) {
    listing += entry;
    listing.push_back('\n');
  }
  std::ofstream out(dir / "MANIFEST", std::ios::binary);
  if (!out) throw FatalInputError("cannot write " + (dir / "MANIFEST").string());
  out.write(listing.data(), static_cast<std::streamsize>(listing.size()));
}

}  // namespace reviewnet
