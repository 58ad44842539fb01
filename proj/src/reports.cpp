#include "persona/reports.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "persona/errors.hpp"

namespace persona::reports {

using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

// CSV fields here are ASCII identifiers or Arabic tokens without commas or
// quotes; quote defensively anyway when needed.
std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string stat_reports_csv(const std::vector<analytics::StatReport>& reports) {
  std::ostringstream out;
  out << "metric,cell,kind,count,mean\n";
  for (const auto& r : reports) {
    for (const auto& label : PersonalityLabel::all()) {
      const auto& cell = r.per_type[label.index()];
      out << r.metric << ',' << label.code() << ",type,";
      if (cell)
        out << cell->count << ',' << fmt(cell->mean) << '\n';
      else
        out << "0,\n";
    }
    for (std::size_t s = 0; s < kAllAxisSides.size(); ++s) {
      const auto& cell = r.per_axis[s];
      out << r.metric << ',' << axis_side_letter(kAllAxisSides[s]) << ",axis,";
      if (cell)
        out << cell->count << ',' << fmt(cell->mean) << '\n';
      else
        out << "0,\n";
    }
  }
  return out.str();
}

ordered_json stat_reports_json(const std::vector<analytics::StatReport>& reports) {
  ordered_json root = ordered_json::object();
  for (const auto& r : reports) {
    ordered_json entry;
    entry["statistic"] = r.statistic;
    ordered_json per_type = ordered_json::object();
    for (const auto& label : PersonalityLabel::all()) {
      const auto& cell = r.per_type[label.index()];
      if (cell)
        per_type[std::string(label.code())] = {{"count", cell->count}, {"mean", cell->mean}};
      else
        per_type[std::string(label.code())] = nullptr;
    }
    entry["per_type"] = std::move(per_type);
    ordered_json per_axis = ordered_json::object();
    for (std::size_t s = 0; s < kAllAxisSides.size(); ++s) {
      const std::string key(1, axis_side_letter(kAllAxisSides[s]));
      if (r.per_axis[s]) {
        per_axis[key] = {{"count", r.per_axis[s]->count},
                         {"mean", r.per_axis[s]->mean},
                         {"mean_of_type_means", r.per_axis_mean_of_means[s].value_or(0.0)}};
      } else {
        per_axis[key] = nullptr;
      }
    }
    entry["per_axis"] = std::move(per_axis);
    root[r.metric] = std::move(entry);
  }
  return root;
}

std::string axis_comparisons_csv(const std::vector<analytics::StatReport>& reports) {
  std::ostringstream out;
  out << "metric,axis,side_a,mean_a,side_b,mean_b,dominant,ratio\n";
  static constexpr std::string_view axis_names[4] = {"attitude", "perception", "judgment",
                                                     "lifestyle"};
  for (const auto& r : reports) {
    std::array<analytics::AxisComparisonRow, 4> rows;
    try {
      rows = analytics::axis_comparison(r);
    } catch (const AbsentSide&) {
      continue;  // reported as absent cells in the stat CSV already
    }
    for (const auto& row : rows) {
      out << r.metric << ',' << axis_names[static_cast<std::size_t>(row.axis)] << ','
          << axis_side_letter(row.lhs) << ',' << fmt(row.lhs_mean) << ','
          << axis_side_letter(row.rhs) << ',' << fmt(row.rhs_mean) << ',';
      out << (row.dominant ? std::string(1, axis_side_letter(*row.dominant)) : "tie") << ',';
      if (row.ratio) out << fmt(*row.ratio);
      out << '\n';
    }
  }
  return out.str();
}

std::string shares_csv(const sentiment::SharesReport& report) {
  std::ostringstream out;
  out << "cell,kind,n_tweets,share_positive,share_negative,share_neutral\n";
  for (const auto& label : PersonalityLabel::all()) {
    const auto& cell = report.per_type[label.index()];
    out << label.code() << ",type,";
    if (cell)
      out << cell->n_tweets << ',' << fmt(cell->positive) << ',' << fmt(cell->negative) << ','
          << fmt(cell->neutral) << '\n';
    else
      out << "0,,,\n";
  }
  for (std::size_t s = 0; s < kAllAxisSides.size(); ++s) {
    const auto& cell = report.per_axis[s];
    out << axis_side_letter(kAllAxisSides[s]) << ",axis,";
    if (cell)
      out << cell->n_tweets << ',' << fmt(cell->positive) << ',' << fmt(cell->negative) << ','
          << fmt(cell->neutral) << '\n';
    else
      out << "0,,,\n";
  }
  return out.str();
}

ordered_json shares_json(const sentiment::SharesReport& report) {
  ordered_json root;
  root["balanced"] = report.balanced;
  if (report.balanced) root["quota"] = report.quota;
  ordered_json per_type = ordered_json::object();
  for (const auto& label : PersonalityLabel::all()) {
    const auto& cell = report.per_type[label.index()];
    if (cell) {
      per_type[std::string(label.code())] = {{"n_tweets", cell->n_tweets},
                                             {"positive", cell->positive},
                                             {"negative", cell->negative},
                                             {"neutral", cell->neutral}};
    } else {
      per_type[std::string(label.code())] = nullptr;
    }
  }
  root["per_type"] = std::move(per_type);
  ordered_json per_axis = ordered_json::object();
  for (std::size_t s = 0; s < kAllAxisSides.size(); ++s) {
    const std::string key(1, axis_side_letter(kAllAxisSides[s]));
    const auto& cell = report.per_axis[s];
    if (cell) {
      ordered_json entry = {{"n_tweets", cell->n_tweets},
                            {"positive", cell->positive},
                            {"negative", cell->negative},
                            {"neutral", cell->neutral}};
      if (report.per_axis_mean_of_types[s]) {
        const auto& m = *report.per_axis_mean_of_types[s];
        entry["mean_of_type_shares"] = {{"positive", m[0]}, {"negative", m[1]}, {"neutral", m[2]}};
      }
      per_axis[key] = std::move(entry);
    } else {
      per_axis[key] = nullptr;
    }
  }
  root["per_axis"] = std::move(per_axis);
  return root;
}

std::string word_clouds_csv(const std::vector<analytics::WordCloud>& clouds) {
  std::ostringstream out;
  out << "personality,rank,token,frequency\n";
  for (const auto& cloud : clouds)
    for (std::size_t i = 0; i < cloud.entries.size(); ++i)
      out << cloud.personality.code() << ',' << (i + 1) << ','
          << csv_field(cloud.entries[i].first) << ',' << cloud.entries[i].second << '\n';
  return out.str();
}

ordered_json word_clouds_json(const std::vector<analytics::WordCloud>& clouds) {
  ordered_json root = ordered_json::object();
  for (const auto& cloud : clouds) {
    ordered_json entries = ordered_json::array();
    for (const auto& [token, freq] : cloud.entries)
      entries.push_back({{"token", token}, {"frequency", freq}});
    root[std::string(cloud.personality.code())] = std::move(entries);
  }
  return root;
}

std::string benchmark_csv(const models::BenchmarkTable& table) {
  std::ostringstream out;
  out << "algorithm";
  for (const auto& f : table.features) out << ',' << f << "_accuracy," << f << "_f1_macro";
  out << '\n';
  for (std::size_t row = 0; row < table.algorithms.size(); ++row) {
    out << table.algorithms[row];
    for (std::size_t col = 0; col < table.features.size(); ++col) {
      const auto& cell = table.cell(row, col);
      out << ',' << fmt(cell.accuracy) << ',' << fmt(cell.f1_macro);
    }
    out << '\n';
  }
  const auto& best = table.cells[table.best_cell];
  out << "best," << best.algorithm << ':' << best.feature << ',' << fmt(best.accuracy) << '\n';
  return out.str();
}

ordered_json benchmark_json(const models::BenchmarkTable& table) {
  ordered_json root;
  root["seed"] = table.seed;
  root["test_fraction"] = table.test_fraction;
  root["quota_per_type"] = table.quota;
  root["f1_averaging"] = "macro";
  ordered_json rows = ordered_json::array();
  for (std::size_t row = 0; row < table.algorithms.size(); ++row) {
    ordered_json cells = ordered_json::array();
    for (std::size_t col = 0; col < table.features.size(); ++col) {
      const auto& cell = table.cell(row, col);
      cells.push_back({{"feature", cell.feature},
                       {"accuracy", cell.accuracy},
                       {"f1_macro", cell.f1_macro}});
    }
    rows.push_back({{"algorithm", table.algorithms[row]}, {"cells", std::move(cells)}});
  }
  root["rows"] = std::move(rows);
  const auto& best = table.cells[table.best_cell];
  root["best"] = {{"algorithm", best.algorithm},
                  {"feature", best.feature},
                  {"accuracy", best.accuracy},
                  {"f1_macro", best.f1_macro}};
  return root;
}

void write_svg_bars(const std::filesystem::path& path, const std::string& title,
                    const std::vector<std::pair<std::string, double>>& bars) {
  const int bar_height = 18, gap = 6, label_width = 90, chart_width = 420, top = 30;
  const int height = top + static_cast<int>(bars.size()) * (bar_height + gap) + 10;
  double max_value = 0.0;
  for (const auto& [label, value] : bars) max_value = std::max(max_value, value);
  if (max_value <= 0.0) max_value = 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (label_width + chart_width + 80)
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "  <text x=\"8\" y=\"18\" font-size=\"13\">" << title << "</text>\n";
  int y = top;
  for (const auto& [label, value] : bars) {
    const int w = static_cast<int>(std::lround(value / max_value * chart_width));
    svg << "  <text x=\"" << (label_width - 6) << "\" y=\"" << (y + bar_height - 5)
        << "\" text-anchor=\"end\">" << label << "</text>\n";
    svg << "  <rect x=\"" << label_width << "\" y=\"" << y << "\" width=\"" << std::max(w, 1)
        << "\" height=\"" << bar_height << "\" fill=\"#4878a8\"/>\n";
    svg << "  <text x=\"" << (label_width + std::max(w, 1) + 4) << "\" y=\""
        << (y + bar_height - 5) << "\">" << fmt(value) << "</text>\n";
    y += bar_height + gap;
  }
  svg << "</svg>\n";
  write_text_file(path, svg.str());
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

}  // namespace persona::reports
