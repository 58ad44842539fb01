#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "persona/analytics.hpp"
#include "persona/models.hpp"
#include "persona/sentiment.hpp"

namespace persona::reports {

// Stat reports: one CSV row per cell (metric,cell,kind,count,mean); absent
// cells keep count 0 and an empty mean column.
std::string stat_reports_csv(const std::vector<analytics::StatReport>& reports);
nlohmann::ordered_json stat_reports_json(const std::vector<analytics::StatReport>& reports);

std::string axis_comparisons_csv(const std::vector<analytics::StatReport>& reports);

std::string shares_csv(const sentiment::SharesReport& report);
nlohmann::ordered_json shares_json(const sentiment::SharesReport& report);

std::string word_clouds_csv(const std::vector<analytics::WordCloud>& clouds);
nlohmann::ordered_json word_clouds_json(const std::vector<analytics::WordCloud>& clouds);

std::string benchmark_csv(const models::BenchmarkTable& table);
nlohmann::ordered_json benchmark_json(const models::BenchmarkTable& table);

// Minimal horizontal bar chart; presentation only, CSV/JSON stay the
// contractual outputs.
void write_svg_bars(const std::filesystem::path& path, const std::string& title,
                    const std::vector<std::pair<std::string, double>>& bars);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace persona::reports
