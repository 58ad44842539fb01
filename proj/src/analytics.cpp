#include "persona/analytics.hpp"

#include <algorithm>
#include <unordered_set>

#include "persona/errors.hpp"

namespace persona::analytics {

std::string_view profile_metric_name(ProfileMetric m) {
  switch (m) {
    case ProfileMetric::Followers: return "followers";
    case ProfileMetric::Friends: return "friends";
    case ProfileMetric::Likes: return "likes";
    case ProfileMetric::Statuses: return "statuses";
    case ProfileMetric::Media: return "media";
    case ProfileMetric::VerifiedRate: return "verified_rate";
  }
  return "";
}

std::string_view reveal_field_name(RevealField f) {
  switch (f) {
    case RevealField::Gender: return "gender";
    case RevealField::Dob: return "dob";
    case RevealField::Location: return "location";
  }
  return "";
}

std::string_view surface_field_name(SurfaceField f) {
  switch (f) {
    case SurfaceField::Hashtags: return "hashtags";
    case SurfaceField::Emojis: return "emojis";
    case SurfaceField::Mentions: return "mentions";
    case SurfaceField::Words: return "words";
    case SurfaceField::Punctuation: return "punctuation";
    case SurfaceField::TitleWords: return "title_words";
    case SurfaceField::Characters: return "characters";
    case SurfaceField::WordDensity: return "word_density";
  }
  return "";
}

std::string_view bio_field_name(BioField f) {
  switch (f) {
    case BioField::Emojis: return "emojis";
    case BioField::Words: return "words";
    case BioField::Mentions: return "mentions";
    case BioField::LatinWords: return "latin_words";
  }
  return "";
}

namespace {

StatReport build_report(std::string metric,
                        const std::vector<std::pair<PersonalityLabel, double>>& observations) {
  StatReport report;
  report.metric = std::move(metric);

  std::array<double, 16> sums{};
  std::array<std::size_t, 16> counts{};
  for (const auto& [label, value] : observations) {
    sums[label.index()] += value;
    ++counts[label.index()];
  }
  for (std::size_t t = 0; t < 16; ++t)
    if (counts[t] > 0)
      report.per_type[t] = StatCell{counts[t], sums[t] / static_cast<double>(counts[t])};

  for (std::size_t s = 0; s < kAllAxisSides.size(); ++s) {
    const AxisSide side = kAllAxisSides[s];
    double sum = 0.0, mean_sum = 0.0;
    std::size_t count = 0, populated = 0;
    for (const auto& label : PersonalityLabel::all()) {
      if (!label.has_side(side)) continue;
      const std::size_t t = label.index();
      if (counts[t] == 0) continue;
      sum += sums[t];
      count += counts[t];
      mean_sum += report.per_type[t]->mean;
      ++populated;
    }
    if (count == 0) continue;
    report.per_axis[s] = StatCell{count, sum / static_cast<double>(count)};
    report.per_axis_mean_of_means[s] = mean_sum / static_cast<double>(populated);
  }
  return report;
}

}  // namespace

StatReport profile_stats_by_type(const std::vector<corpus::UserRecord>& users,
                                 ProfileMetric metric) {
  std::vector<std::pair<PersonalityLabel, double>> observations;
  observations.reserve(users.size());
  for (const auto& u : users) {
    double v = 0.0;
    switch (metric) {
      case ProfileMetric::Followers: v = static_cast<double>(u.followers); break;
      case ProfileMetric::Friends: v = static_cast<double>(u.friends); break;
      case ProfileMetric::Likes: v = static_cast<double>(u.likes); break;
      case ProfileMetric::Statuses: v = static_cast<double>(u.statuses); break;
      case ProfileMetric::Media: v = static_cast<double>(u.media); break;
      case ProfileMetric::VerifiedRate: v = u.verified ? 1.0 : 0.0; break;
    }
    observations.emplace_back(u.personality, v);
  }
  return build_report(std::string(profile_metric_name(metric)), observations);
}

StatReport reveal_rates(const std::vector<corpus::UserRecord>& users, RevealField field) {
  std::vector<std::pair<PersonalityLabel, double>> observations;
  observations.reserve(users.size());
  for (const auto& u : users) {
    bool revealed = false;
    switch (field) {
      case RevealField::Gender:
        revealed = u.gender.has_value() && (*u.gender == corpus::Gender::Male ||
                                            *u.gender == corpus::Gender::Female);
        break;
      case RevealField::Dob:
        revealed = u.dob.has_value();
        break;
      case RevealField::Location:
        revealed = u.location.has_value() && !u.location->empty();
        break;
    }
    observations.emplace_back(u.personality, revealed ? 1.0 : 0.0);
  }
  return build_report("reveal_" + std::string(reveal_field_name(field)), observations);
}

StatReport level_feature_aggregate(const std::vector<corpus::TweetRecord>& tweets, int level,
                                   SurfaceField field) {
  std::vector<std::pair<PersonalityLabel, double>> observations;
  for (const auto& t : tweets) {
    if (t.level() != level) continue;
    const auto f = textproc::surface_features(t.text);
    double v = 0.0;
    switch (field) {
      case SurfaceField::Hashtags: v = static_cast<double>(f.n_hashtags); break;
      case SurfaceField::Emojis: v = static_cast<double>(f.n_emojis); break;
      case SurfaceField::Mentions: v = static_cast<double>(f.n_mentions); break;
      case SurfaceField::Words: v = static_cast<double>(f.n_words); break;
      case SurfaceField::Punctuation: v = static_cast<double>(f.n_punctuation); break;
      case SurfaceField::TitleWords: v = static_cast<double>(f.n_title_words); break;
      case SurfaceField::Characters: v = static_cast<double>(f.n_characters); break;
      case SurfaceField::WordDensity: v = f.word_density; break;
    }
    observations.emplace_back(t.label, v);
  }
  if (observations.empty())
    throw EmptyLevel("no tweets at level " + std::to_string(level));
  return build_report("level" + std::to_string(level) + "_" +
                          std::string(surface_field_name(field)),
                      observations);
}

StatReport bio_feature_aggregate(const std::vector<corpus::UserRecord>& users, BioField field) {
  std::vector<std::pair<PersonalityLabel, double>> observations;
  observations.reserve(users.size());
  for (const auto& u : users) {
    const auto f = textproc::bio_features(u.bio);  // empty bios count as zeros
    double v = 0.0;
    switch (field) {
      case BioField::Emojis: v = static_cast<double>(f.n_emojis); break;
      case BioField::Words: v = static_cast<double>(f.n_words); break;
      case BioField::Mentions: v = static_cast<double>(f.n_mentions); break;
      case BioField::LatinWords: v = static_cast<double>(f.n_latin_words); break;
    }
    observations.emplace_back(u.personality, v);
  }
  return build_report("bio_" + std::string(bio_field_name(field)), observations);
}

StatReport age_stats(const std::vector<corpus::UserRecord>& users, int reference_year) {
  std::vector<std::pair<PersonalityLabel, double>> observations;
  for (const auto& u : users)
    if (u.dob && u.dob->year)
      observations.emplace_back(u.personality, static_cast<double>(reference_year - *u.dob->year));
  return build_report("age", observations);
}

std::map<PersonalityLabel, std::map<corpus::Zodiac, std::size_t>> zodiac_distribution(
    const std::vector<corpus::UserRecord>& users) {
  std::map<PersonalityLabel, std::map<corpus::Zodiac, std::size_t>> out;
  for (const auto& u : users)
    if (u.dob) ++out[u.personality][corpus::derive_zodiac(u.dob->day, u.dob->month)];
  return out;
}

const std::vector<std::string>& default_stop_tokens() {
  // Common Arabic function words (editorial list, configurable at the CLI).
  static const std::vector<std::string> tokens = {
      "من", "في", "على", "إلى", "عن", "أن", "إن", "لا", "ما", "هذا", "هذه",
      "ذلك", "التي", "الذي", "هو", "هي", "أنا", "نحن", "أنت", "كان", "كانت",
      "مع", "كل", "قد", "لم", "لن", "بعد", "قبل", "عند", "غير", "بين", "حتى",
      "أو", "و", "ثم", "لكن", "إذا", "كيف", "متى", "أين"};
  return tokens;
}

WordCloud word_cloud(const std::vector<corpus::TweetRecord>& tweets, PersonalityLabel personality,
                     std::size_t k, const std::vector<std::string>& stop_list) {
  std::unordered_set<std::string> stop;
  for (const auto& s : stop_list) stop.insert(textproc::normalize(s));

  std::map<std::string, std::size_t> counts;
  bool any = false;
  for (const auto& t : tweets) {
    if (t.label != personality) continue;
    any = true;
    for (const auto& tok : textproc::tokenize(textproc::normalize(t.text))) {
      if (tok.kind != textproc::TokenKind::Word && tok.kind != textproc::TokenKind::LatinWord)
        continue;
      if (stop.count(tok.text)) continue;
      ++counts[tok.text];
    }
  }
  if (!any) throw MissingType(std::string(personality.code()));

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);

  WordCloud cloud;
  cloud.personality = personality;
  cloud.entries = std::move(ranked);
  return cloud;
}

std::array<AxisComparisonRow, 4> axis_comparison(const StatReport& report) {
  static constexpr std::array<std::pair<AxisSide, AxisSide>, 4> pairs = {
      {{AxisSide::E, AxisSide::I},
       {AxisSide::S, AxisSide::N},
       {AxisSide::T, AxisSide::F},
       {AxisSide::J, AxisSide::P}}};
  std::array<AxisComparisonRow, 4> rows;
  for (std::size_t a = 0; a < 4; ++a) {
    const auto [lhs, rhs] = pairs[a];
    const auto& lhs_cell = report.per_axis[static_cast<std::size_t>(lhs)];
    const auto& rhs_cell = report.per_axis[static_cast<std::size_t>(rhs)];
    if (!lhs_cell || !rhs_cell)
      throw AbsentSide("axis side without data on metric " + report.metric);
    AxisComparisonRow row;
    row.axis = static_cast<Axis>(a);
    row.lhs = lhs;
    row.rhs = rhs;
    row.lhs_mean = lhs_cell->mean;
    row.rhs_mean = rhs_cell->mean;
    if (row.lhs_mean != row.rhs_mean) {
      row.dominant = row.lhs_mean > row.rhs_mean ? lhs : rhs;
      const double hi = std::max(row.lhs_mean, row.rhs_mean);
      const double lo = std::min(row.lhs_mean, row.rhs_mean);
      if (lo != 0.0) row.ratio = hi / lo;
    } else {
      row.ratio = 1.0;
    }
    rows[a] = row;
  }
  return rows;
}

}  // namespace persona::analytics
