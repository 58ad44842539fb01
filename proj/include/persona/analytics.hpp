#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persona/corpus.hpp"
#include "persona/personality.hpp"
#include "persona/textproc.hpp"

namespace persona::analytics {

enum class ProfileMetric : std::uint8_t { Followers, Friends, Likes, Statuses, Media, VerifiedRate };
enum class RevealField : std::uint8_t { Gender, Dob, Location };
enum class SurfaceField : std::uint8_t {
  Hashtags, Emojis, Mentions, Words, Punctuation, TitleWords, Characters, WordDensity
};
enum class BioField : std::uint8_t { Emojis, Words, Mentions, LatinWords };

std::string_view profile_metric_name(ProfileMetric m);
std::string_view reveal_field_name(RevealField f);
std::string_view surface_field_name(SurfaceField f);
std::string_view bio_field_name(BioField f);

struct StatCell {
  std::size_t count = 0;
  double mean = 0.0;
};

// Mean of one metric per personality type and per axis side. Axis cells are
// pooled over member observations (user- or tweet-weighted); an unweighted
// mean of the member types' means is kept alongside for transparency.
// Absent cells stay nullopt and are marked absent in reports - never zero.
struct StatReport {
  std::string metric;
  std::string statistic = "mean";
  std::array<std::optional<StatCell>, 16> per_type;
  std::array<std::optional<StatCell>, 8> per_axis;
  std::array<std::optional<double>, 8> per_axis_mean_of_means;
};

StatReport profile_stats_by_type(const std::vector<corpus::UserRecord>& users, ProfileMetric metric);

// Share of users revealing the field: gender in {male, female}, dob present,
// location non-empty.
StatReport reveal_rates(const std::vector<corpus::UserRecord>& users, RevealField field);

// Mean surface feature over tweets of one level (0 or 1); EmptyLevel if the
// corpus has no tweets at that level.
StatReport level_feature_aggregate(const std::vector<corpus::TweetRecord>& tweets, int level,
                                   SurfaceField field);

StatReport bio_feature_aggregate(const std::vector<corpus::UserRecord>& users, BioField field);

// Mean age (reference_year - birth year) over users with a year; absent
// cells where nobody discloses one.
StatReport age_stats(const std::vector<corpus::UserRecord>& users, int reference_year);

// Zodiac sign counts per type, for users with a date of birth.
std::map<PersonalityLabel, std::map<corpus::Zodiac, std::size_t>> zodiac_distribution(
    const std::vector<corpus::UserRecord>& users);

struct WordCloud {
  PersonalityLabel personality = PersonalityLabel::from_index(0);
  std::vector<std::pair<std::string, std::size_t>> entries;  // frequency-descending
};

// Top-k word tokens (normalized text, stop tokens removed, ties broken
// lexicographically) over one type's tweets. MissingType if it has none.
WordCloud word_cloud(const std::vector<corpus::TweetRecord>& tweets, PersonalityLabel personality,
                     std::size_t k, const std::vector<std::string>& stop_list);

const std::vector<std::string>& default_stop_tokens();

enum class Axis : std::uint8_t { Attitude, Perception, Judgment, Lifestyle };

struct AxisComparisonRow {
  Axis axis = Axis::Attitude;
  AxisSide lhs = AxisSide::E;
  AxisSide rhs = AxisSide::I;
  double lhs_mean = 0.0;
  double rhs_mean = 0.0;
  std::optional<AxisSide> dominant;  // nullopt = exact tie
  std::optional<double> ratio;       // dominant / other; nullopt if other == 0
};

// The machine-checkable form of "side X ranks higher on metric M".
// AbsentSide if either side of an axis has no data.
std::array<AxisComparisonRow, 4> axis_comparison(const StatReport& report);

}  // namespace persona::analytics
