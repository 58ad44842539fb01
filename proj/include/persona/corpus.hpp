#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "persona/personality.hpp"

namespace persona::corpus {

enum class Gender : std::uint8_t { Male, Female, UnknownMultiple };

enum class Visibility : std::uint8_t { Self, Public, MutualFollow, Followers, Following };

enum class TweetKind : std::uint8_t { Tweet, Quote, Reply, Retweet };

enum class Zodiac : std::uint8_t {
  Aries, Taurus, Gemini, Cancer, Leo, Virgo,
  Libra, Scorpio, Sagittarius, Capricorn, Aquarius, Pisces
};

std::string_view gender_name(Gender g);
std::string_view visibility_name(Visibility v);
std::string_view tweet_kind_name(TweetKind k);
std::string_view zodiac_name(Zodiac z);

Gender parse_gender(std::string_view s);
Visibility parse_visibility(std::string_view s);
TweetKind parse_tweet_kind(std::string_view s);

struct DateOfBirth {
  int day = 1;
  int month = 1;
  std::optional<int> year;
  Visibility visibility = Visibility::Public;
  Visibility year_visibility = Visibility::Public;

  bool operator==(const DateOfBirth&) const = default;
};

struct UserRecord {
  std::string user_id;
  PersonalityLabel personality = PersonalityLabel::from_index(0);
  std::string bio;
  std::int64_t followers = 0;
  std::int64_t friends = 0;
  std::int64_t likes = 0;
  std::int64_t statuses = 0;
  std::int64_t media = 0;
  bool verified = false;
  std::optional<Gender> gender;
  std::optional<DateOfBirth> dob;
  std::optional<std::string> location;

  bool operator==(const UserRecord&) const = default;
};

struct TweetRecord {
  std::string user_id;
  std::string text;
  TweetKind kind = TweetKind::Tweet;
  PersonalityLabel label = PersonalityLabel::from_index(0);

  // 0 for authored content (tweet/quote), 1 for interactions (reply/retweet).
  int level() const {
    return (kind == TweetKind::Tweet || kind == TweetKind::Quote) ? 0 : 1;
  }

  bool operator==(const TweetRecord&) const = default;
};

struct BalancedCorpus {
  std::map<PersonalityLabel, std::vector<TweetRecord>> per_type;
  std::size_t quota = 0;

  std::vector<TweetRecord> flatten() const;
};

// Alias for PersonalityLabel::parse; throws InvalidCode.
PersonalityLabel parse_personality(std::string_view code);

// JSONL loaders. Both throw ParseError (with 1-based line number) on the
// first malformed line; load_users also throws DuplicateUser, load_tweets
// UnknownUser.
std::vector<UserRecord> load_users(const std::filesystem::path& path);
std::vector<TweetRecord> load_tweets(const std::filesystem::path& path,
                                     const std::vector<UserRecord>& users);

// Parse a single JSONL line (used by the loaders and the validator).
UserRecord parse_user_line(std::string_view line, std::size_t line_no);
TweetRecord parse_tweet_line(std::string_view line, std::size_t line_no);

// Validation that collects every problem instead of stopping at the first.
struct ValidationIssue {
  std::filesystem::path file;
  std::size_t line = 0;  // 0 = file-level problem
  std::string message;
};
std::vector<ValidationIssue> validate_users_file(const std::filesystem::path& path);
std::vector<ValidationIssue> validate_tweets_file(const std::filesystem::path& path,
                                                  const std::vector<UserRecord>& users);

// Canonical serialization (stable key order, one record per line).
void write_users_jsonl(const std::filesystem::path& path, const std::vector<UserRecord>& users);
void write_tweets_jsonl(const std::filesystem::path& path, const std::vector<TweetRecord>& tweets);
std::string user_to_json_line(const UserRecord& u);
std::string tweet_to_json_line(const TweetRecord& t);

// Uniform per-type subsample down to the smallest per-type count. Requires
// every one of the 16 types to be present (MissingType otherwise).
BalancedCorpus balance_by_type(const std::vector<TweetRecord>& tweets, std::uint64_t seed);

// Stratified index split. Per class, test count = round-half-up of
// class_size * test_fraction; throws DegenerateClass if a class would keep
// no training items. Class groups are processed in ascending label order.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
SplitIndices stratified_split(const std::vector<int>& labels, double test_fraction,
                              std::uint64_t seed);

std::pair<std::vector<TweetRecord>, std::vector<TweetRecord>> split_train_test(
    const std::vector<TweetRecord>& tweets, double test_fraction, std::uint64_t seed);

// Zodiac sign from a (day, month) pair; throws InvalidDate (Feb 29 is valid).
Zodiac derive_zodiac(int day, int month);

bool is_valid_day_month(int day, int month);

// --- synthetic corpus generation -------------------------------------------

// Per-type recipe: token distribution for tweet text plus profile knobs.
struct TypeProfile {
  int n_users = 1;
  int n_tweets = 50;        // level-zero texts (kind tweet/quote)
  int n_interactions = 0;   // level-one texts (kind reply/retweet)
  std::vector<std::pair<std::string, double>> token_weights;
  int tweet_len_min = 5;
  int tweet_len_max = 12;
  double emoji_rate = 0.25;    // chance a text ends with a (shared) emoji
  double hashtag_rate = 0.15;  // chance a text carries a hashtag of its own vocabulary
  // Chance of appending one positive/negative/neutral cue token from the
  // sentiment demo vocabulary; all-zero keeps type vocabularies disjoint.
  std::array<double, 3> sentiment_mix{};
  double follower_scale = 1.0;
  double dob_rate = 0.5;
  double location_rate = 0.5;
  double gender_rate = 0.6;
};

struct SyntheticSpec {
  std::map<std::string, TypeProfile> types;  // key = MBTI code
};

// Deterministic synthetic corpus; same spec + seed => identical records
// (and byte-identical files through the writers). Throws InvalidSpec if
// fewer than 2 types are given or a profile is unusable.
std::pair<std::vector<UserRecord>, std::vector<TweetRecord>> generate_synthetic(
    const SyntheticSpec& spec, std::uint64_t seed);

// Ready-made spec covering all 16 types with pairwise-disjoint vocabularies,
// so classifiers can provably separate the classes.
SyntheticSpec disjoint_vocabulary_spec(int tweets_per_type, int vocab_per_type,
                                       int users_per_type = 2, int interactions_per_type = 10);

// The i-th synthetic token of a type's private vocabulary (pseudo-Arabic,
// distinct across types).
std::string synthetic_token(int type_index, int term_index);

}  // namespace persona::corpus
