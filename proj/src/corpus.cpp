#include "persona/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "persona/errors.hpp"
#include "persona/rng.hpp"

namespace persona::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

// --- enum names -------------------------------------------------------------

std::string_view gender_name(Gender g) {
  switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::UnknownMultiple: return "unknown_multiple";
  }
  return "";
}

std::string_view visibility_name(Visibility v) {
  switch (v) {
    case Visibility::Self: return "self";
    case Visibility::Public: return "public";
    case Visibility::MutualFollow: return "mutual_follow";
    case Visibility::Followers: return "followers";
    case Visibility::Following: return "following";
  }
  return "";
}

std::string_view tweet_kind_name(TweetKind k) {
  switch (k) {
    case TweetKind::Tweet: return "tweet";
    case TweetKind::Quote: return "quote";
    case TweetKind::Reply: return "reply";
    case TweetKind::Retweet: return "retweet";
  }
  return "";
}

std::string_view zodiac_name(Zodiac z) {
  static constexpr std::string_view names[12] = {
      "Aries", "Taurus", "Gemini", "Cancer", "Leo", "Virgo",
      "Libra", "Scorpio", "Sagittarius", "Capricorn", "Aquarius", "Pisces"};
  return names[static_cast<std::uint8_t>(z)];
}

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace

Gender parse_gender(std::string_view s) {
  const std::string l = lower_ascii(s);
  if (l == "male") return Gender::Male;
  if (l == "female") return Gender::Female;
  if (l == "unknown_multiple") return Gender::UnknownMultiple;
  throw Error("invalid gender: \"" + std::string(s) + "\"");
}

Visibility parse_visibility(std::string_view s) {
  const std::string l = lower_ascii(s);
  if (l == "self") return Visibility::Self;
  if (l == "public") return Visibility::Public;
  if (l == "mutual_follow") return Visibility::MutualFollow;
  if (l == "followers") return Visibility::Followers;
  if (l == "following") return Visibility::Following;
  throw Error("invalid visibility: \"" + std::string(s) + "\"");
}

TweetKind parse_tweet_kind(std::string_view s) {
  const std::string l = lower_ascii(s);
  if (l == "tweet") return TweetKind::Tweet;
  if (l == "quote") return TweetKind::Quote;
  if (l == "reply") return TweetKind::Reply;
  if (l == "retweet") return TweetKind::Retweet;
  throw Error("invalid tweet kind: \"" + std::string(s) + "\"");
}

PersonalityLabel parse_personality(std::string_view code) {
  return PersonalityLabel::parse(code);
}

// --- record parsing ---------------------------------------------------------

namespace {

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& msg) {
  throw ParseError(line_no, msg);
}

void require_keys(const json& obj, std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional, std::size_t line_no) {
  for (auto key : required)
    if (!obj.contains(key)) fail(line_no, "missing field \"" + std::string(key) + "\"");
  for (auto& [key, value] : obj.items()) {
    (void)value;
    const bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                       std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) fail(line_no, "unknown field \"" + key + "\"");
  }
}

std::int64_t get_count(const json& obj, const char* key, std::size_t line_no) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(line_no, std::string(key) + " must be an integer");
  const std::int64_t n = v.get<std::int64_t>();
  if (n < 0) fail(line_no, std::string(key) + " must be non-negative");
  return n;
}

std::string get_string(const json& obj, const char* key, std::size_t line_no) {
  const json& v = obj.at(key);
  if (!v.is_string()) fail(line_no, std::string(key) + " must be a string");
  return v.get<std::string>();
}

DateOfBirth parse_dob(const json& v, std::size_t line_no) {
  if (!v.is_object()) fail(line_no, "dob must be an object");
  require_keys(v, {"day", "month", "visibility", "year_visibility"}, {"year"}, line_no);
  DateOfBirth dob;
  if (!v.at("day").is_number_integer() || !v.at("month").is_number_integer())
    fail(line_no, "dob day/month must be integers");
  dob.day = v.at("day").get<int>();
  dob.month = v.at("month").get<int>();
  if (!is_valid_day_month(dob.day, dob.month))
    fail(line_no, "dob is not a valid calendar date");
  if (v.contains("year")) {
    if (v.at("year").is_null()) {
      // absent year
    } else if (v.at("year").is_number_integer()) {
      dob.year = v.at("year").get<int>();
    } else {
      fail(line_no, "dob year must be an integer");
    }
  }
  try {
    dob.visibility = parse_visibility(v.at("visibility").get_ref<const std::string&>());
    dob.year_visibility = parse_visibility(v.at("year_visibility").get_ref<const std::string&>());
  } catch (const Error& e) {
    fail(line_no, e.what());
  }
  return dob;
}

}  // namespace

bool is_valid_day_month(int day, int month) {
  if (month < 1 || month > 12 || day < 1) return false;
  static constexpr int days_in_month[12] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return day <= days_in_month[month - 1];
}

UserRecord parse_user_line(std::string_view line, std::size_t line_no) {
  const json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) fail(line_no, "not a JSON object");
  require_keys(obj,
               {"user_id", "personality", "bio", "followers", "friends", "likes", "statuses",
                "media", "verified"},
               {"gender", "dob", "location"}, line_no);
  UserRecord u;
  u.user_id = get_string(obj, "user_id", line_no);
  if (u.user_id.empty()) fail(line_no, "user_id must be non-empty");
  try {
    u.personality = PersonalityLabel::parse(get_string(obj, "personality", line_no));
  } catch (const InvalidCode& e) {
    fail(line_no, e.what());
  }
  u.bio = get_string(obj, "bio", line_no);
  u.followers = get_count(obj, "followers", line_no);
  u.friends = get_count(obj, "friends", line_no);
  u.likes = get_count(obj, "likes", line_no);
  u.statuses = get_count(obj, "statuses", line_no);
  u.media = get_count(obj, "media", line_no);
  if (!obj.at("verified").is_boolean()) fail(line_no, "verified must be a boolean");
  u.verified = obj.at("verified").get<bool>();
  if (obj.contains("gender") && !obj.at("gender").is_null()) {
    try {
      u.gender = parse_gender(get_string(obj, "gender", line_no));
    } catch (const Error& e) {
      fail(line_no, e.what());
    }
  }
  if (obj.contains("dob") && !obj.at("dob").is_null()) u.dob = parse_dob(obj.at("dob"), line_no);
  if (obj.contains("location") && !obj.at("location").is_null())
    u.location = get_string(obj, "location", line_no);
  return u;
}

TweetRecord parse_tweet_line(std::string_view line, std::size_t line_no) {
  const json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) fail(line_no, "not a JSON object");
  require_keys(obj, {"user_id", "text", "kind"}, {}, line_no);
  TweetRecord t;
  t.user_id = get_string(obj, "user_id", line_no);
  if (t.user_id.empty()) fail(line_no, "user_id must be non-empty");
  t.text = get_string(obj, "text", line_no);
  if (is_blank(t.text)) fail(line_no, "text must be non-empty");
  try {
    t.kind = parse_tweet_kind(get_string(obj, "kind", line_no));
  } catch (const Error& e) {
    fail(line_no, e.what());
  }
  return t;
}

// --- loaders ----------------------------------------------------------------

namespace {

template <typename PerLine>
void for_each_line(const std::filesystem::path& path, PerLine&& per_line) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    per_line(line, line_no);
  }
}

}  // namespace

std::vector<UserRecord> load_users(const std::filesystem::path& path) {
  std::vector<UserRecord> users;
  std::unordered_set<std::string> seen;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    UserRecord u = parse_user_line(line, line_no);
    if (!seen.insert(u.user_id).second) throw DuplicateUser(u.user_id);
    users.push_back(std::move(u));
  });
  return users;
}

std::vector<TweetRecord> load_tweets(const std::filesystem::path& path,
                                     const std::vector<UserRecord>& users) {
  std::unordered_map<std::string, PersonalityLabel> by_id;
  by_id.reserve(users.size());
  for (const auto& u : users) by_id.emplace(u.user_id, u.personality);
  std::vector<TweetRecord> tweets;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    TweetRecord t = parse_tweet_line(line, line_no);
    auto it = by_id.find(t.user_id);
    if (it == by_id.end()) throw UnknownUser(t.user_id);
    t.label = it->second;
    tweets.push_back(std::move(t));
  });
  return tweets;
}

std::vector<ValidationIssue> validate_users_file(const std::filesystem::path& path) {
  std::vector<ValidationIssue> issues;
  std::unordered_set<std::string> seen;
  try {
    for_each_line(path, [&](const std::string& line, std::size_t line_no) {
      try {
        UserRecord u = parse_user_line(line, line_no);
        if (!seen.insert(u.user_id).second)
          issues.push_back({path, line_no, "duplicate user_id: " + u.user_id});
      } catch (const ParseError& e) {
        issues.push_back({path, e.line(), e.what()});
      }
    });
  } catch (const IoError& e) {
    issues.push_back({path, 0, e.what()});
  }
  return issues;
}

std::vector<ValidationIssue> validate_tweets_file(const std::filesystem::path& path,
                                                  const std::vector<UserRecord>& users) {
  std::unordered_set<std::string> ids;
  for (const auto& u : users) ids.insert(u.user_id);
  std::vector<ValidationIssue> issues;
  try {
    for_each_line(path, [&](const std::string& line, std::size_t line_no) {
      try {
        TweetRecord t = parse_tweet_line(line, line_no);
        if (!ids.count(t.user_id))
          issues.push_back({path, line_no, "tweet references unknown user_id: " + t.user_id});
      } catch (const ParseError& e) {
        issues.push_back({path, e.line(), e.what()});
      }
    });
  } catch (const IoError& e) {
    issues.push_back({path, 0, e.what()});
  }
  return issues;
}

// --- serialization ----------------------------------------------------------

std::string user_to_json_line(const UserRecord& u) {
  ordered_json obj;
  obj["user_id"] = u.user_id;
  obj["personality"] = std::string(u.personality.code());
  obj["bio"] = u.bio;
  obj["followers"] = u.followers;
  obj["friends"] = u.friends;
  obj["likes"] = u.likes;
  obj["statuses"] = u.statuses;
  obj["media"] = u.media;
  obj["verified"] = u.verified;
  if (u.gender) obj["gender"] = std::string(gender_name(*u.gender));
  if (u.dob) {
    ordered_json d;
    d["day"] = u.dob->day;
    d["month"] = u.dob->month;
    if (u.dob->year) d["year"] = *u.dob->year;
    d["visibility"] = std::string(visibility_name(u.dob->visibility));
    d["year_visibility"] = std::string(visibility_name(u.dob->year_visibility));
    obj["dob"] = std::move(d);
  }
  if (u.location) obj["location"] = *u.location;
  return obj.dump();
}

std::string tweet_to_json_line(const TweetRecord& t) {
  ordered_json obj;
  obj["user_id"] = t.user_id;
  obj["text"] = t.text;
  obj["kind"] = std::string(tweet_kind_name(t.kind));
  return obj.dump();
}

namespace {

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

void write_users_jsonl(const std::filesystem::path& path, const std::vector<UserRecord>& users) {
  std::vector<std::string> lines;
  lines.reserve(users.size());
  for (const auto& u : users) lines.push_back(user_to_json_line(u));
  write_lines(path, lines);
}

void write_tweets_jsonl(const std::filesystem::path& path, const std::vector<TweetRecord>& tweets) {
  std::vector<std::string> lines;
  lines.reserve(tweets.size());
  for (const auto& t : tweets) lines.push_back(tweet_to_json_line(t));
  write_lines(path, lines);
}

// --- balancing and splitting --------------------------------------------------

std::vector<TweetRecord> BalancedCorpus::flatten() const {
  std::vector<TweetRecord> out;
  out.reserve(quota * per_type.size());
  for (const auto& [label, records] : per_type) {
    (void)label;
    out.insert(out.end(), records.begin(), records.end());
  }
  return out;
}

BalancedCorpus balance_by_type(const std::vector<TweetRecord>& tweets, std::uint64_t seed) {
  std::map<PersonalityLabel, std::vector<TweetRecord>> groups;
  for (const auto& t : tweets) groups[t.label].push_back(t);
  for (const auto& label : PersonalityLabel::all())
    if (!groups.count(label) || groups[label].empty())
      throw MissingType(std::string(label.code()));

  std::size_t quota = SIZE_MAX;
  for (const auto& [label, records] : groups) {
    (void)label;
    quota = std::min(quota, records.size());
  }

  Rng rng(seed);
  BalancedCorpus out;
  out.quota = quota;
  for (auto& [label, records] : groups) {
    rng.shuffle(records);
    records.resize(quota);
    out.per_type.emplace(label, std::move(records));
  }
  return out;
}

SplitIndices stratified_split(const std::vector<int>& labels, double test_fraction,
                              std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error("test_fraction must be in (0, 1)");
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);

  Rng rng(seed);
  SplitIndices out;
  for (auto& [label, idx] : groups) {
    rng.shuffle(idx);
    const auto n = idx.size();
    // round-half-up
    auto n_test = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * test_fraction + 0.5));
    if (n_test > n) n_test = n;
    if (n - n_test == 0) throw DegenerateClass(std::to_string(label));
    out.test.insert(out.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  return out;
}

std::pair<std::vector<TweetRecord>, std::vector<TweetRecord>> split_train_test(
    const std::vector<TweetRecord>& tweets, double test_fraction, std::uint64_t seed) {
  std::vector<int> labels;
  labels.reserve(tweets.size());
  for (const auto& t : tweets) labels.push_back(t.label.index());
  SplitIndices idx;
  try {
    idx = stratified_split(labels, test_fraction, seed);
  } catch (const DegenerateClass&) {
    // carry the type code instead of the numeric label
    throw DegenerateClass("see per-type counts");
  }
  std::vector<TweetRecord> train, test;
  train.reserve(idx.train.size());
  test.reserve(idx.test.size());
  for (auto i : idx.train) train.push_back(tweets[i]);
  for (auto i : idx.test) test.push_back(tweets[i]);
  return {std::move(train), std::move(test)};
}

// --- zodiac -------------------------------------------------------------------

Zodiac derive_zodiac(int day, int month) {
  if (!is_valid_day_month(day, month))
    throw InvalidDate("not a valid calendar date: day " + std::to_string(day) + ", month " +
                      std::to_string(month));
  // Boundary day of the sign change per month, and the sign on each side.
  struct MonthEntry {
    int last_day_of_first;  // days <= this belong to `first`
    Zodiac first, second;
  };
  static constexpr MonthEntry table[12] = {
      {19, Zodiac::Capricorn, Zodiac::Aquarius},    // January
      {18, Zodiac::Aquarius, Zodiac::Pisces},       // February
      {20, Zodiac::Pisces, Zodiac::Aries},          // March
      {19, Zodiac::Aries, Zodiac::Taurus},          // April
      {20, Zodiac::Taurus, Zodiac::Gemini},         // May
      {20, Zodiac::Gemini, Zodiac::Cancer},         // June
      {22, Zodiac::Cancer, Zodiac::Leo},            // July
      {22, Zodiac::Leo, Zodiac::Virgo},             // August
      {22, Zodiac::Virgo, Zodiac::Libra},           // September
      {22, Zodiac::Libra, Zodiac::Scorpio},         // October
      {21, Zodiac::Scorpio, Zodiac::Sagittarius},   // November
      {21, Zodiac::Sagittarius, Zodiac::Capricorn}  // December
  };
  const MonthEntry& e = table[month - 1];
  return day <= e.last_day_of_first ? e.first : e.second;
}

}  // namespace persona::corpus
