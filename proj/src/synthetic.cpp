#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "persona/corpus.hpp"
#include "persona/errors.hpp"
#include "persona/rng.hpp"

namespace persona::corpus {

namespace {

constexpr std::array<const char*, 20> kSyllables = {
    "با", "تو", "مر", "حب", "سل", "نو", "كت", "دع", "صف", "قم",
    "ها", "يل", "شر", "جد", "عن", "فك", "رز", "طل", "غم", "خض"};

constexpr std::array<const char*, 6> kEmojis = {"😀", "🌙", "✨", "🙏", "❤", "🌸"};

constexpr std::array<const char*, 8> kLocations = {
    "الرياض", "القاهرة", "بيروت", "بغداد", "مسقط", "الدار البيضاء", "جدة", "عمان"};

constexpr std::array<const char*, 6> kLatinWords = {"music", "coffee", "books",
                                                    "travel", "design", "code"};

class WeightedSampler {
 public:
  explicit WeightedSampler(const std::vector<std::pair<std::string, double>>& weights) {
    double total = 0.0;
    for (const auto& [token, w] : weights) {
      if (w <= 0.0) throw InvalidSpec("token weight must be positive: " + token);
      total += w;
      cumulative_.push_back(total);
      tokens_.push_back(token);
    }
    total_ = total;
  }

  const std::string& sample(Rng& rng) const {
    const double u = rng.uniform01() * total_;
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
    if (i >= tokens_.size()) i = tokens_.size() - 1;
    return tokens_[i];
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

std::string make_text(const WeightedSampler& sampler, Rng& rng, int len_min, int len_max) {
  const int len = len_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(len_max - len_min + 1)));
  std::string text;
  for (int i = 0; i < len; ++i) {
    if (i) text += ' ';
    text += sampler.sample(rng);
  }
  return text;
}

DateOfBirth make_dob(Rng& rng) {
  static constexpr std::array<Visibility, 5> vis = {Visibility::Self, Visibility::Public,
                                                    Visibility::MutualFollow, Visibility::Followers,
                                                    Visibility::Following};
  DateOfBirth dob;
  dob.month = 1 + static_cast<int>(rng.below(12));
  dob.day = 1 + static_cast<int>(rng.below(28));
  if (rng.uniform01() < 0.5) dob.year = 1970 + static_cast<int>(rng.below(36));
  dob.visibility = vis[rng.index(vis.size())];
  dob.year_visibility = vis[rng.index(vis.size())];
  return dob;
}

}  // namespace

std::string synthetic_token(int type_index, int term_index) {
  // Syllable 1 encodes the type, syllables 2-3 the term. Personality types
  // use indices 0..15; 16..18 are reserved for the sentiment demo classes.
  const int a = (term_index / static_cast<int>(kSyllables.size())) % static_cast<int>(kSyllables.size());
  const int b = term_index % static_cast<int>(kSyllables.size());
  std::string out = kSyllables[static_cast<std::size_t>(type_index % 20)];
  out += kSyllables[static_cast<std::size_t>(a)];
  out += kSyllables[static_cast<std::size_t>(b)];
  return out;
}

SyntheticSpec disjoint_vocabulary_spec(int tweets_per_type, int vocab_per_type,
                                       int users_per_type, int interactions_per_type) {
  if (vocab_per_type < 1 || vocab_per_type > 400)
    throw InvalidSpec("vocab_per_type must be in [1, 400]");
  SyntheticSpec spec;
  for (const auto& label : PersonalityLabel::all()) {
    TypeProfile p;
    p.n_users = users_per_type;
    p.n_tweets = tweets_per_type;
    p.n_interactions = interactions_per_type;
    for (int i = 0; i < vocab_per_type; ++i)
      p.token_weights.emplace_back(synthetic_token(label.index(), i), 1.0 / (1.0 + i));
    // Demo corpus plants a mild profile effect: extraverts get 2x followers.
    p.follower_scale = label.has_side(AxisSide::E) ? 2.0 : 1.0;
    p.dob_rate = label.has_side(AxisSide::J) ? 0.7 : 0.4;
    spec.types[std::string(label.code())] = std::move(p);
  }
  return spec;
}

std::pair<std::vector<UserRecord>, std::vector<TweetRecord>> generate_synthetic(
    const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.types.size() < 2) throw InvalidSpec("need at least 2 personality types");
  for (const auto& [code, p] : spec.types) {
    if (p.n_users < 1) throw InvalidSpec(code + ": n_users must be >= 1");
    if (p.n_tweets < 1) throw InvalidSpec(code + ": n_tweets must be >= 1");
    if (p.n_interactions < 0) throw InvalidSpec(code + ": n_interactions must be >= 0");
    if (p.token_weights.empty()) throw InvalidSpec(code + ": empty token distribution");
    if (p.tweet_len_min < 1 || p.tweet_len_max < p.tweet_len_min)
      throw InvalidSpec(code + ": bad tweet length range");
  }

  Rng rng(seed);
  std::vector<UserRecord> users;
  std::vector<TweetRecord> tweets;

  for (const auto& [code, p] : spec.types) {
    const PersonalityLabel label = PersonalityLabel::parse(code);
    const WeightedSampler sampler(p.token_weights);

    std::vector<std::string> ids;
    for (int i = 0; i < p.n_users; ++i) {
      UserRecord u;
      u.user_id = "u_" + std::string(label.code()) + "_" + std::to_string(i);
      u.personality = label;
      u.followers = static_cast<std::int64_t>(std::llround(
          static_cast<double>(100 + rng.below(900)) * p.follower_scale));
      u.friends = static_cast<std::int64_t>(50 + rng.below(450));
      u.likes = static_cast<std::int64_t>(100 + rng.below(4900));
      u.statuses = static_cast<std::int64_t>(200 + rng.below(7800));
      u.media = static_cast<std::int64_t>(rng.below(300));
      u.verified = rng.uniform01() < 0.1;
      u.bio = make_text(sampler, rng, 3, 8);
      if (rng.uniform01() < 0.3) u.bio += " " + std::string(kEmojis[rng.index(kEmojis.size())]);
      if (rng.uniform01() < 0.2) u.bio += " " + std::string(kLatinWords[rng.index(kLatinWords.size())]);
      if (rng.uniform01() < p.gender_rate)
        u.gender = rng.uniform01() < 0.5 ? Gender::Male : Gender::Female;
      else if (rng.uniform01() < 0.1)
        u.gender = Gender::UnknownMultiple;
      if (rng.uniform01() < p.dob_rate) u.dob = make_dob(rng);
      if (rng.uniform01() < p.location_rate)
        u.location = std::string(kLocations[rng.index(kLocations.size())]);
      ids.push_back(u.user_id);
      users.push_back(std::move(u));
    }

    for (int i = 0; i < p.n_tweets; ++i) {
      TweetRecord t;
      t.user_id = ids[static_cast<std::size_t>(i) % ids.size()];
      t.text = make_text(sampler, rng, p.tweet_len_min, p.tweet_len_max);
      if (rng.uniform01() < p.emoji_rate)
        t.text += " " + std::string(kEmojis[rng.index(kEmojis.size())]);
      if (rng.uniform01() < p.hashtag_rate) t.text += " #" + sampler.sample(rng);
      const double u = rng.uniform01();
      double acc_mix = 0.0;
      for (int c = 0; c < 3; ++c) {
        acc_mix += p.sentiment_mix[static_cast<std::size_t>(c)];
        if (u < acc_mix) {
          t.text += " " + synthetic_token(16 + c, static_cast<int>(rng.below(10)));
          break;
        }
      }
      t.kind = rng.uniform01() < 0.8 ? TweetKind::Tweet : TweetKind::Quote;
      t.label = label;
      tweets.push_back(std::move(t));
    }
    for (int i = 0; i < p.n_interactions; ++i) {
      TweetRecord t;
      t.user_id = ids[static_cast<std::size_t>(i) % ids.size()];
      t.text = make_text(sampler, rng, p.tweet_len_min, p.tweet_len_max);
      if (rng.uniform01() < p.emoji_rate * 1.4)
        t.text += " " + std::string(kEmojis[rng.index(kEmojis.size())]);
      t.kind = rng.uniform01() < 0.5 ? TweetKind::Reply : TweetKind::Retweet;
      t.label = label;
      tweets.push_back(std::move(t));
    }
  }
  return {std::move(users), std::move(tweets)};
}

}  // namespace persona::corpus
