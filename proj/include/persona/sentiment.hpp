#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persona/corpus.hpp"
#include "persona/models.hpp"
#include "persona/vectorize.hpp"

namespace persona::sentiment {

enum class SentimentLabel : std::uint8_t { Positive, Negative, Neutral };

std::string_view sentiment_name(SentimentLabel s);
SentimentLabel parse_sentiment(std::string_view s);

struct TaggedText {
  std::string text;
  SentimentLabel label = SentimentLabel::Neutral;

  bool operator==(const TaggedText&) const = default;
};

// JSONL {"text": ..., "label": "positive"|"negative"|"neutral"}.
std::vector<TaggedText> load_tagged(const std::filesystem::path& path);
void write_tagged_jsonl(const std::filesystem::path& path, const std::vector<TaggedText>& rows);

// Tiny deterministic 3-class corpus with disjoint vocabularies; for demos
// and tests, not representative of real sentiment data.
std::vector<TaggedText> generate_demo_corpus(int per_class, std::uint64_t seed);

// normalize -> tokenize -> unigram tf-idf -> multinomial softmax regression.
struct SentimentModel {
  vectorize::TfidfModel tfidf;
  models::ClassifierModel classifier;
};

// Throws MissingClass if any of the three classes is absent.
SentimentModel train_sentiment(const std::vector<TaggedText>& corpus, std::uint64_t seed);

struct SentimentResult {
  SentimentLabel label = SentimentLabel::Positive;
  std::array<double, 3> proba{};  // positive, negative, neutral; sums to 1
};

// Empty token sequences get the uniform fallback distribution.
SentimentResult classify_sentiment(const SentimentModel& model, std::string_view text);

void save_sentiment(const SentimentModel& model, const std::filesystem::path& dir);
SentimentModel load_sentiment(const std::filesystem::path& dir);

struct ShareCell {
  std::size_t n_tweets = 0;
  double positive = 0.0;
  double negative = 0.0;
  double neutral = 0.0;
};

struct SharesReport {
  // Absent cells (no tweets) are nullopt, never zero-filled.
  std::array<std::optional<ShareCell>, 16> per_type;  // by PersonalityLabel index
  std::array<std::optional<ShareCell>, 8> per_axis;   // by AxisSide, tweet-pooled
  // Unweighted mean of member-type shares, for comparison with the pooled stat.
  std::array<std::optional<std::array<double, 3>>, 8> per_axis_mean_of_types;
  bool balanced = false;
  std::size_t quota = 0;  // only set when balanced
};

// Classify every tweet and aggregate per type and per axis side. With
// balanced=true the corpus is first balanced per type (MissingType if a
// type is empty), consuming exactly quota * 16 tweets.
SharesReport sentiment_shares(const SentimentModel& model,
                              const std::vector<corpus::TweetRecord>& tweets, bool balanced,
                              std::uint64_t seed = 42);

}  // namespace persona::sentiment
