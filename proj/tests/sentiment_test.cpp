#include <doctest.h>

#include <array>

#include "helpers.hpp"
#include "persona/errors.hpp"
#include "persona/rng.hpp"
#include "persona/sentiment.hpp"

using namespace persona;
using namespace persona::sentiment;

namespace {

// Tweets for all 16 types, with texts drawn from the given class of the
// sentiment demo vocabulary (class offsets mirror generate_demo_corpus).
std::vector<corpus::TweetRecord> typed_tweets_from_class(int sentiment_class, int per_type,
                                                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<corpus::TweetRecord> tweets;
  for (const auto& label : PersonalityLabel::all()) {
    for (int i = 0; i < per_type; ++i) {
      std::string text;
      for (int k = 0; k < 5; ++k) {
        if (k) text += ' ';
        text += corpus::synthetic_token(sentiment_class + 16, static_cast<int>(rng.index(10)));
      }
      tweets.push_back(testutil::make_tweet("u", std::string(label.code()), text));
    }
  }
  return tweets;
}

}  // namespace

TEST_CASE("sentiment training reaches 100% on disjoint vocabularies") {
  const auto corpus_rows = generate_demo_corpus(40, 3);
  const auto model = train_sentiment(corpus_rows, 42);
  std::size_t correct = 0;
  for (const auto& row : corpus_rows)
    if (classify_sentiment(model, row.text).label == row.label) ++correct;
  CHECK(correct == corpus_rows.size());
}

TEST_CASE("sentiment training is deterministic and validates classes") {
  const auto corpus_rows = generate_demo_corpus(20, 5);
  const auto a = train_sentiment(corpus_rows, 42);
  const auto b = train_sentiment(corpus_rows, 42);
  for (const auto& row : corpus_rows) {
    const auto ra = classify_sentiment(a, row.text);
    const auto rb = classify_sentiment(b, row.text);
    CHECK(ra.label == rb.label);
    CHECK(ra.proba == rb.proba);
  }

  std::vector<TaggedText> missing;
  for (const auto& row : corpus_rows)
    if (row.label != SentimentLabel::Neutral) missing.push_back(row);
  CHECK_THROWS_AS(train_sentiment(missing, 42), MissingClass);
}

TEST_CASE("classify_sentiment distributions behave") {
  const auto model = train_sentiment(generate_demo_corpus(30, 7), 42);

  SUBCASE("empty text falls back to the uniform distribution") {
    const auto result = classify_sentiment(model, "");
    CHECK(result.proba[0] == doctest::Approx(1.0 / 3.0));
    CHECK(result.proba[1] == doctest::Approx(1.0 / 3.0));
    CHECK(result.proba[2] == doctest::Approx(1.0 / 3.0));
    CHECK(result.label == SentimentLabel::Positive);  // smallest index wins the tie
    // Punctuation-only text has no pipeline tokens either.
    CHECK(classify_sentiment(model, "!!!").proba[0] == doctest::Approx(1.0 / 3.0));
  }

  SUBCASE("probabilities sum to one on random texts") {
    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
      std::string text;
      for (int k = 0; k < 6; ++k)
        text += corpus::synthetic_token(static_cast<int>(rng.index(16)), static_cast<int>(rng.index(12))) + " ";
      const auto result = classify_sentiment(model, text);
      CHECK(result.proba[0] + result.proba[1] + result.proba[2] ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  SUBCASE("classification is pure") {
    const std::string text = corpus::synthetic_token(17, 3) + " " + corpus::synthetic_token(17, 4);
    const auto a = classify_sentiment(model, text);
    const auto b = classify_sentiment(model, text);
    CHECK(a.label == b.label);
    CHECK(a.proba == b.proba);
  }
}

TEST_CASE("sentiment_shares aggregates per type and per axis") {
  const auto model = train_sentiment(generate_demo_corpus(30, 7), 42);

  SUBCASE("all-positive corpus gives (1, 0, 0) everywhere") {
    const auto tweets = typed_tweets_from_class(0, 10, 2);
    const auto report = sentiment_shares(model, tweets, false);
    for (const auto& label : PersonalityLabel::all()) {
      const auto& cell = report.per_type[label.index()];
      REQUIRE(cell.has_value());
      CHECK(cell->positive == doctest::Approx(1.0));
      CHECK(cell->negative == doctest::Approx(0.0));
      CHECK(cell->n_tweets == 10);
    }
    for (std::size_t s = 0; s < 8; ++s) {
      REQUIRE(report.per_axis[s].has_value());
      CHECK(report.per_axis[s]->positive == doctest::Approx(1.0));
    }
  }

  SUBCASE("per-axis pooled shares equal a brute-force recount") {
    // Mix: each type gets tweets from different sentiment classes.
    Rng rng(19);
    std::vector<corpus::TweetRecord> tweets;
    for (const auto& label : PersonalityLabel::all()) {
      const int per_type = 5 + static_cast<int>(rng.index(8));
      for (int i = 0; i < per_type; ++i) {
        const int cls = static_cast<int>(rng.index(3));
        std::string text;
        for (int k = 0; k < 4; ++k)
          text += corpus::synthetic_token(cls + 16, static_cast<int>(rng.index(10))) + " ";
        tweets.push_back(testutil::make_tweet("u", std::string(label.code()), text));
      }
    }
    const auto report = sentiment_shares(model, tweets, false);

    for (std::size_t s = 0; s < 8; ++s) {
      const AxisSide side = kAllAxisSides[s];
      std::array<std::size_t, 3> counts{};
      std::size_t total = 0;
      for (const auto& t : tweets) {
        if (!t.label.has_side(side)) continue;
        ++counts[static_cast<std::size_t>(classify_sentiment(model, t.text).label)];
        ++total;
      }
      REQUIRE(report.per_axis[s].has_value());
      CHECK(report.per_axis[s]->n_tweets == total);
      CHECK(report.per_axis[s]->positive ==
            doctest::Approx(static_cast<double>(counts[0]) / static_cast<double>(total))
                .epsilon(1e-12));
      // Triple sums to 1.
      CHECK(report.per_axis[s]->positive + report.per_axis[s]->negative +
                report.per_axis[s]->neutral ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  SUBCASE("balanced mode consumes exactly quota * 16 tweets") {
    Rng rng(23);
    std::vector<corpus::TweetRecord> tweets;
    for (const auto& label : PersonalityLabel::all()) {
      const int per_type = 6 + static_cast<int>(label.index() % 5);
      for (int i = 0; i < per_type; ++i) {
        std::string text = corpus::synthetic_token(16, static_cast<int>(rng.index(10)));
        tweets.push_back(testutil::make_tweet("u", std::string(label.code()), text));
      }
    }
    const auto report = sentiment_shares(model, tweets, true, 42);
    CHECK(report.balanced);
    CHECK(report.quota == 6);
    std::size_t used = 0;
    for (const auto& cell : report.per_type) {
      REQUIRE(cell.has_value());
      CHECK(cell->n_tweets == report.quota);
      used += cell->n_tweets;
    }
    CHECK(used == report.quota * 16);
  }

  SUBCASE("balanced mode requires every type") {
    std::vector<corpus::TweetRecord> tweets =
        typed_tweets_from_class(0, 3, 5);
    std::erase_if(tweets, [](const corpus::TweetRecord& t) { return t.label.code() == "INFP"; });
    CHECK_THROWS_AS(sentiment_shares(model, tweets, true, 42), MissingType);
    CHECK_NOTHROW(sentiment_shares(model, tweets, false));
  }

  SUBCASE("types with no tweets stay absent, not zero") {
    std::vector<corpus::TweetRecord> tweets;
    tweets.push_back(testutil::make_tweet("u", "ENTJ", corpus::synthetic_token(16, 1)));
    const auto report = sentiment_shares(model, tweets, false);
    CHECK(report.per_type[PersonalityLabel::parse("ENTJ").index()].has_value());
    CHECK_FALSE(report.per_type[PersonalityLabel::parse("INFP").index()].has_value());
  }
}

TEST_CASE("sentiment model persistence round-trips") {
  testutil::TempDir dir;
  const auto corpus_rows = generate_demo_corpus(25, 11);
  const auto model = train_sentiment(corpus_rows, 42);
  save_sentiment(model, dir.path());
  const auto loaded = load_sentiment(dir.path());
  for (const auto& row : corpus_rows) {
    const auto a = classify_sentiment(model, row.text);
    const auto b = classify_sentiment(loaded, row.text);
    CHECK(a.label == b.label);
    CHECK(a.proba == b.proba);
  }
}

TEST_CASE("tagged corpus io validates") {
  testutil::TempDir dir;
  const auto rows = generate_demo_corpus(5, 2);
  write_tagged_jsonl(dir.file("t.jsonl"), rows);
  CHECK(load_tagged(dir.file("t.jsonl")) == rows);

  testutil::write_file(dir.file("bad.jsonl"), "{\"text\":\"x\",\"label\":\"meh\"}\n");
  CHECK_THROWS_AS(load_tagged(dir.file("bad.jsonl")), ParseError);
  testutil::write_file(dir.file("empty_text.jsonl"), "{\"text\":\"  \",\"label\":\"positive\"}\n");
  CHECK_THROWS_AS(load_tagged(dir.file("empty_text.jsonl")), ParseError);
}
