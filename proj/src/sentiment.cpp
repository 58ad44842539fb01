#include "persona/sentiment.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "persona/errors.hpp"
#include "persona/rng.hpp"

namespace persona::sentiment {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view sentiment_name(SentimentLabel s) {
  switch (s) {
    case SentimentLabel::Positive: return "positive";
    case SentimentLabel::Negative: return "negative";
    case SentimentLabel::Neutral: return "neutral";
  }
  return "";
}

SentimentLabel parse_sentiment(std::string_view s) {
  if (s == "positive") return SentimentLabel::Positive;
  if (s == "negative") return SentimentLabel::Negative;
  if (s == "neutral") return SentimentLabel::Neutral;
  throw Error("invalid sentiment label: \"" + std::string(s) + "\"");
}

std::vector<TaggedText> load_tagged(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<TaggedText> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("text") || !obj.contains("label"))
      throw ParseError(line_no, "expected {\"text\": ..., \"label\": ...}");
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (key != "text" && key != "label") throw ParseError(line_no, "unknown field \"" + key + "\"");
    }
    TaggedText row;
    if (!obj.at("text").is_string() || !obj.at("label").is_string())
      throw ParseError(line_no, "text and label must be strings");
    row.text = obj.at("text").get<std::string>();
    if (row.text.find_first_not_of(" \t\r\n") == std::string::npos)
      throw ParseError(line_no, "text must be non-empty");
    try {
      row.label = parse_sentiment(obj.at("label").get<std::string>());
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_tagged_jsonl(const std::filesystem::path& path, const std::vector<TaggedText>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& row : rows) {
    ordered_json obj;
    obj["text"] = row.text;
    obj["label"] = std::string(sentiment_name(row.label));
    out << obj.dump() << '\n';
  }
}

std::vector<TaggedText> generate_demo_corpus(int per_class, std::uint64_t seed) {
  // Disjoint per-class vocabularies built from the synthetic token stock.
  Rng rng(seed);
  std::vector<TaggedText> rows;
  const std::array<SentimentLabel, 3> classes = {SentimentLabel::Positive,
                                                 SentimentLabel::Negative,
                                                 SentimentLabel::Neutral};
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (int i = 0; i < per_class; ++i) {
      std::string text;
      const int len = 4 + static_cast<int>(rng.below(5));
      for (int k = 0; k < len; ++k) {
        if (k) text += ' ';
        text += corpus::synthetic_token(static_cast<int>(c) + 16, static_cast<int>(rng.below(10)));
      }
      rows.push_back({std::move(text), classes[c]});
    }
  }
  return rows;
}

namespace {

const std::vector<std::string>& label_names() {
  static const std::vector<std::string> names = {"positive", "negative", "neutral"};
  return names;
}

}  // namespace

SentimentModel train_sentiment(const std::vector<TaggedText>& corpus, std::uint64_t seed) {
  std::array<bool, 3> present{};
  for (const auto& row : corpus) present[static_cast<std::size_t>(row.label)] = true;
  for (std::size_t c = 0; c < 3; ++c)
    if (!present[c]) throw MissingClass(label_names()[c]);

  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const auto& row : corpus) docs.push_back(vectorize::pipeline_terms(row.text));

  SentimentModel model;
  model.tfidf = vectorize::tfidf_fit(docs, vectorize::Unit::Word, 1, 1, 10000);

  models::Dataset train;
  train.labels = label_names();
  train.x.reserve(docs.size());
  for (const auto& doc : docs) train.x.push_back(vectorize::tfidf_transform(model.tfidf, doc).values);
  for (const auto& row : corpus) train.y.push_back(static_cast<int>(row.label));

  models::ClassifierSpec spec;
  spec.algorithm = models::Algorithm::LogisticRegression;
  spec.seed = seed;
  model.classifier = models::train_classifier(spec, train);
  return model;
}

SentimentResult classify_sentiment(const SentimentModel& model, std::string_view text) {
  SentimentResult out;
  const auto terms = vectorize::pipeline_terms(text);
  if (terms.empty()) {
    out.proba = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    out.label = SentimentLabel::Positive;  // argmax with index tie-break
    return out;
  }
  const auto vec = vectorize::tfidf_transform(model.tfidf, terms);
  const auto proba = model.classifier.predict_proba(vec.values);
  for (std::size_t i = 0; i < 3; ++i) out.proba[i] = proba[i];
  out.label = static_cast<SentimentLabel>(model.classifier.predict_id(vec.values));
  return out;
}

void save_sentiment(const SentimentModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  vectorize::save_tfidf(model.tfidf, dir / "sentiment_vectorizer.json");
  models::save_model(model.classifier, dir / "sentiment_model.bin");
}

SentimentModel load_sentiment(const std::filesystem::path& dir) {
  SentimentModel model;
  model.tfidf = vectorize::load_tfidf(dir / "sentiment_vectorizer.json");
  model.classifier = models::load_model(dir / "sentiment_model.bin");
  if (model.classifier.labels != label_names())
    throw CorruptModel("sentiment model labels are not positive/negative/neutral");
  return model;
}

SharesReport sentiment_shares(const SentimentModel& model,
                              const std::vector<corpus::TweetRecord>& tweets, bool balanced,
                              std::uint64_t seed) {
  SharesReport report;
  report.balanced = balanced;

  std::vector<corpus::TweetRecord> pool;
  if (balanced) {
    const auto balanced_corpus = corpus::balance_by_type(tweets, seed);
    report.quota = balanced_corpus.quota;
    pool = balanced_corpus.flatten();
  } else {
    pool = tweets;
  }

  // counts[type][class]
  std::array<std::array<std::size_t, 3>, 16> counts{};
  std::array<std::size_t, 16> totals{};
  for (const auto& tweet : pool) {
    const auto result = classify_sentiment(model, tweet.text);
    ++counts[tweet.label.index()][static_cast<std::size_t>(result.label)];
    ++totals[tweet.label.index()];
  }

  for (std::size_t t = 0; t < 16; ++t) {
    if (totals[t] == 0) continue;
    ShareCell cell;
    cell.n_tweets = totals[t];
    cell.positive = static_cast<double>(counts[t][0]) / static_cast<double>(totals[t]);
    cell.negative = static_cast<double>(counts[t][1]) / static_cast<double>(totals[t]);
    cell.neutral = static_cast<double>(counts[t][2]) / static_cast<double>(totals[t]);
    report.per_type[t] = cell;
  }

  for (std::size_t s = 0; s < kAllAxisSides.size(); ++s) {
    const AxisSide side = kAllAxisSides[s];
    std::array<std::size_t, 3> pooled{};
    std::size_t total = 0;
    std::array<double, 3> mean_of_types{};
    std::size_t populated_types = 0;
    for (const auto& label : PersonalityLabel::all()) {
      if (!label.has_side(side)) continue;
      const std::size_t t = label.index();
      if (totals[t] == 0) continue;
      for (std::size_t c = 0; c < 3; ++c) pooled[c] += counts[t][c];
      total += totals[t];
      mean_of_types[0] += report.per_type[t]->positive;
      mean_of_types[1] += report.per_type[t]->negative;
      mean_of_types[2] += report.per_type[t]->neutral;
      ++populated_types;
    }
    if (total == 0) continue;
    ShareCell cell;
    cell.n_tweets = total;
    cell.positive = static_cast<double>(pooled[0]) / static_cast<double>(total);
    cell.negative = static_cast<double>(pooled[1]) / static_cast<double>(total);
    cell.neutral = static_cast<double>(pooled[2]) / static_cast<double>(total);
    report.per_axis[s] = cell;
    for (double& v : mean_of_types) v /= static_cast<double>(populated_types);
    report.per_axis_mean_of_types[s] = mean_of_types;
  }
  return report;
}

}  // namespace persona::sentiment
