#include <algorithm>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models {

std::vector<FeatureConfig> standard_feature_configs(std::size_t max_terms) {
  return {feature_config_by_name("bow", max_terms), feature_config_by_name("tfidf", max_terms),
          feature_config_by_name("tfidf_ngram", max_terms),
          feature_config_by_name("tfidf_char", max_terms)};
}

FeatureConfig feature_config_by_name(std::string_view name, std::size_t max_terms) {
  FeatureConfig c;
  c.name = std::string(name);
  c.max_terms = max_terms;
  if (name == "bow") {
    c.kind = FeatureConfig::Kind::Bow;
  } else if (name == "tfidf") {
    c.kind = FeatureConfig::Kind::Tfidf;
  } else if (name == "tfidf_ngram") {
    c.kind = FeatureConfig::Kind::Tfidf;
    c.n_lo = 2;
    c.n_hi = 3;
  } else if (name == "tfidf_char") {
    c.kind = FeatureConfig::Kind::Tfidf;
    c.unit = vectorize::Unit::Char;
    c.n_lo = 2;
    c.n_hi = 5;
  } else {
    throw Error("unknown feature config: \"" + std::string(name) + "\"");
  }
  return c;
}

namespace {

struct CellData {
  std::vector<std::vector<double>> train_x, test_x;
};

CellData featurize(const FeatureConfig& config,
                   const std::vector<std::vector<std::string>>& train_terms,
                   const std::vector<std::vector<std::string>>& test_terms,
                   std::uint64_t seed) {
  CellData out;
  auto transform_all = [](auto&& fn, const std::vector<std::vector<std::string>>& docs) {
    std::vector<std::vector<double>> rows;
    rows.reserve(docs.size());
    for (const auto& doc : docs) rows.push_back(fn(doc));
    return rows;
  };

  std::vector<std::vector<double>> train_base, test_base;
  if (config.kind == FeatureConfig::Kind::Bow) {
    const auto vocab =
        vectorize::build_vocab(train_terms, config.unit, config.n_lo, config.n_hi, config.max_terms);
    auto fn = [&](const std::vector<std::string>& doc) {
      return vectorize::bow_vector(vocab, doc).values;
    };
    train_base = transform_all(fn, train_terms);
    test_base = transform_all(fn, test_terms);
  } else {
    const auto model =
        vectorize::tfidf_fit(train_terms, config.unit, config.n_lo, config.n_hi, config.max_terms);
    auto fn = [&](const std::vector<std::string>& doc) {
      return vectorize::tfidf_transform(model, doc).values;
    };
    train_base = transform_all(fn, train_terms);
    test_base = transform_all(fn, test_terms);
  }

  if (!config.with_embedding) {
    out.train_x = std::move(train_base);
    out.test_x = std::move(test_base);
    return out;
  }

  const auto embedding = embed::train_word2vec(train_terms, config.embedding, seed);
  auto with_embedding = [&](std::vector<std::vector<double>>& base,
                            const std::vector<std::vector<std::string>>& docs) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const auto doc_vec = embed::doc_embedding(embedding, docs[i]);
      base[i].insert(base[i].end(), doc_vec.begin(), doc_vec.end());
    }
  };
  with_embedding(train_base, train_terms);
  with_embedding(test_base, test_terms);
  out.train_x = std::move(train_base);
  out.test_x = std::move(test_base);
  return out;
}

}  // namespace

BenchmarkTable run_benchmark(const std::vector<corpus::TweetRecord>& tweets,
                             const std::vector<FeatureConfig>& features,
                             const std::vector<ClassifierSpec>& specs, std::uint64_t seed,
                             double test_fraction) {
  if (features.empty() || specs.empty()) throw EmptyInput("benchmark needs features and specs");

  const auto balanced = corpus::balance_by_type(tweets, seed);
  const auto flattened = balanced.flatten();
  auto [train_tweets, test_tweets] = corpus::split_train_test(flattened, test_fraction, seed);

  auto to_terms = [](const std::vector<corpus::TweetRecord>& records) {
    std::vector<std::vector<std::string>> terms;
    terms.reserve(records.size());
    for (const auto& r : records) terms.push_back(vectorize::pipeline_terms(r.text));
    return terms;
  };
  const auto train_terms = to_terms(train_tweets);
  const auto test_terms = to_terms(test_tweets);

  std::vector<std::string> label_names;
  for (const auto& label : PersonalityLabel::all()) label_names.emplace_back(label.code());
  std::vector<int> train_y, test_y;
  for (const auto& t : train_tweets) train_y.push_back(t.label.index());
  for (const auto& t : test_tweets) test_y.push_back(t.label.index());

  BenchmarkTable table;
  table.seed = seed;
  table.test_fraction = test_fraction;
  table.quota = balanced.quota;
  for (const auto& s : specs) table.algorithms.emplace_back(algorithm_name(s.algorithm));
  for (const auto& f : features) table.features.push_back(f.name);
  table.cells.resize(specs.size() * features.size());

  for (std::size_t col = 0; col < features.size(); ++col) {
    CellData data = featurize(features[col], train_terms, test_terms, seed);
    Dataset train;
    train.x = data.train_x;
    train.y = train_y;
    train.labels = label_names;
    for (std::size_t row = 0; row < specs.size(); ++row) {
      const ClassifierModel model = train_classifier(specs[row], train);
      const EvalReport report = evaluate(model, data.test_x, test_y);
      table.cells[row * features.size() + col] =
          BenchmarkCell{table.algorithms[row], table.features[col], report.accuracy,
                        report.f1_macro};
    }
  }

  table.best_cell = 0;
  for (std::size_t i = 1; i < table.cells.size(); ++i)
    if (table.cells[i].accuracy > table.cells[table.best_cell].accuracy) table.best_cell = i;
  return table;
}

}  // namespace persona::models
