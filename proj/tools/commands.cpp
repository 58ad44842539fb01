#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "persona/analytics.hpp"
#include "persona/corpus.hpp"
#include "persona/errors.hpp"
#include "persona/models.hpp"
#include "persona/reports.hpp"
#include "persona/sentiment.hpp"

namespace persona::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(message);
}

std::vector<corpus::UserRecord> load_users_checked(const RunConfig& cfg) {
  require(!cfg.users.empty(), "--users is required");
  return corpus::load_users(cfg.users);
}

std::vector<corpus::TweetRecord> load_tweets_checked(const RunConfig& cfg,
                                                     const std::vector<corpus::UserRecord>& users) {
  require(!cfg.tweets.empty(), "--tweets is required");
  return corpus::load_tweets(cfg.tweets, users);
}

models::ClassifierSpec spec_for(const std::string& name, const RunConfig& cfg) {
  models::ClassifierSpec spec;
  spec.seed = cfg.seed;
  std::string algo = name;
  if (name == "mlp_shallow") {
    algo = "mlp";
    spec.hyperparams["hidden"] = json::array({100});
  } else if (name == "mlp_deep") {
    algo = "mlp";
    spec.hyperparams["hidden"] = json::array({250, 250, 250});
  }
  spec.algorithm = models::parse_algorithm(algo);
  if (cfg.hyperparams.contains(name))
    for (const auto& [key, value] : cfg.hyperparams.at(name).items())
      spec.hyperparams[key] = value;
  return spec;
}

models::FeatureConfig feature_for(const RunConfig& cfg, const std::string& name) {
  auto f = models::feature_config_by_name(name, cfg.max_terms);
  f.with_embedding = cfg.with_embedding;
  f.embedding = cfg.embedding;
  return f;
}

std::vector<std::string> read_stopwords(const RunConfig& cfg) {
  if (cfg.stopwords.empty()) return analytics::default_stop_tokens();
  std::ifstream in(cfg.stopwords);
  if (!in) throw IoError("cannot open stopword file " + cfg.stopwords);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr const char* kClassicalAlgorithms[] = {
    "naive_bayes", "logistic_regression", "linear_svm",        "knn",
    "decision_tree", "random_forest",     "gradient_boosting"};

void write_stat_outputs(const RunConfig& cfg, const fs::path& out_dir, const std::string& stem,
                        const std::vector<analytics::StatReport>& stats) {
  if (cfg.wants("csv")) {
    reports::write_text_file(out_dir / (stem + ".csv"), reports::stat_reports_csv(stats));
    reports::write_text_file(out_dir / (stem + "_axis_comparison.csv"),
                             reports::axis_comparisons_csv(stats));
  }
  if (cfg.wants("json"))
    reports::write_text_file(out_dir / (stem + ".json"),
                             reports::stat_reports_json(stats).dump(2) + "\n");
  if (cfg.wants("svg")) {
    for (const auto& report : stats) {
      std::vector<std::pair<std::string, double>> bars;
      for (const auto& label : PersonalityLabel::all())
        if (report.per_type[label.index()])
          bars.emplace_back(std::string(label.code()), report.per_type[label.index()]->mean);
      reports::write_svg_bars(out_dir / (stem + "_" + report.metric + ".svg"),
                              report.metric + " (mean per type)", bars);
    }
  }
}

}  // namespace

int cmd_validate(const RunConfig& cfg) {
  require(!cfg.users.empty(), "--users is required");
  std::vector<corpus::ValidationIssue> issues = corpus::validate_users_file(cfg.users);

  std::vector<corpus::UserRecord> users;
  if (issues.empty()) {
    users = corpus::load_users(cfg.users);
  }
  if (!cfg.tweets.empty()) {
    if (issues.empty()) {
      auto tweet_issues = corpus::validate_tweets_file(cfg.tweets, users);
      issues.insert(issues.end(), tweet_issues.begin(), tweet_issues.end());
    } else {
      std::cerr << "skipping tweet validation: user file has errors\n";
    }
  }
  if (!cfg.tagged.empty() && issues.empty()) {
    try {
      sentiment::load_tagged(cfg.tagged);
    } catch (const ParseError& e) {
      issues.push_back({cfg.tagged, e.line(), e.what()});
    }
  }

  for (const auto& issue : issues)
    std::cerr << issue.file.string() << ":" << issue.line << ": " << issue.message << "\n";
  if (issues.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  std::cerr << issues.size() << " issue(s) found\n";
  return 1;
}

int cmd_generate(const RunConfig& cfg) {
  require(!cfg.out.empty(), "--out is required");
  const fs::path out_dir(cfg.out);
  cfg.write_effective(out_dir);

  auto spec = corpus::disjoint_vocabulary_spec(cfg.tweets_per_type, cfg.vocab_per_type,
                                               cfg.users_per_type, cfg.interactions_per_type);
  if (cfg.sentiment_per_class > 0) {
    // Mix sentiment cue tokens into tweets, extraverts leaning positive,
    // so the shares report has a recoverable planted effect.
    for (auto& [code, profile] : spec.types) {
      const bool extravert = PersonalityLabel::parse(code).has_side(AxisSide::E);
      profile.sentiment_mix = extravert ? std::array<double, 3>{0.40, 0.15, 0.25}
                                        : std::array<double, 3>{0.15, 0.40, 0.25};
    }
  }
  auto [users, tweets] = corpus::generate_synthetic(spec, cfg.seed);
  corpus::write_users_jsonl(out_dir / "users.jsonl", users);
  corpus::write_tweets_jsonl(out_dir / "tweets.jsonl", tweets);
  std::cout << "wrote " << users.size() << " users, " << tweets.size() << " tweets\n";

  if (cfg.sentiment_per_class > 0) {
    const auto tagged = sentiment::generate_demo_corpus(cfg.sentiment_per_class, cfg.seed);
    sentiment::write_tagged_jsonl(out_dir / "sentiment.jsonl", tagged);
    std::cout << "wrote " << tagged.size() << " tagged sentiment lines\n";
  }
  return 0;
}

int cmd_benchmark(const RunConfig& cfg) {
  require(!cfg.out.empty(), "--out is required");
  const auto users = load_users_checked(cfg);
  const auto tweets = load_tweets_checked(cfg, users);

  std::vector<std::string> algorithm_names = cfg.algorithms;
  if (algorithm_names.empty())
    algorithm_names.assign(std::begin(kClassicalAlgorithms), std::end(kClassicalAlgorithms));
  std::vector<models::ClassifierSpec> specs;
  for (const auto& name : algorithm_names) specs.push_back(spec_for(name, cfg));

  std::vector<models::FeatureConfig> features;
  for (const auto& name : {"bow", "tfidf", "tfidf_ngram", "tfidf_char"})
    features.push_back(feature_for(cfg, name));

  const auto table = models::run_benchmark(tweets, features, specs, cfg.seed, cfg.test_fraction);
  // Rows keep the requested names (the mlp presets differ only in hyperparams).
  auto named_table = table;
  named_table.algorithms = algorithm_names;
  for (std::size_t row = 0; row < algorithm_names.size(); ++row)
    for (std::size_t col = 0; col < named_table.features.size(); ++col)
      named_table.cells[row * named_table.features.size() + col].algorithm =
          algorithm_names[row];

  const fs::path out_dir(cfg.out);
  cfg.write_effective(out_dir);
  if (cfg.wants("csv"))
    reports::write_text_file(out_dir / "benchmark.csv", reports::benchmark_csv(named_table));
  if (cfg.wants("json"))
    reports::write_text_file(out_dir / "benchmark.json",
                             reports::benchmark_json(named_table).dump(2) + "\n");
  if (cfg.wants("svg")) {
    for (std::size_t col = 0; col < named_table.features.size(); ++col) {
      std::vector<std::pair<std::string, double>> bars;
      for (std::size_t row = 0; row < named_table.algorithms.size(); ++row)
        bars.emplace_back(named_table.algorithms[row], named_table.cell(row, col).accuracy);
      reports::write_svg_bars(out_dir / ("benchmark_" + named_table.features[col] + ".svg"),
                              "accuracy / " + named_table.features[col], bars);
    }
  }
  const auto& best = named_table.cells[named_table.best_cell];
  std::cout << "best: " << best.algorithm << " + " << best.feature << " accuracy "
            << best.accuracy << "\n";
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  require(!cfg.out.empty(), "--out is required");
  const auto users = load_users_checked(cfg);
  const auto tweets = load_tweets_checked(cfg, users);

  const auto balanced = corpus::balance_by_type(tweets, cfg.seed);
  auto [train_tweets, test_tweets] =
      corpus::split_train_test(balanced.flatten(), cfg.test_fraction, cfg.seed);

  auto to_terms = [](const std::vector<corpus::TweetRecord>& records) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(records.size());
    for (const auto& r : records) docs.push_back(vectorize::pipeline_terms(r.text));
    return docs;
  };
  const auto train_terms = to_terms(train_tweets);
  const auto test_terms = to_terms(test_tweets);

  const fs::path out_dir(cfg.out);
  cfg.write_effective(out_dir);

  const auto feature = feature_for(cfg, cfg.feature);
  vectorize::TfidfModel tfidf;
  vectorize::Vocabulary vocab;
  if (feature.kind == models::FeatureConfig::Kind::Bow) {
    vocab = vectorize::build_vocab(train_terms, feature.unit, feature.n_lo, feature.n_hi,
                                   feature.max_terms);
    vectorize::save_vocabulary(vocab, out_dir / "vectorizer.json");
  } else {
    tfidf = vectorize::tfidf_fit(train_terms, feature.unit, feature.n_lo, feature.n_hi,
                                 feature.max_terms);
    vectorize::save_tfidf(tfidf, out_dir / "vectorizer.json");
  }

  std::optional<embed::EmbeddingModel> embedding;
  if (feature.with_embedding) {
    embedding = embed::train_word2vec(train_terms, feature.embedding, cfg.seed);
    embed::save_embedding(*embedding, out_dir / "embedding.bin");
  }

  auto featurize = [&](const std::vector<std::string>& terms) {
    std::vector<double> row = feature.kind == models::FeatureConfig::Kind::Bow
                                  ? vectorize::bow_vector(vocab, terms).values
                                  : vectorize::tfidf_transform(tfidf, terms).values;
    if (embedding) {
      const auto doc = embed::doc_embedding(*embedding, terms);
      row.insert(row.end(), doc.begin(), doc.end());
    }
    return row;
  };

  models::Dataset train;
  for (const auto& label : PersonalityLabel::all()) train.labels.emplace_back(label.code());
  for (std::size_t i = 0; i < train_terms.size(); ++i) {
    train.x.push_back(featurize(train_terms[i]));
    train.y.push_back(train_tweets[i].label.index());
  }

  auto model = models::train_classifier(spec_for(cfg.algorithm, cfg), train);
  model.meta["feature"] = cfg.feature;
  model.meta["feature_kind"] =
      feature.kind == models::FeatureConfig::Kind::Bow ? "bow" : "tfidf";
  model.meta["with_embedding"] = feature.with_embedding;
  model.meta["vectorizer_crc"] =
      models::crc32(read_file_bytes(out_dir / "vectorizer.json"));
  if (embedding)
    model.meta["embedding_crc"] = models::crc32(read_file_bytes(out_dir / "embedding.bin"));
  models::save_model(model, out_dir / "model.bin");

  std::vector<std::vector<double>> test_x;
  std::vector<int> test_y;
  for (std::size_t i = 0; i < test_terms.size(); ++i) {
    test_x.push_back(featurize(test_terms[i]));
    test_y.push_back(test_tweets[i].label.index());
  }
  const auto report = models::evaluate(model, test_x, test_y);
  reports::write_text_file(out_dir / "metrics.json", report.to_json().dump(2) + "\n");
  std::cout << "test accuracy " << report.accuracy << ", macro F1 " << report.f1_macro << "\n";
  return 0;
}

int cmd_predict(const RunConfig& cfg) {
  require(!cfg.model_dir.empty(), "--model-dir is required");
  require(!cfg.input.empty(), "--input is required");
  require(!cfg.out.empty(), "--out is required");
  const fs::path model_dir(cfg.model_dir);

  auto model = models::load_model(model_dir / "model.bin");
  const std::string vec_bytes = read_file_bytes(model_dir / "vectorizer.json");
  if (model.meta.contains("vectorizer_crc") &&
      model.meta.at("vectorizer_crc").get<std::uint32_t>() != models::crc32(vec_bytes))
    throw VersionMismatch("vectorizer.json does not match the one this model was trained with");

  const std::string kind = model.meta.value("feature_kind", "tfidf");
  vectorize::Vocabulary vocab;
  vectorize::TfidfModel tfidf;
  if (kind == "bow")
    vocab = vectorize::load_vocabulary(model_dir / "vectorizer.json");
  else
    tfidf = vectorize::tfidf_from_json(vec_bytes);

  std::optional<embed::EmbeddingModel> embedding;
  if (model.meta.value("with_embedding", false)) {
    embedding = embed::load_embedding(model_dir / "embedding.bin");
    if (model.meta.contains("embedding_crc") &&
        model.meta.at("embedding_crc").get<std::uint32_t>() !=
            models::crc32(read_file_bytes(model_dir / "embedding.bin")))
      throw VersionMismatch("embedding.bin does not match the one this model was trained with");
  }

  auto featurize = [&](const std::string& text) {
    const auto terms = vectorize::pipeline_terms(text);
    std::vector<double> row = kind == "bow" ? vectorize::bow_vector(vocab, terms).values
                                            : vectorize::tfidf_transform(tfidf, terms).values;
    if (embedding) {
      const auto doc = embed::doc_embedding(*embedding, terms);
      row.insert(row.end(), doc.begin(), doc.end());
    }
    return row;
  };

  // Input: plain text (one per line) or JSONL objects with "text" and an
  // optional "user_id".
  std::ifstream in(cfg.input);
  if (!in) throw IoError("cannot open " + cfg.input);
  std::vector<std::string> texts, user_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '{') {
      const json obj = json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.contains("text"))
        throw ParseError(line_no, "JSONL input lines need a \"text\" field");
      texts.push_back(obj.at("text").get<std::string>());
      user_ids.push_back(obj.value("user_id", ""));
    } else {
      texts.push_back(line);
      user_ids.emplace_back();
    }
  }

  const fs::path out_dir(cfg.out);
  cfg.write_effective(out_dir);

  std::ostringstream csv;
  csv << "label";
  if (cfg.proba)
    for (const auto& l : model.labels) csv << ",p_" << l;
  csv << '\n';
  std::vector<std::string> predicted;
  for (const auto& text : texts) {
    const auto row = featurize(text);
    const std::string label = model.predict(row);
    predicted.push_back(label);
    csv << label;
    if (cfg.proba) {
      std::ostringstream num;
      num.precision(12);
      for (double p : model.predict_proba(row)) {
        num.str("");
        num << p;
        csv << ',' << num.str();
      }
    }
    csv << '\n';
  }
  reports::write_text_file(out_dir / "predictions.csv", csv.str());

  if (cfg.per_user) {
    std::map<std::string, std::vector<std::string>> by_user;
    for (std::size_t i = 0; i < texts.size(); ++i)
      if (!user_ids[i].empty()) by_user[user_ids[i]].push_back(predicted[i]);
    std::ostringstream agg;
    agg << "user_id,label,n_texts\n";
    for (const auto& [user, labels] : by_user)
      agg << user << ',' << models::majority_label(labels) << ',' << labels.size() << '\n';
    reports::write_text_file(out_dir / "user_majority.csv", agg.str());
  }
  std::cout << "predicted " << texts.size() << " input(s)\n";
  return 0;
}

int cmd_embed_train(const RunConfig& cfg) {
  require(!cfg.out.empty(), "--out is required");
  const auto users = load_users_checked(cfg);
  const auto tweets = load_tweets_checked(cfg, users);

  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(tweets.size());
  for (const auto& t : tweets) sentences.push_back(vectorize::pipeline_terms(t.text));

  const auto model = embed::train_word2vec(sentences, cfg.embedding, cfg.seed);
  const fs::path out_dir(cfg.out);
  cfg.write_effective(out_dir);
  embed::save_embedding(model, out_dir / "embedding.bin");
  embed::export_embedding_text(model, out_dir / "embedding.txt");
  std::cout << "trained " << model.vocab_size() << " vectors of dim " << model.dim() << "\n";
  return 0;
}

int cmd_sentiment_train(const RunConfig& cfg) {
  require(!cfg.tagged.empty(), "--tagged is required");
  require(!cfg.out.empty(), "--out is required");
  const auto corpus_rows = sentiment::load_tagged(cfg.tagged);
  const auto model = sentiment::train_sentiment(corpus_rows, cfg.seed);

  const fs::path out_dir(cfg.out);
  cfg.write_effective(out_dir);
  sentiment::save_sentiment(model, out_dir);

  std::size_t correct = 0;
  for (const auto& row : corpus_rows)
    if (sentiment::classify_sentiment(model, row.text).label == row.label) ++correct;
  ordered_json metrics;
  metrics["train_accuracy"] =
      static_cast<double>(correct) / static_cast<double>(corpus_rows.size());
  metrics["n_train"] = corpus_rows.size();
  reports::write_text_file(out_dir / "metrics.json", metrics.dump(2) + "\n");
  std::cout << "train accuracy " << metrics["train_accuracy"] << "\n";
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  require(!cfg.out.empty(), "--out is required");
  const fs::path out_dir(cfg.out);

  if (cfg.which == "profile" || cfg.which == "bio") {
    const auto users = load_users_checked(cfg);
    cfg.write_effective(out_dir);
    std::vector<analytics::StatReport> stats;
    if (cfg.which == "profile") {
      for (auto metric : {analytics::ProfileMetric::Followers, analytics::ProfileMetric::Friends,
                          analytics::ProfileMetric::Likes, analytics::ProfileMetric::Statuses,
                          analytics::ProfileMetric::Media, analytics::ProfileMetric::VerifiedRate})
        stats.push_back(analytics::profile_stats_by_type(users, metric));
      for (auto field : {analytics::RevealField::Gender, analytics::RevealField::Dob,
                         analytics::RevealField::Location})
        stats.push_back(analytics::reveal_rates(users, field));
      const auto age = analytics::age_stats(users, cfg.reference_year);
      bool any_age = false;
      for (const auto& cell : age.per_type) any_age |= cell.has_value();
      if (any_age) stats.push_back(age);

      const auto zodiac = analytics::zodiac_distribution(users);
      std::ostringstream zcsv;
      zcsv << "personality,sign,count\n";
      ordered_json zjson = ordered_json::object();
      for (const auto& [label, signs] : zodiac) {
        ordered_json per_sign = ordered_json::object();
        for (const auto& [sign, count] : signs) {
          zcsv << label.code() << ',' << corpus::zodiac_name(sign) << ',' << count << '\n';
          per_sign[std::string(corpus::zodiac_name(sign))] = count;
        }
        zjson[std::string(label.code())] = std::move(per_sign);
      }
      if (cfg.wants("csv")) reports::write_text_file(out_dir / "zodiac.csv", zcsv.str());
      if (cfg.wants("json"))
        reports::write_text_file(out_dir / "zodiac.json", zjson.dump(2) + "\n");
    } else {
      for (auto field : {analytics::BioField::Emojis, analytics::BioField::Words,
                         analytics::BioField::Mentions, analytics::BioField::LatinWords})
        stats.push_back(analytics::bio_feature_aggregate(users, field));
    }
    write_stat_outputs(cfg, out_dir, cfg.which, stats);
    std::cout << "wrote " << stats.size() << " " << cfg.which << " metrics\n";
    return 0;
  }

  if (cfg.which == "levels") {
    const auto users = load_users_checked(cfg);
    const auto tweets = load_tweets_checked(cfg, users);
    cfg.write_effective(out_dir);
    std::vector<analytics::StatReport> stats;
    for (int level : {0, 1}) {
      bool has_level = false;
      for (const auto& t : tweets) has_level |= t.level() == level;
      if (!has_level) continue;
      for (auto field :
           {analytics::SurfaceField::Hashtags, analytics::SurfaceField::Emojis,
            analytics::SurfaceField::Mentions, analytics::SurfaceField::Words,
            analytics::SurfaceField::Punctuation, analytics::SurfaceField::TitleWords,
            analytics::SurfaceField::Characters, analytics::SurfaceField::WordDensity})
        stats.push_back(analytics::level_feature_aggregate(tweets, level, field));
    }
    write_stat_outputs(cfg, out_dir, "levels", stats);
    std::cout << "wrote " << stats.size() << " level metrics\n";
    return 0;
  }

  if (cfg.which == "wordcloud") {
    const auto users = load_users_checked(cfg);
    const auto tweets = load_tweets_checked(cfg, users);
    cfg.write_effective(out_dir);
    const auto stop = read_stopwords(cfg);
    std::vector<analytics::WordCloud> clouds;
    for (const auto& label : PersonalityLabel::all()) {
      try {
        clouds.push_back(analytics::word_cloud(tweets, label, cfg.wordcloud_k, stop));
      } catch (const MissingType&) {
        // types without tweets are simply absent from the cloud report
      }
    }
    if (cfg.wants("csv"))
      reports::write_text_file(out_dir / "wordcloud.csv", reports::word_clouds_csv(clouds));
    if (cfg.wants("json"))
      reports::write_text_file(out_dir / "wordcloud.json",
                               reports::word_clouds_json(clouds).dump(2) + "\n");
    std::cout << "wrote word clouds for " << clouds.size() << " types\n";
    return 0;
  }

  if (cfg.which == "sentiment") {
    require(!cfg.model_dir.empty(), "--model-dir (a sentiment-train output) is required");
    const auto users = load_users_checked(cfg);
    const auto tweets = load_tweets_checked(cfg, users);
    cfg.write_effective(out_dir);
    const auto model = sentiment::load_sentiment(cfg.model_dir);
    const auto shares = sentiment::sentiment_shares(model, tweets, cfg.balanced, cfg.seed);
    if (cfg.wants("csv"))
      reports::write_text_file(out_dir / "sentiment_shares.csv", reports::shares_csv(shares));
    if (cfg.wants("json"))
      reports::write_text_file(out_dir / "sentiment_shares.json",
                               reports::shares_json(shares).dump(2) + "\n");
    if (cfg.wants("svg")) {
      std::vector<std::pair<std::string, double>> bars;
      for (const auto& label : PersonalityLabel::all())
        if (shares.per_type[label.index()])
          bars.emplace_back(std::string(label.code()),
                            shares.per_type[label.index()]->positive);
      reports::write_svg_bars(out_dir / "sentiment_positive.svg", "positive share per type",
                              bars);
    }
    std::cout << "wrote sentiment shares\n";
    return 0;
  }

  throw Error("unknown report kind: \"" + cfg.which +
              "\" (expected profile|bio|levels|wordcloud|sentiment)");
}

}  // namespace persona::cli
