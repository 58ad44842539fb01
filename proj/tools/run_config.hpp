#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "persona/embed.hpp"

namespace persona::cli {

// Effective settings of one CLI invocation. Values come from defaults, then
// the --config file, then explicit flags (flags win). The resolved config is
// written next to every command's outputs so runs are reproducible.
struct RunConfig {
  std::string command;

  // paths
  std::string users;
  std::string tweets;
  std::string tagged;
  std::string out;
  std::string model_dir;
  std::string input;
  std::string stopwords;

  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  std::vector<std::string> formats = {"csv", "json"};

  // features / classifiers
  std::string feature = "tfidf";  // bow | tfidf | tfidf_ngram | tfidf_char
  std::string algorithm = "logistic_regression";
  std::vector<std::string> algorithms;  // benchmark rows; empty = 7 classical
  std::size_t max_terms = 1000;
  bool with_embedding = false;
  nlohmann::json hyperparams = nlohmann::json::object();  // {"algorithm": {...}}

  embed::TrainParams embedding;

  // report
  std::string which = "profile";
  std::size_t wordcloud_k = 30;
  bool balanced = true;  // sentiment shares balancing
  int reference_year = 2025;

  // generate
  int tweets_per_type = 50;
  int users_per_type = 2;
  int vocab_per_type = 30;
  int interactions_per_type = 10;
  int sentiment_per_class = 0;

  // predict
  bool proba = false;
  bool per_user = false;

  void apply_file(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;

  bool wants(std::string_view format) const;

  // Creates the output directory, then writes config.json (deterministic)
  // and run_meta.json (timestamped sidecar).
  void write_effective(const std::filesystem::path& out_dir) const;
};

}  // namespace persona::cli
