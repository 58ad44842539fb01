#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "persona/corpus.hpp"
#include "persona/embed.hpp"
#include "persona/vectorize.hpp"

namespace persona::models {

enum class Algorithm : std::uint8_t {
  NaiveBayes,
  LogisticRegression,
  LinearSvm,
  Knn,
  DecisionTree,
  RandomForest,
  GradientBoosting,
  Mlp
};

std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

struct ClassifierSpec {
  Algorithm algorithm = Algorithm::NaiveBayes;
  nlohmann::json hyperparams = nlohmann::json::object();
  std::uint64_t seed = 42;
};

// Known keys and defaults for an algorithm; training merges user values over
// these and rejects unknown keys.
nlohmann::json default_hyperparams(Algorithm a);
nlohmann::json resolve_hyperparams(Algorithm a, const nlohmann::json& user);

struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<int> y;                // indexes into labels
  std::vector<std::string> labels;   // class id -> name

  std::size_t size() const { return x.size(); }
  std::size_t dim() const { return x.empty() ? 0 : x.front().size(); }
};

// Trained predictor internals; one implementation per algorithm.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t n_classes() const = 0;
  // Raw decision scores; prediction = argmax (smallest index on ties).
  virtual std::vector<double> class_scores(std::span<const double> x) const = 0;
  // Distribution over classes, sums to 1.
  virtual std::vector<double> predict_proba(std::span<const double> x) const = 0;
  // False for linear_svm / knn / decision_tree, whose distributions are
  // normalized scores or vote fractions rather than calibrated posteriors.
  virtual bool proba_calibrated() const = 0;
  virtual nlohmann::json params_json() const = 0;
};

struct ClassifierModel {
  ClassifierSpec spec;
  std::vector<std::string> labels;
  std::shared_ptr<const Classifier> impl;
  nlohmann::json meta = nlohmann::json::object();  // input_dim, feature fingerprint, ...

  std::size_t input_dim() const { return impl->input_dim(); }
  int predict_id(std::span<const double> x) const;
  std::string predict(std::span<const double> x) const;
  std::vector<double> class_scores(std::span<const double> x) const;
  std::vector<double> predict_proba(std::span<const double> x) const;
  bool proba_calibrated() const { return impl->proba_calibrated(); }
};

// Throws DimensionMismatch (ragged rows), SingleClass, NegativeFeature
// (naive_bayes on negative inputs).
ClassifierModel train_classifier(const ClassifierSpec& spec, const Dataset& train);

struct EvalReport {
  double accuracy = 0.0;
  double f1_macro = 0.0;
  std::vector<double> per_class_f1;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<std::string> labels;
  std::size_t total = 0;
  std::string f1_averaging = "macro";

  nlohmann::json to_json() const;
};

EvalReport evaluate(const ClassifierModel& model, const std::vector<std::vector<double>>& x,
                    const std::vector<int>& y);

// Accuracy/macro-F1/confusion from already-computed predictions.
EvalReport evaluate_predictions(const std::vector<int>& truth, const std::vector<int>& predicted,
                                const std::vector<std::string>& labels);

// Most frequent label; ties go to the lexicographically smallest.
std::string majority_label(const std::vector<std::string>& labels);

// --- feedforward networks ----------------------------------------------------

struct MlpArchitecture {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden;
  std::size_t output_dim = 0;
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t epochs = 32;
  std::size_t batch_size = 32;
};

// Max relative error between backprop gradients and central finite
// differences (step 1e-5, extended-precision forward) over all parameters
// of a freshly He-initialized network.
double gradient_check(const MlpArchitecture& arch, const std::vector<std::vector<double>>& x,
                      const std::vector<int>& y, std::uint64_t seed, double step = 1e-5);

// --- persistence ---------------------------------------------------------------

// Versioned binary container: magic, version, payload length, CRC32, CBOR
// payload. Wrong magic / bad checksum -> CorruptModel; newer version ->
// VersionMismatch.
void save_model(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel load_model(const std::filesystem::path& path);

std::uint32_t crc32(std::string_view bytes);

// --- benchmark -----------------------------------------------------------------

struct FeatureConfig {
  std::string name = "bow";
  enum class Kind : std::uint8_t { Bow, Tfidf } kind = Kind::Bow;
  vectorize::Unit unit = vectorize::Unit::Word;
  int n_lo = 1;
  int n_hi = 1;
  std::size_t max_terms = 1000;
  bool with_embedding = false;
  embed::TrainParams embedding;
};

// The four feature columns of the classical benchmark: bow, tfidf,
// tfidf_ngram (word 2-3), tfidf_char (char 2-5).
std::vector<FeatureConfig> standard_feature_configs(std::size_t max_terms = 1000);

FeatureConfig feature_config_by_name(std::string_view name, std::size_t max_terms = 1000);

struct BenchmarkCell {
  std::string algorithm;
  std::string feature;
  double accuracy = 0.0;
  double f1_macro = 0.0;
};

struct BenchmarkTable {
  std::vector<std::string> algorithms;  // row order
  std::vector<std::string> features;    // column order
  std::vector<BenchmarkCell> cells;     // row-major
  std::size_t best_cell = 0;            // argmax accuracy, first on ties
  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  std::size_t quota = 0;                // per-type count after balancing

  const BenchmarkCell& cell(std::size_t row, std::size_t col) const {
    return cells[row * features.size() + col];
  }
};

// Balance by type, stratified split, fit features on the train split only,
// then train/evaluate each (algorithm, feature) cell. Deterministic under
// (corpus, configs, seed).
BenchmarkTable run_benchmark(const std::vector<corpus::TweetRecord>& tweets,
                             const std::vector<FeatureConfig>& features,
                             const std::vector<ClassifierSpec>& specs, std::uint64_t seed,
                             double test_fraction = 0.2);

}  // namespace persona::models
