#include <set>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models {

using detail::json;

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::NaiveBayes: return "naive_bayes";
    case Algorithm::LogisticRegression: return "logistic_regression";
    case Algorithm::LinearSvm: return "linear_svm";
    case Algorithm::Knn: return "knn";
    case Algorithm::DecisionTree: return "decision_tree";
    case Algorithm::RandomForest: return "random_forest";
    case Algorithm::GradientBoosting: return "gradient_boosting";
    case Algorithm::Mlp: return "mlp";
  }
  return "";
}

Algorithm parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::NaiveBayes, Algorithm::LogisticRegression, Algorithm::LinearSvm,
                 Algorithm::Knn, Algorithm::DecisionTree, Algorithm::RandomForest,
                 Algorithm::GradientBoosting, Algorithm::Mlp})
    if (algorithm_name(a) == s) return a;
  throw Error("unknown algorithm: \"" + std::string(s) + "\"");
}

nlohmann::json default_hyperparams(Algorithm a) {
  switch (a) {
    case Algorithm::NaiveBayes:
      return {{"alpha", 1.0}};
    case Algorithm::LogisticRegression:
      return {{"lr", 0.05}, {"epochs", 200}, {"batch_size", 32}, {"l2", 0.0}};
    case Algorithm::LinearSvm:
      return {{"lambda", 1e-4}, {"epochs", 10}};
    case Algorithm::Knn:
      return {{"k", 5}};
    case Algorithm::DecisionTree:
      return {{"max_depth", 0}, {"min_leaf", 1}};
    case Algorithm::RandomForest:
      return {{"n_trees", 100}, {"max_depth", 0}, {"min_leaf", 1},
              {"max_features", "sqrt"}, {"bootstrap", true}};
    case Algorithm::GradientBoosting:
      return {{"rounds", 100}, {"depth", 3}, {"shrinkage", 0.1}, {"min_leaf", 1}};
    case Algorithm::Mlp:
      return {{"hidden", json::array({100})}, {"lr", 0.001}, {"beta1", 0.9}, {"beta2", 0.999},
              {"epsilon", 1e-8}, {"epochs", 32}, {"batch_size", 32}};
  }
  return json::object();
}

nlohmann::json resolve_hyperparams(Algorithm a, const nlohmann::json& user) {
  json resolved = default_hyperparams(a);
  if (user.is_null()) return resolved;
  if (!user.is_object()) throw Error("hyperparams must be a JSON object");
  for (const auto& [key, value] : user.items()) {
    if (!resolved.contains(key))
      throw Error("unknown hyperparameter \"" + key + "\" for " +
                  std::string(algorithm_name(a)));
    resolved[key] = value;
  }
  return resolved;
}

namespace detail {

void check_dataset(const Dataset& d) {
  if (d.x.empty()) throw Error("training set is empty");
  if (d.x.size() != d.y.size()) throw DimensionMismatch("feature/label count mismatch");
  const std::size_t dim = d.x.front().size();
  for (const auto& row : d.x)
    if (row.size() != dim)
      throw DimensionMismatch("feature vectors have inconsistent dimensions");
  std::set<int> distinct(d.y.begin(), d.y.end());
  if (distinct.size() < 2) throw SingleClass();
  for (int label : d.y)
    if (label < 0 || static_cast<std::size_t>(label) >= d.labels.size())
      throw Error("label id out of range");
}

}  // namespace detail

int ClassifierModel::predict_id(std::span<const double> x) const {
  if (x.size() != impl->input_dim())
    throw DimensionMismatch("expected " + std::to_string(impl->input_dim()) +
                            " features, got " + std::to_string(x.size()));
  return static_cast<int>(detail::argmax_smallest(impl->class_scores(x)));
}

std::string ClassifierModel::predict(std::span<const double> x) const {
  return labels[static_cast<std::size_t>(predict_id(x))];
}

std::vector<double> ClassifierModel::class_scores(std::span<const double> x) const {
  if (x.size() != impl->input_dim())
    throw DimensionMismatch("expected " + std::to_string(impl->input_dim()) +
                            " features, got " + std::to_string(x.size()));
  return impl->class_scores(x);
}

std::vector<double> ClassifierModel::predict_proba(std::span<const double> x) const {
  if (x.size() != impl->input_dim())
    throw DimensionMismatch("expected " + std::to_string(impl->input_dim()) +
                            " features, got " + std::to_string(x.size()));
  return impl->predict_proba(x);
}

ClassifierModel train_classifier(const ClassifierSpec& spec, const Dataset& train) {
  detail::check_dataset(train);
  const json hp = resolve_hyperparams(spec.algorithm, spec.hyperparams);

  ClassifierModel model;
  model.spec = spec;
  model.spec.hyperparams = hp;
  model.labels = train.labels;
  model.meta["input_dim"] = train.dim();

  switch (spec.algorithm) {
    case Algorithm::NaiveBayes:
      model.impl = detail::train_naive_bayes(hp, train, spec.seed);
      break;
    case Algorithm::LogisticRegression:
      model.impl = detail::train_logistic_regression(hp, train, spec.seed);
      break;
    case Algorithm::LinearSvm:
      model.impl = detail::train_linear_svm(hp, train, spec.seed);
      break;
    case Algorithm::Knn:
      model.impl = detail::train_knn(hp, train, spec.seed);
      break;
    case Algorithm::DecisionTree:
      model.impl = detail::train_decision_tree(hp, train, spec.seed);
      break;
    case Algorithm::RandomForest:
      model.impl = detail::train_random_forest(hp, train, spec.seed);
      break;
    case Algorithm::GradientBoosting:
      model.impl = detail::train_gradient_boosting(hp, train, spec.seed);
      break;
    case Algorithm::Mlp:
      model.impl = detail::train_mlp(hp, train, spec.seed);
      break;
  }
  return model;
}

EvalReport evaluate_predictions(const std::vector<int>& truth, const std::vector<int>& predicted,
                                const std::vector<std::string>& labels) {
  if (truth.empty()) throw EmptyTestSet();
  if (truth.size() != predicted.size()) throw DimensionMismatch("prediction count mismatch");
  const std::size_t n_classes = labels.size();

  EvalReport report;
  report.labels = labels;
  report.total = truth.size();
  report.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    ++report.confusion[t][p];
    if (t == p) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(report.total);

  report.per_class_f1.assign(n_classes, 0.0);
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::size_t tp = report.confusion[c][c];
    std::size_t fn = 0, fp = 0;
    for (std::size_t j = 0; j < n_classes; ++j) {
      if (j == c) continue;
      fn += report.confusion[c][j];
      fp += report.confusion[j][c];
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    // Zero support or zero P+R contributes 0.
    report.per_class_f1[c] = denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
    f1_sum += report.per_class_f1[c];
  }
  report.f1_macro = f1_sum / static_cast<double>(n_classes);
  return report;
}

EvalReport evaluate(const ClassifierModel& model, const std::vector<std::vector<double>>& x,
                    const std::vector<int>& y) {
  if (x.empty()) throw EmptyTestSet();
  std::vector<int> predicted;
  predicted.reserve(x.size());
  for (const auto& row : x) predicted.push_back(model.predict_id(row));
  return evaluate_predictions(y, predicted, model.labels);
}

nlohmann::json EvalReport::to_json() const {
  json per_class = json::object();
  for (std::size_t c = 0; c < labels.size(); ++c) per_class[labels[c]] = per_class_f1[c];
  return json{{"accuracy", accuracy},
              {"f1_macro", f1_macro},
              {"f1_averaging", f1_averaging},
              {"per_class_f1", per_class},
              {"labels", labels},
              {"confusion", confusion},
              {"total", total}};
}

std::string majority_label(const std::vector<std::string>& labels) {
  if (labels.empty()) throw EmptyInput("majority_label needs at least one label");
  std::map<std::string, std::size_t> counts;
  for (const auto& l : labels) ++counts[l];
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [label, count] : counts) {
    if (count > best_count) {
      best = &label;
      best_count = count;
    }
  }
  return *best;
}

}  // namespace persona::models
