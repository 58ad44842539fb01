#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "models/classifiers.hpp"
#include "persona/errors.hpp"
#include "persona/models.hpp"
#include "persona/reports.hpp"
#include "persona/rng.hpp"

using namespace persona;
using namespace persona::models;

namespace {

Dataset two_gaussians(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.labels = {"neg", "pos"};
  for (std::size_t c = 0; c < 2; ++c) {
    const double center = c == 0 ? -2.0 : 2.0;
    for (std::size_t i = 0; i < per_class; ++i) {
      d.x.push_back({center + rng.normal() * 0.5, center + rng.normal() * 0.5});
      d.y.push_back(static_cast<int>(c));
    }
  }
  return d;
}

Dataset random_dataset(std::size_t n, std::size_t dim, std::size_t classes, std::uint64_t seed,
                       bool non_negative = false) {
  Rng rng(seed);
  Dataset d;
  for (std::size_t c = 0; c < classes; ++c) d.labels.push_back("c" + std::to_string(c));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(dim);
    for (double& v : row) v = non_negative ? rng.uniform01() * 3.0 : rng.normal();
    d.x.push_back(std::move(row));
    d.y.push_back(static_cast<int>(i % classes));
  }
  return d;
}

ClassifierSpec spec_of(Algorithm a, nlohmann::json hp = nlohmann::json::object(),
                       std::uint64_t seed = 42) {
  ClassifierSpec s;
  s.algorithm = a;
  s.hyperparams = std::move(hp);
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("naive bayes posterior matches the closed form") {
  // Two classes over vocabulary [x, y, z]: class A holds "x x y",
  // class B "y z". With Laplace alpha=1 the joint for doc "x x" is
  // A: 0.5 * 0.5^2 = 0.125, B: 0.5 * 0.2^2 = 0.02.
  Dataset d;
  d.labels = {"A", "B"};
  d.x = {{2, 1, 0}, {0, 1, 1}};
  d.y = {0, 1};
  const auto model = train_classifier(spec_of(Algorithm::NaiveBayes), d);

  const std::vector<double> doc = {2, 0, 0};
  CHECK(model.predict(doc) == "A");
  const auto proba = model.predict_proba(doc);
  CHECK(proba[0] == doctest::Approx(0.125 / 0.145).epsilon(1e-12));
  CHECK(proba[1] == doctest::Approx(0.02 / 0.145).epsilon(1e-12));
}

TEST_CASE("naive bayes posteriors equal count arithmetic on random corpora") {
  Rng rng(77);
  for (int round = 0; round < 20; ++round) {
    const std::size_t dim = 2 + rng.index(5);
    const std::size_t docs = 4 + rng.index(7);  // <= 10 documents
    Dataset d;
    d.labels = {"a", "b", "c"};
    for (std::size_t i = 0; i < docs; ++i) {
      std::vector<double> row(dim);
      for (double& v : row) v = static_cast<double>(rng.index(4));
      d.x.push_back(row);
      d.y.push_back(static_cast<int>(i % 3));
    }
    const auto model = train_classifier(spec_of(Algorithm::NaiveBayes), d);

    // Independent oracle: smoothed count ratios, joint product, normalize.
    std::vector<double> class_total(3, 0.0), prior(3, 0.0);
    std::vector<std::vector<double>> counts(3, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < docs; ++i) {
      prior[static_cast<std::size_t>(d.y[i])] += 1.0;
      for (std::size_t f = 0; f < dim; ++f) counts[static_cast<std::size_t>(d.y[i])][f] += d.x[i][f];
    }
    std::vector<double> query(dim);
    for (double& v : query) v = static_cast<double>(rng.index(3));
    std::vector<double> joint(3);
    for (std::size_t c = 0; c < 3; ++c) {
      double total = 0.0;
      for (double v : counts[c]) total += v;
      double p = prior[c] / static_cast<double>(docs);
      for (std::size_t f = 0; f < dim; ++f)
        p *= std::pow((counts[c][f] + 1.0) / (total + static_cast<double>(dim)), query[f]);
      joint[c] = p;
    }
    const double z = joint[0] + joint[1] + joint[2];
    const auto proba = model.predict_proba(query);
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(proba[c] == doctest::Approx(joint[c] / z).epsilon(1e-12));
  }
}

TEST_CASE("naive bayes rejects negative features") {
  Dataset d;
  d.labels = {"a", "b"};
  d.x = {{1.0, -0.5}, {0.0, 1.0}};
  d.y = {0, 1};
  CHECK_THROWS_AS(train_classifier(spec_of(Algorithm::NaiveBayes), d), NegativeFeature);
}

TEST_CASE("knn returns the stored label for an exact match and obeys tie rules") {
  Dataset d;
  d.labels = {"a", "b", "c"};
  d.x = {{0, 0}, {1, 1}, {2, 2}};
  d.y = {0, 1, 2};
  const auto model = train_classifier(spec_of(Algorithm::Knn, {{"k", 1}}), d);
  CHECK(model.predict(std::vector<double>{1, 1}) == "b");

  // k=2 with one vote each: smallest label index wins.
  const auto k2 = train_classifier(spec_of(Algorithm::Knn, {{"k", 2}}), d);
  CHECK(k2.predict(std::vector<double>{1.5, 1.5}) == "b");  // votes b and c -> b
}

TEST_CASE("knn equals an exhaustive oracle on random data") {
  Rng rng(1234);
  for (int round = 0; round < 10; ++round) {
    const std::size_t n = 20 + rng.index(180);
    const std::size_t dim = 1 + rng.index(20);
    const std::size_t k = 1 + rng.index(7);
    Dataset d = random_dataset(n, dim, 4, rng.next_u64());
    const auto model =
        train_classifier(spec_of(Algorithm::Knn, {{"k", k}}), d);
    for (int q = 0; q < 20; ++q) {
      std::vector<double> query(dim);
      for (double& v : query) v = rng.normal();
      // Oracle: full sort by (distance^2, index), then vote.
      std::vector<std::pair<double, std::size_t>> dist;
      for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (std::size_t f = 0; f < dim; ++f)
          d2 += (d.x[i][f] - query[f]) * (d.x[i][f] - query[f]);
        dist.push_back({d2, i});
      }
      std::sort(dist.begin(), dist.end());
      std::vector<int> votes(4, 0);
      for (std::size_t i = 0; i < std::min(k, n); ++i) ++votes[static_cast<std::size_t>(d.y[dist[i].second])];
      int want = 0;
      for (int c = 1; c < 4; ++c)
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(want)]) want = c;
      CHECK(model.predict_id(query) == want);
    }
  }
}

TEST_CASE("decision tree separates a one-threshold problem perfectly") {
  Dataset d;
  d.labels = {"lo", "hi"};
  for (int i = 0; i < 20; ++i) {
    d.x.push_back({static_cast<double>(i)});
    d.y.push_back(i < 10 ? 0 : 1);
  }
  const auto model = train_classifier(spec_of(Algorithm::DecisionTree), d);
  for (std::size_t i = 0; i < d.x.size(); ++i) CHECK(model.predict_id(d.x[i]) == d.y[i]);
}

TEST_CASE("random forest with one tree, all features and no bootstrap equals the tree") {
  const Dataset d = random_dataset(60, 6, 3, 99);
  const auto tree = train_classifier(spec_of(Algorithm::DecisionTree), d);
  const auto forest = train_classifier(
      spec_of(Algorithm::RandomForest,
              {{"n_trees", 1}, {"max_features", "all"}, {"bootstrap", false}}),
      d);
  Rng rng(7);
  for (int q = 0; q < 100; ++q) {
    std::vector<double> query(6);
    for (double& v : query) v = rng.normal();
    CHECK(tree.predict_id(query) == forest.predict_id(query));
  }
}

TEST_CASE("softmax regression reaches 100% train accuracy on separable data") {
  const Dataset d = two_gaussians(30, 5);
  const auto model = train_classifier(
      spec_of(Algorithm::LogisticRegression, {{"epochs", 500}}), d);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.x.size(); ++i)
    if (model.predict_id(d.x[i]) == d.y[i]) ++correct;
  CHECK(correct == d.x.size());
}

TEST_CASE("linear svm and gradient boosting learn separable data") {
  const Dataset d = two_gaussians(30, 6);
  for (auto algo : {Algorithm::LinearSvm, Algorithm::GradientBoosting}) {
    nlohmann::json hp = nlohmann::json::object();
    if (algo == Algorithm::GradientBoosting) hp = {{"rounds", 30}};
    const auto model = train_classifier(spec_of(algo, hp), d);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < d.x.size(); ++i)
      if (model.predict_id(d.x[i]) == d.y[i]) ++correct;
    CHECK(static_cast<double>(correct) / static_cast<double>(d.x.size()) >= 0.95);
  }
}

TEST_CASE("probability outputs are normalized and consistent with predict") {
  const Dataset d = random_dataset(40, 5, 3, 11, /*non_negative=*/true);
  Rng rng(6);
  for (auto algo : {Algorithm::NaiveBayes, Algorithm::LogisticRegression,
                    Algorithm::RandomForest, Algorithm::GradientBoosting, Algorithm::Mlp,
                    Algorithm::LinearSvm, Algorithm::Knn, Algorithm::DecisionTree}) {
    nlohmann::json hp = nlohmann::json::object();
    if (algo == Algorithm::RandomForest) hp["n_trees"] = 10;
    if (algo == Algorithm::GradientBoosting) hp["rounds"] = 5;
    if (algo == Algorithm::Mlp) hp = {{"hidden", nlohmann::json::array({8})}, {"epochs", 3}};
    const auto model = train_classifier(spec_of(algo, hp), d);

    const bool calibrated_expected =
        algo != Algorithm::LinearSvm && algo != Algorithm::Knn && algo != Algorithm::DecisionTree;
    CHECK(model.proba_calibrated() == calibrated_expected);

    for (int q = 0; q < 10; ++q) {
      std::vector<double> query(5);
      for (double& v : query) v = rng.uniform01() * 3.0;
      const auto proba = model.predict_proba(query);
      double sum = 0.0;
      for (double p : proba) sum += p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      if (calibrated_expected) {
        const std::size_t argmax =
            static_cast<std::size_t>(std::max_element(proba.begin(), proba.end()) - proba.begin());
        CHECK(static_cast<int>(argmax) == model.predict_id(query));
      }
    }
  }
}

TEST_CASE("zero-weight softmax yields the uniform distribution") {
  const auto impl = detail::logistic_regression_from_params(
      {{"weights", std::vector<std::vector<double>>(16, std::vector<double>(4, 0.0))},
       {"bias", std::vector<double>(16, 0.0)}});
  const auto proba = impl->predict_proba(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  for (double p : proba) CHECK(p == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("training validates its inputs") {
  Dataset ragged;
  ragged.labels = {"a", "b"};
  ragged.x = {{1.0, 2.0}, {1.0}};
  ragged.y = {0, 1};
  CHECK_THROWS_AS(train_classifier(spec_of(Algorithm::Knn), ragged), DimensionMismatch);

  Dataset single;
  single.labels = {"a", "b"};
  single.x = {{1.0}, {2.0}};
  single.y = {0, 0};
  CHECK_THROWS_AS(train_classifier(spec_of(Algorithm::Knn), single), SingleClass);

  CHECK_THROWS_AS(resolve_hyperparams(Algorithm::Knn, {{"kk", 3}}), Error);

  Dataset ok = two_gaussians(5, 1);
  const auto model = train_classifier(spec_of(Algorithm::Knn), ok);
  CHECK_THROWS_AS(model.predict(std::vector<double>{1.0}), DimensionMismatch);
}

TEST_CASE("every algorithm is deterministic under its seed") {
  const Dataset d = random_dataset(30, 4, 3, 8, /*non_negative=*/true);
  Rng rng(13);
  std::vector<std::vector<double>> queries;
  for (int q = 0; q < 25; ++q) {
    std::vector<double> query(4);
    for (double& v : query) v = rng.uniform01();
    queries.push_back(query);
  }
  for (auto algo : {Algorithm::NaiveBayes, Algorithm::LogisticRegression, Algorithm::LinearSvm,
                    Algorithm::Knn, Algorithm::DecisionTree, Algorithm::RandomForest,
                    Algorithm::GradientBoosting, Algorithm::Mlp}) {
    nlohmann::json hp = nlohmann::json::object();
    if (algo == Algorithm::RandomForest) hp["n_trees"] = 8;
    if (algo == Algorithm::GradientBoosting) hp["rounds"] = 5;
    if (algo == Algorithm::Mlp) hp = {{"hidden", nlohmann::json::array({6})}, {"epochs", 3}};
    const auto a = train_classifier(spec_of(algo, hp, 42), d);
    const auto b = train_classifier(spec_of(algo, hp, 42), d);
    for (const auto& q : queries) {
      CHECK(a.predict_id(q) == b.predict_id(q));
      CHECK(a.class_scores(q) == b.class_scores(q));
    }
  }
}

TEST_CASE("evaluate computes accuracy, macro F1 and the confusion matrix") {
  SUBCASE("perfect predictor") {
    const auto report = evaluate_predictions({0, 1, 2, 0}, {0, 1, 2, 0}, {"a", "b", "c"});
    CHECK(report.accuracy == 1.0);
    CHECK(report.f1_macro == 1.0);
    CHECK(report.confusion[0][0] == 2);
    CHECK(report.confusion[1][1] == 1);
    CHECK(report.confusion[0][1] == 0);
  }

  SUBCASE("constant predictor on a balanced 16-class set") {
    std::vector<int> truth, predicted;
    std::vector<std::string> labels;
    for (int c = 0; c < 16; ++c) labels.push_back("c" + std::to_string(c));
    for (int c = 0; c < 16; ++c)
      for (int i = 0; i < 10; ++i) {
        truth.push_back(c);
        predicted.push_back(0);
      }
    const auto report = evaluate_predictions(truth, predicted, labels);
    CHECK(report.accuracy == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  }

  SUBCASE("two-class case with TP=FP=FN=TN=1") {
    const auto report = evaluate_predictions({0, 0, 1, 1}, {0, 1, 0, 1}, {"pos", "neg"});
    CHECK(report.per_class_f1[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.per_class_f1[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.f1_macro == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.accuracy == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("accuracy equals the mean of per-example correctness") {
    Rng rng(3);
    std::vector<int> truth, predicted;
    for (int i = 0; i < 100; ++i) {
      truth.push_back(static_cast<int>(rng.index(4)));
      predicted.push_back(static_cast<int>(rng.index(4)));
    }
    const auto report = evaluate_predictions(truth, predicted, {"a", "b", "c", "d"});
    double manual = 0.0;
    for (int i = 0; i < 100; ++i) manual += truth[static_cast<std::size_t>(i)] == predicted[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    CHECK(report.accuracy == doctest::Approx(manual / 100.0).epsilon(1e-12));
    // Row sums equal per-class support.
    for (std::size_t c = 0; c < 4; ++c) {
      std::size_t row_sum = 0, support = 0;
      for (std::size_t j = 0; j < 4; ++j) row_sum += report.confusion[c][j];
      for (int t : truth) support += static_cast<std::size_t>(t) == c ? 1 : 0;
      CHECK(row_sum == support);
    }
  }

  SUBCASE("empty test set is an error") {
    const Dataset d = two_gaussians(5, 1);
    const auto model = train_classifier(spec_of(Algorithm::Knn), d);
    CHECK_THROWS_AS(evaluate(model, {}, {}), EmptyTestSet);
  }

  SUBCASE("zero-support class contributes zero F1") {
    const auto report = evaluate_predictions({0, 0}, {0, 0}, {"a", "b"});
    CHECK(report.per_class_f1[1] == 0.0);
    CHECK(report.f1_macro == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("model persistence reproduces predictions exactly") {
  testutil::TempDir dir;
  const Dataset d = random_dataset(30, 4, 3, 15, /*non_negative=*/true);
  Rng rng(10);
  std::vector<std::vector<double>> queries;
  for (int q = 0; q < 100; ++q) {
    std::vector<double> query(4);
    for (double& v : query) v = rng.uniform01() * 2.0;
    queries.push_back(query);
  }

  for (auto algo : {Algorithm::NaiveBayes, Algorithm::LogisticRegression, Algorithm::LinearSvm,
                    Algorithm::Knn, Algorithm::DecisionTree, Algorithm::RandomForest,
                    Algorithm::GradientBoosting, Algorithm::Mlp}) {
    nlohmann::json hp = nlohmann::json::object();
    if (algo == Algorithm::RandomForest) hp["n_trees"] = 6;
    if (algo == Algorithm::GradientBoosting) hp["rounds"] = 4;
    if (algo == Algorithm::Mlp) hp = {{"hidden", nlohmann::json::array({5})}, {"epochs", 2}};
    const auto model = train_classifier(spec_of(algo, hp), d);
    const auto path = dir.file(std::string(algorithm_name(algo)) + ".bin");
    save_model(model, path);
    const auto loaded = load_model(path);
    CHECK(loaded.spec.algorithm == algo);
    CHECK(loaded.labels == model.labels);
    for (const auto& q : queries) {
      CHECK(loaded.predict_id(q) == model.predict_id(q));
      CHECK(loaded.class_scores(q) == model.class_scores(q));  // bit-exact round trip
    }
  }
}

TEST_CASE("model container rejects tampered and future files") {
  testutil::TempDir dir;
  const Dataset d = two_gaussians(5, 2);
  const auto model = train_classifier(spec_of(Algorithm::Knn), d);
  save_model(model, dir.file("m.bin"));
  auto bytes = testutil::read_file(dir.file("m.bin"));

  SUBCASE("wrong magic") {
    bytes[0] = 'X';
    testutil::write_file(dir.file("bad.bin"), bytes);
    CHECK_THROWS_AS(load_model(dir.file("bad.bin")), CorruptModel);
  }
  SUBCASE("future container version") {
    bytes[4] = 0x7F;
    testutil::write_file(dir.file("new.bin"), bytes);
    CHECK_THROWS_AS(load_model(dir.file("new.bin")), VersionMismatch);
  }
  SUBCASE("payload corruption fails the checksum") {
    bytes[bytes.size() / 2] = static_cast<char>(~bytes[bytes.size() / 2]);
    testutil::write_file(dir.file("flip.bin"), bytes);
    CHECK_THROWS_AS(load_model(dir.file("flip.bin")), CorruptModel);
  }
  SUBCASE("truncation is detected") {
    testutil::write_file(dir.file("short.bin"), bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(load_model(dir.file("short.bin")), CorruptModel);
  }
}

TEST_CASE("majority_label breaks ties lexicographically") {
  CHECK(majority_label({"b", "a", "b"}) == "b");
  CHECK(majority_label({"b", "a"}) == "a");
  CHECK_THROWS_AS(majority_label({}), EmptyInput);
}

namespace {

std::vector<corpus::TweetRecord> separable_tweets(int per_type, std::uint64_t seed) {
  const auto spec = corpus::disjoint_vocabulary_spec(per_type, 12, 1, 0);
  return corpus::generate_synthetic(spec, seed).second;
}

}  // namespace

TEST_CASE("a zero-overlap synthetic corpus is perfectly separable by unigram NB") {
  auto spec = corpus::disjoint_vocabulary_spec(15, 10, 1, 0);
  for (auto& [code, profile] : spec.types) profile.emoji_rate = 0.0;  // keep vocabularies disjoint
  const auto tweets = corpus::generate_synthetic(spec, 6).second;
  std::vector<std::vector<std::string>> docs;
  for (const auto& t : tweets) docs.push_back(vectorize::pipeline_terms(t.text));
  const auto vocab = vectorize::build_vocab(docs, vectorize::Unit::Word, 1, 1, 1000);

  Dataset d;
  for (const auto& label : PersonalityLabel::all()) d.labels.emplace_back(label.code());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    d.x.push_back(vectorize::bow_vector(vocab, docs[i]).values);
    d.y.push_back(tweets[i].label.index());
  }
  const auto model = train_classifier(spec_of(Algorithm::NaiveBayes), d);
  for (std::size_t i = 0; i < d.x.size(); ++i) CHECK(model.predict_id(d.x[i]) == d.y[i]);
}

TEST_CASE("run_benchmark: grid shape, chance-beating cells and determinism") {
  const auto tweets = separable_tweets(20, 3);

  std::vector<FeatureConfig> features = {feature_config_by_name("bow", 400),
                                         feature_config_by_name("tfidf", 400)};
  std::vector<ClassifierSpec> specs = {spec_of(Algorithm::NaiveBayes),
                                       spec_of(Algorithm::LogisticRegression, {{"epochs", 80}})};

  const auto table = run_benchmark(tweets, features, specs, 42, 0.2);
  CHECK(table.cells.size() == 4);
  CHECK(table.quota == 20);

  // Disjoint vocabularies: every cell clears 6x the 1/16 chance rate.
  for (const auto& cell : table.cells) CHECK(cell.accuracy >= 6.0 / 16.0);

  const auto again = run_benchmark(tweets, features, specs, 42, 0.2);
  CHECK(persona::reports::benchmark_csv(table) == persona::reports::benchmark_csv(again));
  CHECK(table.best_cell == again.best_cell);
}

TEST_CASE("run_benchmark covers all eight algorithms on a tiny corpus") {
  const auto tweets = separable_tweets(12, 4);
  std::vector<FeatureConfig> features = {feature_config_by_name("tfidf", 300)};
  std::vector<ClassifierSpec> specs = {
      spec_of(Algorithm::NaiveBayes),
      spec_of(Algorithm::LogisticRegression, {{"epochs", 60}}),
      spec_of(Algorithm::LinearSvm, {{"epochs", 6}}),
      spec_of(Algorithm::Knn, {{"k", 3}}),
      spec_of(Algorithm::DecisionTree, {{"max_depth", 20}}),
      spec_of(Algorithm::RandomForest, {{"n_trees", 20}}),
      spec_of(Algorithm::GradientBoosting, {{"rounds", 8}, {"depth", 2}}),
      spec_of(Algorithm::Mlp, {{"hidden", nlohmann::json::array({32})}, {"epochs", 15}}),
  };
  const auto table = run_benchmark(tweets, features, specs, 42, 0.2);
  for (const auto& cell : table.cells) {
    INFO(cell.algorithm);
    CHECK(cell.accuracy >= 6.0 / 16.0);
  }
  const auto& best = table.cells[table.best_cell];
  CHECK(best.accuracy ==
        std::max_element(table.cells.begin(), table.cells.end(), [](const auto& a, const auto& b) {
          return a.accuracy < b.accuracy;
        })->accuracy);
}

TEST_CASE("benchmark cells can concatenate word2vec document embeddings") {
  const auto tweets = separable_tweets(12, 9);
  FeatureConfig feature = feature_config_by_name("bow", 300);
  feature.with_embedding = true;
  feature.embedding.dim = 8;
  feature.embedding.epochs = 2;
  feature.embedding.min_count = 1;
  feature.embedding.subsample = 0.0;
  std::vector<ClassifierSpec> specs = {spec_of(Algorithm::LogisticRegression, {{"epochs", 60}})};
  const auto table = run_benchmark(tweets, {feature}, specs, 42, 0.2);
  CHECK(table.cells[0].accuracy >= 6.0 / 16.0);
}
