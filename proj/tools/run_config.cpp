#include "run_config.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "persona/errors.hpp"
#include "persona/reports.hpp"

namespace persona::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
void maybe(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

}  // namespace

void RunConfig::apply_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const json obj = json::parse(ss.str(), nullptr, false);
  if (obj.is_discarded() || !obj.is_object())
    throw Error("config file is not a JSON object: " + path.string());

  maybe(obj, "users", users);
  maybe(obj, "tweets", tweets);
  maybe(obj, "tagged", tagged);
  maybe(obj, "out", out);
  maybe(obj, "model_dir", model_dir);
  maybe(obj, "input", input);
  maybe(obj, "stopwords", stopwords);
  maybe(obj, "seed", seed);
  maybe(obj, "test_fraction", test_fraction);
  maybe(obj, "formats", formats);
  maybe(obj, "feature", feature);
  maybe(obj, "algorithm", algorithm);
  maybe(obj, "algorithms", algorithms);
  maybe(obj, "max_terms", max_terms);
  maybe(obj, "with_embedding", with_embedding);
  if (obj.contains("hyperparams")) hyperparams = obj.at("hyperparams");
  if (obj.contains("embedding")) {
    const json& e = obj.at("embedding");
    maybe(e, "dim", embedding.dim);
    maybe(e, "window", embedding.window);
    maybe(e, "negatives", embedding.negatives);
    maybe(e, "epochs", embedding.epochs);
    maybe(e, "initial_lr", embedding.initial_lr);
    maybe(e, "min_lr", embedding.min_lr);
    maybe(e, "min_count", embedding.min_count);
    maybe(e, "subsample", embedding.subsample);
  }
  maybe(obj, "which", which);
  maybe(obj, "wordcloud_k", wordcloud_k);
  maybe(obj, "balanced", balanced);
  maybe(obj, "reference_year", reference_year);
  maybe(obj, "tweets_per_type", tweets_per_type);
  maybe(obj, "users_per_type", users_per_type);
  maybe(obj, "vocab_per_type", vocab_per_type);
  maybe(obj, "interactions_per_type", interactions_per_type);
  maybe(obj, "sentiment_per_class", sentiment_per_class);
  maybe(obj, "proba", proba);
  maybe(obj, "per_user", per_user);
}

ordered_json RunConfig::to_json() const {
  ordered_json obj;
  obj["command"] = command;
  obj["users"] = users;
  obj["tweets"] = tweets;
  obj["tagged"] = tagged;
  obj["out"] = out;
  obj["model_dir"] = model_dir;
  obj["input"] = input;
  obj["stopwords"] = stopwords;
  obj["seed"] = seed;
  obj["test_fraction"] = test_fraction;
  obj["formats"] = formats;
  obj["feature"] = feature;
  obj["algorithm"] = algorithm;
  obj["algorithms"] = algorithms;
  obj["max_terms"] = max_terms;
  obj["with_embedding"] = with_embedding;
  obj["hyperparams"] = hyperparams;
  obj["embedding"] = {{"dim", embedding.dim},
                      {"window", embedding.window},
                      {"negatives", embedding.negatives},
                      {"epochs", embedding.epochs},
                      {"initial_lr", embedding.initial_lr},
                      {"min_lr", embedding.min_lr},
                      {"min_count", embedding.min_count},
                      {"subsample", embedding.subsample}};
  obj["which"] = which;
  obj["wordcloud_k"] = wordcloud_k;
  obj["balanced"] = balanced;
  obj["reference_year"] = reference_year;
  obj["tweets_per_type"] = tweets_per_type;
  obj["users_per_type"] = users_per_type;
  obj["vocab_per_type"] = vocab_per_type;
  obj["interactions_per_type"] = interactions_per_type;
  obj["sentiment_per_class"] = sentiment_per_class;
  obj["proba"] = proba;
  obj["per_user"] = per_user;
  return obj;
}

bool RunConfig::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void RunConfig::write_effective(const std::filesystem::path& out_dir) const {
  std::filesystem::create_directories(out_dir);
  reports::write_text_file(out_dir / "config.json", to_json().dump(2) + "\n");

  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  ordered_json meta;
  meta["tool"] = "persona";
  meta["version"] = "0.1.0";
  meta["timestamp"] = stamp;
  reports::write_text_file(out_dir / "run_meta.json", meta.dump(2) + "\n");
}

}  // namespace persona::cli
