// persona: personality analytics over Arabic social-media corpora.
// Subcommands: validate, generate, benchmark, train, predict, embed-train,
// sentiment-train, report. Exit codes: 0 ok, 1 data error, 2 usage error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "persona/errors.hpp"
#include "run_config.hpp"

namespace {

using persona::cli::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file; flags override its values");
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--out", cfg.out, "output directory");
  cmd->add_option("--format", cfg.formats, "output formats (csv, json, svg)")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"personality analytics for Arabic social-media corpora"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  auto* validate = app.add_subcommand("validate", "schema-check corpora files");
  validate->add_option("--users", cfg.users, "users JSONL");
  validate->add_option("--tweets", cfg.tweets, "tweets JSONL");
  validate->add_option("--tagged", cfg.tagged, "tagged sentiment JSONL");
  add_common(validate, cfg, config_path);

  auto* generate = app.add_subcommand("generate", "write a synthetic demo corpus");
  generate->add_option("--tweets-per-type", cfg.tweets_per_type, "level-zero texts per type");
  generate->add_option("--users-per-type", cfg.users_per_type, "users per type");
  generate->add_option("--vocab-per-type", cfg.vocab_per_type, "private vocabulary size per type");
  generate->add_option("--interactions-per-type", cfg.interactions_per_type,
                       "level-one texts per type");
  generate->add_option("--sentiment", cfg.sentiment_per_class,
                       "also write a tagged sentiment corpus with this many lines per class");
  add_common(generate, cfg, config_path);

  auto* benchmark = app.add_subcommand("benchmark", "train/evaluate the algorithm-feature grid");
  benchmark->add_option("--users", cfg.users, "users JSONL");
  benchmark->add_option("--tweets", cfg.tweets, "tweets JSONL");
  benchmark->add_option("--algorithms", cfg.algorithms,
                        "rows of the table (default: the 7 classical algorithms; "
                        "mlp_shallow/mlp_deep add the feedforward nets)")
      ->delimiter(',');
  benchmark->add_option("--max-terms", cfg.max_terms, "vocabulary size");
  benchmark->add_flag("--with-embedding", cfg.with_embedding,
                      "concatenate averaged word2vec vectors to every feature");
  benchmark->add_option("--test-fraction", cfg.test_fraction, "held-out share per class");
  add_common(benchmark, cfg, config_path);

  auto* train = app.add_subcommand("train", "train one classifier and save the model bundle");
  train->add_option("--users", cfg.users, "users JSONL");
  train->add_option("--tweets", cfg.tweets, "tweets JSONL");
  train->add_option("--feature", cfg.feature, "bow | tfidf | tfidf_ngram | tfidf_char");
  train->add_option("--algorithm", cfg.algorithm, "classifier to train");
  train->add_option("--max-terms", cfg.max_terms, "vocabulary size");
  train->add_flag("--with-embedding", cfg.with_embedding, "concatenate word2vec features");
  train->add_option("--test-fraction", cfg.test_fraction, "held-out share per class");
  add_common(train, cfg, config_path);

  auto* predict = app.add_subcommand("predict", "label new texts with a trained bundle");
  predict->add_option("--model-dir", cfg.model_dir, "directory written by train");
  predict->add_option("--input", cfg.input, "texts: plain (one per line) or JSONL with text");
  predict->add_flag("--proba", cfg.proba, "emit per-class probabilities");
  predict->add_flag("--per-user", cfg.per_user,
                    "also emit per-user majority labels (JSONL input with user_id)");
  add_common(predict, cfg, config_path);

  auto* embed_train = app.add_subcommand("embed-train", "train word2vec embeddings");
  embed_train->add_option("--users", cfg.users, "users JSONL");
  embed_train->add_option("--tweets", cfg.tweets, "tweets JSONL");
  embed_train->add_option("--dim", cfg.embedding.dim, "embedding width");
  embed_train->add_option("--window", cfg.embedding.window, "max context radius");
  embed_train->add_option("--negatives", cfg.embedding.negatives, "negative samples per pair");
  embed_train->add_option("--epochs", cfg.embedding.epochs, "training epochs");
  embed_train->add_option("--min-count", cfg.embedding.min_count, "minimum term frequency");
  add_common(embed_train, cfg, config_path);

  auto* sentiment_train =
      app.add_subcommand("sentiment-train", "train the 3-class sentiment model");
  sentiment_train->add_option("--tagged", cfg.tagged, "tagged JSONL {text, label}");
  add_common(sentiment_train, cfg, config_path);

  auto* report = app.add_subcommand("report", "descriptive analytics reports");
  report->add_option("--which", cfg.which, "profile | bio | levels | wordcloud | sentiment");
  report->add_option("--users", cfg.users, "users JSONL");
  report->add_option("--tweets", cfg.tweets, "tweets JSONL");
  report->add_option("--model-dir", cfg.model_dir, "sentiment model dir (for --which sentiment)");
  report->add_option("--stopwords", cfg.stopwords, "stopword file for word clouds");
  report->add_option("--k", cfg.wordcloud_k, "word cloud size");
  report->add_flag("--balanced,!--no-balanced", cfg.balanced,
                   "balance tweets per type before sentiment shares");
  report->add_option("--reference-year", cfg.reference_year, "year used to derive ages");
  add_common(report, cfg, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0, any usage problem exits 2
  }

  try {
    // Re-parse so explicit flags override config-file values.
    if (!config_path.empty()) {
      RunConfig file_cfg;
      file_cfg.apply_file(config_path);
      cfg = file_cfg;
      app.clear();
      app.parse(argc, argv);
    }
    using persona::cli::RunConfig;
    if (validate->parsed()) { cfg.command = "validate"; return persona::cli::cmd_validate(cfg); }
    if (generate->parsed()) { cfg.command = "generate"; return persona::cli::cmd_generate(cfg); }
    if (benchmark->parsed()) { cfg.command = "benchmark"; return persona::cli::cmd_benchmark(cfg); }
    if (train->parsed()) { cfg.command = "train"; return persona::cli::cmd_train(cfg); }
    if (predict->parsed()) { cfg.command = "predict"; return persona::cli::cmd_predict(cfg); }
    if (embed_train->parsed()) { cfg.command = "embed-train"; return persona::cli::cmd_embed_train(cfg); }
    if (sentiment_train->parsed()) {
      cfg.command = "sentiment-train";
      return persona::cli::cmd_sentiment_train(cfg);
    }
    if (report->parsed()) { cfg.command = "report"; return persona::cli::cmd_report(cfg); }
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const persona::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
