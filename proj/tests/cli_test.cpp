#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "persona/corpus.hpp"
#include "persona/textproc.hpp"

extern std::string g_persona_bin;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const std::filesystem::path& capture_dir) {
  static int counter = 0;
  const auto log = capture_dir / ("cli_out_" + std::to_string(counter++) + ".log");
  const std::string command = "\"" + g_persona_bin + "\" " + args + " >" + log.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.output = testutil::read_file(log);
  return result;
}

// One generated fixture corpus shared by the whole file.
struct Fixture {
  testutil::TempDir dir;
  std::filesystem::path users, tweets, tagged;

  Fixture() {
    const auto gen = run_cli("generate --out " + dir.path().string() +
                                 " --tweets-per-type 20 --users-per-type 2 --vocab-per-type 12"
                                 " --interactions-per-type 6 --sentiment 25 --seed 42",
                             dir.path());
    REQUIRE(gen.exit_code == 0);
    users = dir.file("users.jsonl");
    tweets = dir.file("tweets.jsonl");
    tagged = dir.file("sentiment.jsonl");
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("validate: clean fixtures pass, broken files fail with line info") {
  auto& f = fixture();

  const auto ok = run_cli("validate --users " + f.users.string() + " --tweets " +
                              f.tweets.string() + " --tagged " + f.tagged.string(),
                          f.dir.path());
  CHECK(ok.exit_code == 0);

  SUBCASE("unknown user in tweets") {
    const auto bad = f.dir.file("bad_tweets.jsonl");
    testutil::write_file(bad,
                         "{\"user_id\":\"ghost\",\"text\":\"مرحبا\",\"kind\":\"tweet\"}\n");
    const auto res =
        run_cli("validate --users " + f.users.string() + " --tweets " + bad.string(), f.dir.path());
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("ghost") != std::string::npos);
  }

  SUBCASE("invalid personality code names the line") {
    const auto bad = f.dir.file("bad_users.jsonl");
    std::string line =
        "{\"user_id\":\"x\",\"personality\":\"ZZZZ\",\"bio\":\"\",\"followers\":0,"
        "\"friends\":0,\"likes\":0,\"statuses\":0,\"media\":0,\"verified\":false}";
    testutil::write_file(bad, line + "\n");
    const auto res = run_cli("validate --users " + bad.string(), f.dir.path());
    CHECK(res.exit_code == 1);
    CHECK(res.output.find(":1:") != std::string::npos);
  }

  SUBCASE("usage errors exit 2") {
    const auto res = run_cli("validate --no-such-flag", f.dir.path());
    CHECK(res.exit_code == 2);
    const auto none = run_cli("frobnicate", f.dir.path());
    CHECK(none.exit_code == 2);
  }
}

TEST_CASE("generate: same seed produces byte-identical corpora") {
  testutil::TempDir a, b;
  REQUIRE(run_cli("generate --out " + a.path().string() + " --tweets-per-type 8 --seed 7",
                  a.path())
              .exit_code == 0);
  REQUIRE(run_cli("generate --out " + b.path().string() + " --tweets-per-type 8 --seed 7",
                  b.path())
              .exit_code == 0);
  CHECK(testutil::read_file(a.file("users.jsonl")) == testutil::read_file(b.file("users.jsonl")));
  CHECK(testutil::read_file(a.file("tweets.jsonl")) == testutil::read_file(b.file("tweets.jsonl")));
  CHECK(std::filesystem::exists(a.file("config.json")));
  CHECK(std::filesystem::exists(a.file("run_meta.json")));
}

TEST_CASE("config file supplies values and explicit flags win over it") {
  testutil::TempDir base;
  testutil::write_file(base.file("cfg.json"),
                       "{\"seed\": 7, \"tweets_per_type\": 5, \"users_per_type\": 1}\n");

  testutil::TempDir from_config, from_flags, overridden;
  REQUIRE(run_cli("generate --config " + base.file("cfg.json").string() + " --out " +
                      from_config.path().string(),
                  base.path())
              .exit_code == 0);
  REQUIRE(run_cli("generate --seed 7 --tweets-per-type 5 --users-per-type 1 --out " +
                      from_flags.path().string(),
                  base.path())
              .exit_code == 0);
  CHECK(testutil::read_file(from_config.file("tweets.jsonl")) ==
        testutil::read_file(from_flags.file("tweets.jsonl")));

  // A flag on the command line beats the config file.
  REQUIRE(run_cli("generate --config " + base.file("cfg.json").string() + " --seed 9 --out " +
                      overridden.path().string(),
                  base.path())
              .exit_code == 0);
  CHECK(testutil::read_file(overridden.file("tweets.jsonl")) !=
        testutil::read_file(from_config.file("tweets.jsonl")));

  // The effective config snapshot records the resolved values.
  const auto snapshot = testutil::read_file(from_config.file("config.json"));
  CHECK(snapshot.find("\"seed\": 7") != std::string::npos);
  CHECK(snapshot.find("\"tweets_per_type\": 5") != std::string::npos);
}

TEST_CASE("benchmark: grid runs and reruns byte-identically") {
  auto& f = fixture();
  testutil::TempDir out1, out2;

  const std::string grid =
      " --algorithms naive_bayes,knn --max-terms 300 --seed 42 --format csv,json";
  const auto res1 = run_cli("benchmark --users " + f.users.string() + " --tweets " +
                                f.tweets.string() + " --out " + out1.path().string() + grid,
                            out1.path());
  REQUIRE_MESSAGE(res1.exit_code == 0, res1.output);
  const auto res2 = run_cli("benchmark --users " + f.users.string() + " --tweets " +
                                f.tweets.string() + " --out " + out2.path().string() + grid,
                            out2.path());
  REQUIRE(res2.exit_code == 0);

  const auto csv1 = testutil::read_file(out1.file("benchmark.csv"));
  CHECK(csv1 == testutil::read_file(out2.file("benchmark.csv")));
  CHECK(csv1.find("naive_bayes") != std::string::npos);
  CHECK(testutil::read_file(out1.file("benchmark.json")) ==
        testutil::read_file(out2.file("benchmark.json")));
  CHECK(std::filesystem::exists(out1.file("config.json")));
}

TEST_CASE("train then predict labels separable texts correctly") {
  auto& f = fixture();
  testutil::TempDir model_dir, pred_dir;

  const auto train = run_cli("train --users " + f.users.string() + " --tweets " +
                                 f.tweets.string() + " --out " + model_dir.path().string() +
                                 " --feature tfidf --algorithm logistic_regression"
                                 " --max-terms 300 --seed 42",
                             model_dir.path());
  REQUIRE_MESSAGE(train.exit_code == 0, train.output);
  CHECK(std::filesystem::exists(model_dir.file("model.bin")));
  CHECK(std::filesystem::exists(model_dir.file("vectorizer.json")));
  CHECK(std::filesystem::exists(model_dir.file("metrics.json")));

  // One training-vocabulary text per type, labeled by construction.
  const auto users = persona::corpus::load_users(f.users);
  const auto tweets = persona::corpus::load_tweets(f.tweets, users);
  std::map<std::string, std::string> sample_text;
  for (const auto& t : tweets)
    if (t.level() == 0) sample_text.emplace(std::string(t.label.code()), t.text);

  std::ostringstream input;
  std::vector<std::string> expected;
  for (const auto& [code, text] : sample_text) {
    input << "{\"text\":" << nlohmann::json(text).dump() << ",\"user_id\":\"u_" << code
          << "\"}\n";
    expected.push_back(code);
  }
  testutil::write_file(pred_dir.file("input.jsonl"), input.str());

  const auto predict = run_cli("predict --model-dir " + model_dir.path().string() + " --input " +
                                   pred_dir.file("input.jsonl").string() + " --out " +
                                   pred_dir.path().string() + " --proba --per-user",
                               pred_dir.path());
  REQUIRE_MESSAGE(predict.exit_code == 0, predict.output);

  std::ifstream pred_csv(pred_dir.file("predictions.csv"));
  std::string header;
  std::getline(pred_csv, header);
  CHECK(header.rfind("label,p_", 0) == 0);
  std::size_t correct = 0, row_count = 0;
  std::string line;
  while (std::getline(pred_csv, line)) {
    const auto comma = line.find(',');
    if (line.substr(0, comma) == expected[row_count]) ++correct;
    ++row_count;
  }
  REQUIRE(row_count == expected.size());
  CHECK(static_cast<double>(correct) / static_cast<double>(row_count) >= 0.9);
  CHECK(std::filesystem::exists(pred_dir.file("user_majority.csv")));
}

TEST_CASE("predict rejects a mismatched vectorizer") {
  auto& f = fixture();
  testutil::TempDir model_dir, other_dir, pred_dir;

  REQUIRE(run_cli("train --users " + f.users.string() + " --tweets " + f.tweets.string() +
                      " --out " + model_dir.path().string() +
                      " --feature tfidf --algorithm naive_bayes --max-terms 200 --seed 42",
                  model_dir.path())
              .exit_code == 0);
  REQUIRE(run_cli("train --users " + f.users.string() + " --tweets " + f.tweets.string() +
                      " --out " + other_dir.path().string() +
                      " --feature tfidf --algorithm naive_bayes --max-terms 120 --seed 43",
                  other_dir.path())
              .exit_code == 0);

  // Swap in the other run's vectorizer behind the model's back.
  std::filesystem::copy_file(other_dir.file("vectorizer.json"), model_dir.file("vectorizer.json"),
                             std::filesystem::copy_options::overwrite_existing);
  testutil::write_file(pred_dir.file("input.txt"), "مرحبا\n");
  const auto res = run_cli("predict --model-dir " + model_dir.path().string() + " --input " +
                               pred_dir.file("input.txt").string() + " --out " +
                               pred_dir.path().string(),
                           pred_dir.path());
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("vectorizer") != std::string::npos);
}

TEST_CASE("embed-train writes the binary and text exports") {
  auto& f = fixture();
  testutil::TempDir out;
  const auto res = run_cli("embed-train --users " + f.users.string() + " --tweets " +
                               f.tweets.string() + " --out " + out.path().string() +
                               " --dim 16 --epochs 2 --min-count 1 --seed 42",
                           out.path());
  REQUIRE_MESSAGE(res.exit_code == 0, res.output);
  CHECK(std::filesystem::exists(out.file("embedding.bin")));
  CHECK(std::filesystem::exists(out.file("embedding.txt")));
}

TEST_CASE("sentiment-train and sentiment report produce normalized shares") {
  auto& f = fixture();
  testutil::TempDir model_dir, report_dir;

  const auto train = run_cli("sentiment-train --tagged " + f.tagged.string() + " --out " +
                                 model_dir.path().string() + " --seed 42",
                             model_dir.path());
  REQUIRE_MESSAGE(train.exit_code == 0, train.output);

  const auto report = run_cli("report --which sentiment --users " + f.users.string() +
                                  " --tweets " + f.tweets.string() + " --model-dir " +
                                  model_dir.path().string() + " --out " +
                                  report_dir.path().string() + " --seed 42",
                              report_dir.path());
  REQUIRE_MESSAGE(report.exit_code == 0, report.output);

  std::ifstream csv(report_dir.file("sentiment_shares.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "cell,kind,n_tweets,share_positive,share_negative,share_neutral");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream ss(line);
    std::string cell, kind, n, pos, neg, neu;
    std::getline(ss, cell, ',');
    std::getline(ss, kind, ',');
    std::getline(ss, n, ',');
    std::getline(ss, pos, ',');
    std::getline(ss, neg, ',');
    std::getline(ss, neu, ',');
    if (pos.empty()) continue;  // absent cell
    CHECK(std::abs(std::stod(pos) + std::stod(neg) + std::stod(neu) - 1.0) < 1e-9);
  }
  CHECK(rows == 24);  // 16 types + 8 axis sides
}

TEST_CASE("profile report has 16 type rows and 8 axis rows per metric") {
  auto& f = fixture();
  testutil::TempDir out;
  const auto res = run_cli("report --which profile --users " + f.users.string() + " --out " +
                               out.path().string() + " --format csv,json,svg",
                           out.path());
  REQUIRE_MESSAGE(res.exit_code == 0, res.output);

  std::ifstream csv(out.file("profile.csv"));
  std::string line;
  std::getline(csv, line);  // header
  std::map<std::string, std::pair<int, int>> rows_per_metric;
  while (std::getline(csv, line)) {
    const auto first = line.find(',');
    const auto metric = line.substr(0, first);
    if (line.find(",type,") != std::string::npos) ++rows_per_metric[metric].first;
    if (line.find(",axis,") != std::string::npos) ++rows_per_metric[metric].second;
  }
  CHECK(rows_per_metric.size() >= 9);  // 6 profile stats + 3 reveal rates
  for (const auto& [metric, counts] : rows_per_metric) {
    INFO(metric);
    CHECK(counts.first == 16);
    CHECK(counts.second == 8);
  }
  CHECK(std::filesystem::exists(out.file("profile_followers.svg")));
}

TEST_CASE("wordcloud report's top token equals a brute-force mode") {
  auto& f = fixture();
  testutil::TempDir out;
  const auto res = run_cli("report --which wordcloud --users " + f.users.string() + " --tweets " +
                               f.tweets.string() + " --out " + out.path().string() + " --k 5",
                           out.path());
  REQUIRE_MESSAGE(res.exit_code == 0, res.output);

  // Recount ENTJ's tokens with the library and compare the top entry.
  const auto users = persona::corpus::load_users(f.users);
  const auto tweets = persona::corpus::load_tweets(f.tweets, users);
  std::map<std::string, std::size_t> counts;
  for (const auto& t : tweets) {
    if (t.label.code() != std::string("ENTJ")) continue;
    for (const auto& tok :
         persona::textproc::tokenize(persona::textproc::normalize(t.text)))
      if (tok.kind == persona::textproc::TokenKind::Word ||
          tok.kind == persona::textproc::TokenKind::LatinWord)
        ++counts[tok.text];
  }
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [token, count] : counts)
    if (count > best_count || (count == best_count && token < best)) {
      best = token;
      best_count = count;
    }

  std::ifstream csv(out.file("wordcloud.csv"));
  std::string line;
  std::getline(csv, line);
  std::string top_token;
  while (std::getline(csv, line)) {
    if (line.rfind("ENTJ,1,", 0) == 0) {
      const auto rest = line.substr(7);
      top_token = rest.substr(0, rest.find(','));
      break;
    }
  }
  CHECK(top_token == best);
}

TEST_CASE("levels and bio reports run on the fixture corpus") {
  auto& f = fixture();
  testutil::TempDir out;
  CHECK(run_cli("report --which levels --users " + f.users.string() + " --tweets " +
                    f.tweets.string() + " --out " + out.path().string(),
                out.path())
            .exit_code == 0);
  CHECK(std::filesystem::exists(out.file("levels.csv")));

  testutil::TempDir out2;
  CHECK(run_cli("report --which bio --users " + f.users.string() + " --out " +
                    out2.path().string(),
                out2.path())
            .exit_code == 0);
  CHECK(std::filesystem::exists(out2.file("bio.csv")));
}
