#include "persona/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "persona/errors.hpp"
#include "persona/textproc.hpp"
#include "persona/utf8.hpp"

namespace persona::vectorize {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view unit_name(Unit u) { return u == Unit::Word ? "word" : "char"; }

Unit parse_unit(std::string_view s) {
  if (s == "word") return Unit::Word;
  if (s == "char") return Unit::Char;
  throw Error("invalid vectorizer unit: \"" + std::string(s) + "\"");
}

std::vector<std::string> pipeline_terms(std::string_view text) {
  using textproc::TokenKind;
  std::vector<std::string> terms;
  for (const auto& tok : textproc::tokenize(textproc::normalize(text))) {
    switch (tok.kind) {
      case TokenKind::Word:
      case TokenKind::LatinWord:
      case TokenKind::Number:
      case TokenKind::Emoji:
        terms.push_back(tok.text);
        break;
      case TokenKind::Hashtag:
      case TokenKind::Mention:
        terms.push_back(tok.text.substr(1));  // marker is 1-byte '#'/'@'
        break;
      case TokenKind::Url:
      case TokenKind::Punctuation:
        break;
    }
  }
  return terms;
}

std::vector<std::string> extract_ngrams(const std::vector<std::string>& terms, Unit unit,
                                        int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw Error("invalid n-gram range");
  std::vector<std::string> out;
  if (unit == Unit::Word) {
    const std::size_t n = terms.size();
    for (int k = n_lo; k <= n_hi; ++k) {
      if (static_cast<std::size_t>(k) > n) break;
      for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= n; ++i) {
        std::string gram = terms[i];
        for (std::size_t j = 1; j < static_cast<std::size_t>(k); ++j) {
          gram += ' ';
          gram += terms[i + j];
        }
        out.push_back(std::move(gram));
      }
    }
    return out;
  }
  // Char n-grams over the joined document, spaces kept as boundaries.
  std::string doc;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) doc += ' ';
    doc += terms[i];
  }
  const std::u32string scalars = utf8::decode(doc);
  const std::size_t n = scalars.size();
  for (int k = n_lo; k <= n_hi; ++k) {
    if (static_cast<std::size_t>(k) > n) break;
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= n; ++i)
      out.push_back(utf8::encode(std::u32string_view(scalars).substr(i, static_cast<std::size_t>(k))));
  }
  return out;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, Unit unit, int n_lo,
                       int n_hi, std::size_t max_terms) {
  if (corpus.empty()) throw EmptyCorpus();
  if (n_lo < 1 || n_hi < n_lo) throw Error("invalid n-gram range");

  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus)
    for (auto& gram : extract_ngrams(doc, unit, n_lo, n_hi)) ++counts[gram];

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_terms) ranked.resize(max_terms);

  Vocabulary v;
  v.unit = unit;
  v.n_lo = n_lo;
  v.n_hi = n_hi;
  v.max_terms = max_terms;
  v.terms.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    v.index.emplace(ranked[i].first, i);
    v.terms.push_back(std::move(ranked[i].first));
  }
  return v;
}

FeatureVector bow_vector(const Vocabulary& vocab, const std::vector<std::string>& terms) {
  FeatureVector out;
  out.values.assign(vocab.size(), 0.0);
  for (const auto& gram : extract_ngrams(terms, vocab.unit, vocab.n_lo, vocab.n_hi)) {
    auto it = vocab.index.find(gram);
    if (it != vocab.index.end()) out.values[it->second] += 1.0;
  }
  std::ostringstream name;
  name << "bow:" << unit_name(vocab.unit) << ":" << vocab.n_lo << "-" << vocab.n_hi;
  out.layout.push_back({name.str(), out.values.size()});
  return out;
}

TfidfModel tfidf_fit(const std::vector<std::vector<std::string>>& corpus, Unit unit, int n_lo,
                     int n_hi, std::size_t max_terms) {
  TfidfModel m;
  m.vocabulary = build_vocab(corpus, unit, n_lo, n_hi, max_terms);
  m.doc_count = corpus.size();
  std::vector<std::size_t> df(m.vocabulary.size(), 0);
  std::vector<char> seen(m.vocabulary.size());
  for (const auto& doc : corpus) {
    std::fill(seen.begin(), seen.end(), 0);
    for (const auto& gram : extract_ngrams(doc, unit, n_lo, n_hi)) {
      auto it = m.vocabulary.index.find(gram);
      if (it != m.vocabulary.index.end()) seen[it->second] = 1;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (seen[i]) ++df[i];
  }
  m.idf.resize(m.vocabulary.size());
  for (std::size_t i = 0; i < df.size(); ++i)
    m.idf[i] = std::log((1.0 + static_cast<double>(m.doc_count)) /
                        (1.0 + static_cast<double>(df[i]))) +
               1.0;
  return m;
}

FeatureVector tfidf_transform(const TfidfModel& model, const std::vector<std::string>& terms) {
  FeatureVector out = bow_vector(model.vocabulary, terms);
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] *= model.idf[i];
    norm_sq += out.values[i] * out.values[i];
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : out.values) v *= inv;
  }
  std::ostringstream name;
  name << "tfidf:" << unit_name(model.vocabulary.unit) << ":" << model.vocabulary.n_lo << "-"
       << model.vocabulary.n_hi;
  out.layout.front().name = name.str();
  return out;
}

FeatureVector concat_features(const std::vector<FeatureVector>& blocks) {
  if (blocks.empty()) throw EmptyInput("concat_features requires at least one block");
  FeatureVector out;
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.values.size();
  out.values.reserve(total);
  for (const auto& b : blocks) {
    out.values.insert(out.values.end(), b.values.begin(), b.values.end());
    out.layout.insert(out.layout.end(), b.layout.begin(), b.layout.end());
  }
  return out;
}

// --- persistence --------------------------------------------------------------

namespace {

constexpr int kSchemaVersion = 1;

ordered_json vocab_header(const Vocabulary& v, std::string_view kind) {
  ordered_json obj;
  obj["schema_version"] = kSchemaVersion;
  obj["kind"] = std::string(kind);
  obj["unit"] = std::string(unit_name(v.unit));
  obj["n_lo"] = v.n_lo;
  obj["n_hi"] = v.n_hi;
  obj["max_terms"] = v.max_terms;
  return obj;
}

json parse_versioned(std::string_view text, std::string_view expected_kind) {
  const json obj = json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object() || !obj.contains("schema_version"))
    throw CorruptModel("not a vectorizer document");
  const int version = obj.at("schema_version").get<int>();
  if (version > kSchemaVersion)
    throw VersionMismatch("vectorizer schema_version " + std::to_string(version) +
                          " is newer than supported " + std::to_string(kSchemaVersion));
  if (!obj.contains("kind") || obj.at("kind").get<std::string>() != expected_kind)
    throw CorruptModel("unexpected vectorizer kind");
  return obj;
}

Vocabulary vocab_from_json(const json& obj) {
  Vocabulary v;
  v.unit = parse_unit(obj.at("unit").get<std::string>());
  v.n_lo = obj.at("n_lo").get<int>();
  v.n_hi = obj.at("n_hi").get<int>();
  v.max_terms = obj.at("max_terms").get<std::size_t>();
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

}  // namespace

void save_vocabulary(const Vocabulary& v, const std::filesystem::path& path) {
  ordered_json obj = vocab_header(v, "vocabulary");
  obj["terms"] = v.terms;
  write_file(path, obj.dump() + "\n");
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  const json obj = parse_versioned(read_file(path), "vocabulary");
  Vocabulary v = vocab_from_json(obj);
  for (const auto& t : obj.at("terms")) {
    v.index.emplace(t.get<std::string>(), v.terms.size());
    v.terms.push_back(t.get<std::string>());
  }
  return v;
}

std::string tfidf_to_json(const TfidfModel& m) {
  ordered_json obj = vocab_header(m.vocabulary, "tfidf");
  obj["doc_count"] = m.doc_count;
  ordered_json terms = ordered_json::array();
  for (std::size_t i = 0; i < m.vocabulary.size(); ++i) {
    ordered_json t;
    t["t"] = m.vocabulary.terms[i];
    t["idf"] = m.idf[i];
    terms.push_back(std::move(t));
  }
  obj["terms"] = std::move(terms);
  return obj.dump() + "\n";
}

TfidfModel tfidf_from_json(std::string_view text) {
  const json obj = parse_versioned(text, "tfidf");
  TfidfModel m;
  m.vocabulary = vocab_from_json(obj);
  m.doc_count = obj.at("doc_count").get<std::size_t>();
  for (const auto& t : obj.at("terms")) {
    m.vocabulary.index.emplace(t.at("t").get<std::string>(), m.vocabulary.terms.size());
    m.vocabulary.terms.push_back(t.at("t").get<std::string>());
    m.idf.push_back(t.at("idf").get<double>());
  }
  return m;
}

void save_tfidf(const TfidfModel& m, const std::filesystem::path& path) {
  write_file(path, tfidf_to_json(m));
}

TfidfModel load_tfidf(const std::filesystem::path& path) {
  return tfidf_from_json(read_file(path));
}

}  // namespace persona::vectorize
