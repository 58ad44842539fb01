#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace persona::vectorize {

enum class Unit : std::uint8_t { Word, Char };

std::string_view unit_name(Unit u);
Unit parse_unit(std::string_view s);

// Canonical text pipeline for every vectorizer and for embedding training:
// normalize, tokenize, keep words / latin words / numbers / emoji, strip
// hashtag and mention markers to their content, drop URLs and punctuation.
std::vector<std::string> pipeline_terms(std::string_view text);

struct Vocabulary {
  std::vector<std::string> terms;                     // column order
  std::unordered_map<std::string, std::size_t> index; // term -> column
  Unit unit = Unit::Word;
  int n_lo = 1;
  int n_hi = 1;
  std::size_t max_terms = 1000;

  std::size_t size() const { return terms.size(); }
};

struct TfidfModel {
  Vocabulary vocabulary;
  std::vector<double> idf;  // aligned with vocabulary.terms
  std::size_t doc_count = 0;
};

struct FeatureBlock {
  std::string name;
  std::size_t length = 0;

  bool operator==(const FeatureBlock&) const = default;
};

struct FeatureVector {
  std::vector<double> values;
  std::vector<FeatureBlock> layout;

  std::size_t size() const { return values.size(); }
};

// All n-grams of orders n_lo..n_hi of one document, as strings. Word
// n-grams join tokens with single spaces; char n-grams run over the
// document string (tokens joined by spaces, so spaces act as boundaries).
std::vector<std::string> extract_ngrams(const std::vector<std::string>& terms, Unit unit,
                                        int n_lo, int n_hi);

// Top-max_terms n-grams over the corpus by descending frequency,
// lexicographic tie-break. Orders n_lo..n_hi are ranked jointly.
Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, Unit unit, int n_lo,
                       int n_hi, std::size_t max_terms);

// Raw n-gram counts over the vocabulary columns.
FeatureVector bow_vector(const Vocabulary& vocab, const std::vector<std::string>& terms);

// idf(t) = ln((1 + N) / (1 + df(t))) + 1.
TfidfModel tfidf_fit(const std::vector<std::vector<std::string>>& corpus, Unit unit, int n_lo,
                     int n_hi, std::size_t max_terms);

// count * idf, then L2-normalized (all-zero vectors stay zero).
FeatureVector tfidf_transform(const TfidfModel& model, const std::vector<std::string>& terms);

FeatureVector concat_features(const std::vector<FeatureVector>& blocks);

// Versioned JSON persistence (shared schema; tf-idf adds per-term idf).
void save_vocabulary(const Vocabulary& v, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);
void save_tfidf(const TfidfModel& m, const std::filesystem::path& path);
TfidfModel load_tfidf(const std::filesystem::path& path);

std::string tfidf_to_json(const TfidfModel& m);
TfidfModel tfidf_from_json(std::string_view text);

}  // namespace persona::vectorize
