#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace persona::embed {

struct TrainParams {
  std::size_t dim = 100;
  int window = 5;       // per-center radius drawn uniformly from 1..window
  int negatives = 5;
  int epochs = 5;
  double initial_lr = 0.025;
  double min_lr = 1e-4;
  std::size_t min_count = 5;
  double subsample = 1e-3;  // frequent-word subsampling threshold; 0 disables

  bool operator==(const TrainParams&) const = default;
};

class EmbeddingModel {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t vocab_size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const TrainParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  bool contains(std::string_view term) const;
  // Row index of a term; throws UnknownTerm.
  std::size_t row_of(std::string_view term) const;
  std::span<const double> vector(std::size_t row) const;
  std::uint64_t term_count(std::size_t row) const { return counts_[row]; }

  // Mean negative-sampling loss per epoch, recorded during training.
  const std::vector<double>& epoch_loss() const { return epoch_loss_; }

  bool operator==(const EmbeddingModel& other) const;

 private:
  friend EmbeddingModel train_word2vec(const std::vector<std::vector<std::string>>&,
                                       const TrainParams&, std::uint64_t);
  friend EmbeddingModel load_embedding(const std::filesystem::path&);

  std::size_t dim_ = 0;
  std::vector<std::string> terms_;  // frequency-descending, ties lexicographic
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> input_vectors_;  // vocab_size x dim, row-major
  TrainParams params_;
  std::uint64_t seed_ = 0;
  std::vector<double> epoch_loss_;
};

// Skip-gram with negative sampling (negatives from the unigram^0.75
// distribution, learning rate decaying linearly to min_lr). Single-threaded
// and deterministic under (corpus, params, seed). Throws EmptyVocabulary if
// no term reaches min_count.
EmbeddingModel train_word2vec(const std::vector<std::vector<std::string>>& corpus,
                              const TrainParams& params, std::uint64_t seed);

struct Similar {
  double score = 0.0;  // cosine, in [-1, 1]
  std::string term;

  bool operator==(const Similar&) const = default;
};

// 3CosAdd analogy/similarity: query = sum of unit positives minus sum of
// unit negatives, ranked by cosine; query terms never appear in results.
std::vector<Similar> most_similar(const EmbeddingModel& model,
                                  const std::vector<std::string>& positive,
                                  const std::vector<std::string>& negative, std::size_t topn);

// Mean of in-vocabulary token vectors; zero vector if none.
std::vector<double> doc_embedding(const EmbeddingModel& model,
                                  const std::vector<std::string>& tokens);

// Binary persistence (magic, version, dim, vocab, term table, row-major
// vectors); round-trips vectors bit-exactly.
void save_embedding(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_embedding(const std::filesystem::path& path);

// Plain-text export: header line "<vocab> <dim>", then "term v1 v2 ...".
void export_embedding_text(const EmbeddingModel& model, const std::filesystem::path& path);

}  // namespace persona::embed
