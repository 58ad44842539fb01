#include "persona/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>

#include "persona/errors.hpp"
#include "persona/rng.hpp"

namespace persona::embed {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double safe_log(double x) { return std::log(std::max(x, 1e-12)); }

}  // namespace

bool EmbeddingModel::contains(std::string_view term) const {
  return index_.find(std::string(term)) != index_.end();
}

std::size_t EmbeddingModel::row_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) throw UnknownTerm(std::string(term));
  return it->second;
}

std::span<const double> EmbeddingModel::vector(std::size_t row) const {
  return std::span<const double>(input_vectors_.data() + row * dim_, dim_);
}

bool EmbeddingModel::operator==(const EmbeddingModel& other) const {
  return dim_ == other.dim_ && terms_ == other.terms_ && counts_ == other.counts_ &&
         input_vectors_ == other.input_vectors_ && params_ == other.params_ &&
         seed_ == other.seed_;
}

EmbeddingModel train_word2vec(const std::vector<std::vector<std::string>>& corpus,
                              const TrainParams& params, std::uint64_t seed) {
  if (params.dim == 0 || params.window < 1 || params.negatives < 0 || params.epochs < 1)
    throw Error("invalid word2vec training parameters");

  // Vocabulary: frequency-descending with lexicographic tie-break.
  std::map<std::string, std::uint64_t> raw_counts;
  for (const auto& sentence : corpus)
    for (const auto& tok : sentence) ++raw_counts[tok];

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [term, count] : raw_counts)
    if (count >= params.min_count) kept.emplace_back(term, count);
  if (kept.empty()) throw EmptyVocabulary();
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  EmbeddingModel model;
  model.dim_ = params.dim;
  model.params_ = params;
  model.seed_ = seed;
  std::uint64_t total_tokens = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    model.index_.emplace(kept[i].first, i);
    model.terms_.push_back(kept[i].first);
    model.counts_.push_back(kept[i].second);
    total_tokens += kept[i].second;
  }
  const std::size_t vocab = model.terms_.size();
  const std::size_t dim = params.dim;

  // Negative-sampling table: cumulative unigram^0.75.
  std::vector<double> neg_cumulative(vocab);
  double acc = 0.0;
  for (std::size_t i = 0; i < vocab; ++i) {
    acc += std::pow(static_cast<double>(model.counts_[i]), 0.75);
    neg_cumulative[i] = acc;
  }

  Rng rng(seed);
  model.input_vectors_.resize(vocab * dim);
  for (double& v : model.input_vectors_) v = (rng.uniform01() - 0.5) / static_cast<double>(dim);
  std::vector<double> output_vectors(vocab * dim, 0.0);

  auto sample_negative = [&]() -> std::size_t {
    const double u = rng.uniform01() * acc;
    auto it = std::lower_bound(neg_cumulative.begin(), neg_cumulative.end(), u);
    std::size_t i = static_cast<std::size_t>(it - neg_cumulative.begin());
    return std::min(i, vocab - 1);
  };

  const double planned =
      static_cast<double>(params.epochs) * static_cast<double>(std::max<std::uint64_t>(1, total_tokens));
  std::uint64_t processed = 0;
  double lr = params.initial_lr;

  std::vector<std::size_t> sentence;
  std::vector<double> grad_center(dim);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::uint64_t epoch_pairs = 0;
    for (const auto& raw_sentence : corpus) {
      // In-vocabulary filter plus frequent-word subsampling.
      sentence.clear();
      for (const auto& tok : raw_sentence) {
        auto it = model.index_.find(tok);
        if (it == model.index_.end()) continue;
        ++processed;
        if (params.subsample > 0.0) {
          const double freq = static_cast<double>(model.counts_[it->second]) /
                              static_cast<double>(total_tokens);
          const double keep =
              (std::sqrt(freq / params.subsample) + 1.0) * (params.subsample / freq);
          if (keep < 1.0 && rng.uniform01() > keep) continue;
        }
        sentence.push_back(it->second);
      }
      lr = std::max(params.min_lr,
                    params.initial_lr * (1.0 - static_cast<double>(processed) / planned));

      const std::size_t len = sentence.size();
      for (std::size_t pos = 0; pos < len; ++pos) {
        const std::size_t center = sentence[pos];
        const std::size_t radius = 1 + rng.index(static_cast<std::size_t>(params.window));
        const std::size_t lo = pos > radius ? pos - radius : 0;
        const std::size_t hi = std::min(len - 1, pos + radius);
        double* v_center = model.input_vectors_.data() + center * dim;
        for (std::size_t ctx_pos = lo; ctx_pos <= hi; ++ctx_pos) {
          if (ctx_pos == pos) continue;
          const std::size_t context = sentence[ctx_pos];
          std::fill(grad_center.begin(), grad_center.end(), 0.0);
          double pair_loss = 0.0;
          for (int d = 0; d <= params.negatives; ++d) {
            std::size_t target;
            double label;
            if (d == 0) {
              target = context;
              label = 1.0;
            } else {
              target = sample_negative();
              if (target == context) continue;
              label = 0.0;
            }
            double* u_target = output_vectors.data() + target * dim;
            double f = 0.0;
            for (std::size_t k = 0; k < dim; ++k) f += v_center[k] * u_target[k];
            const double s = sigmoid(f);
            const double g = (label - s) * lr;
            for (std::size_t k = 0; k < dim; ++k) {
              grad_center[k] += g * u_target[k];
              u_target[k] += g * v_center[k];
            }
            pair_loss += label > 0.5 ? -safe_log(s) : -safe_log(1.0 - s);
          }
          for (std::size_t k = 0; k < dim; ++k) v_center[k] += grad_center[k];
          epoch_loss += pair_loss;
          ++epoch_pairs;
        }
      }
    }
    model.epoch_loss_.push_back(epoch_pairs ? epoch_loss / static_cast<double>(epoch_pairs) : 0.0);
  }
  return model;
}

std::vector<Similar> most_similar(const EmbeddingModel& model,
                                  const std::vector<std::string>& positive,
                                  const std::vector<std::string>& negative, std::size_t topn) {
  if (positive.empty() && negative.empty()) throw EmptyQuery();
  if (topn < 1) throw Error("topn must be >= 1");

  const std::size_t dim = model.dim();
  std::vector<double> query(dim, 0.0);
  std::vector<char> excluded(model.vocab_size(), 0);
  auto add = [&](const std::string& term, double sign) {
    const std::size_t row = model.row_of(term);
    excluded[row] = 1;
    const auto vec = model.vector(row);
    double norm = 0.0;
    for (double v : vec) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return;
    for (std::size_t k = 0; k < dim; ++k) query[k] += sign * vec[k] / norm;
  };
  for (const auto& t : positive) add(t, 1.0);
  for (const auto& t : negative) add(t, -1.0);

  double query_norm = 0.0;
  for (double v : query) query_norm += v * v;
  query_norm = std::sqrt(query_norm);

  std::vector<Similar> scored;
  scored.reserve(model.vocab_size());
  for (std::size_t row = 0; row < model.vocab_size(); ++row) {
    if (excluded[row]) continue;
    const auto vec = model.vector(row);
    double dot = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      dot += query[k] * vec[k];
      norm += vec[k] * vec[k];
    }
    norm = std::sqrt(norm);
    const double denom = query_norm * norm;
    const double cosine = denom > 0.0 ? std::clamp(dot / denom, -1.0, 1.0) : 0.0;
    scored.push_back({cosine, model.terms()[row]});
  }
  std::sort(scored.begin(), scored.end(), [](const Similar& a, const Similar& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.term < b.term;
  });
  if (scored.size() > topn) scored.resize(topn);
  return scored;
}

std::vector<double> doc_embedding(const EmbeddingModel& model,
                                  const std::vector<std::string>& tokens) {
  // Accumulate in row order so the mean is exactly permutation-invariant.
  std::vector<std::size_t> rows;
  for (const auto& tok : tokens)
    if (model.contains(tok)) rows.push_back(model.row_of(tok));
  std::sort(rows.begin(), rows.end());

  std::vector<double> out(model.dim(), 0.0);
  for (std::size_t row : rows) {
    const auto vec = model.vector(row);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += vec[k];
  }
  if (!rows.empty())
    for (double& v : out) v /= static_cast<double>(rows.size());
  return out;
}

// --- persistence ---------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'P', 'E', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw CorruptModel("truncated embedding file");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw CorruptModel("truncated embedding file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& in) {
  const std::uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_embedding(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(model.dim()));
  put_u64(out, model.vocab_size());
  const TrainParams& p = model.params();
  put_u32(out, static_cast<std::uint32_t>(p.window));
  put_u32(out, static_cast<std::uint32_t>(p.negatives));
  put_u32(out, static_cast<std::uint32_t>(p.epochs));
  put_u64(out, p.min_count);
  put_f64(out, p.initial_lr);
  put_f64(out, p.min_lr);
  put_f64(out, p.subsample);
  put_u64(out, model.seed());
  for (std::size_t i = 0; i < model.vocab_size(); ++i) {
    const std::string& term = model.terms()[i];
    put_u32(out, static_cast<std::uint32_t>(term.size()));
    out.write(term.data(), static_cast<std::streamsize>(term.size()));
    put_u64(out, model.term_count(i));
  }
  for (std::size_t i = 0; i < model.vocab_size(); ++i)
    for (double v : model.vector(i)) put_f64(out, v);
  if (!out) throw IoError("write failed: " + path.string());
}

EmbeddingModel load_embedding(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw CorruptModel("not an embedding file: " + path.string());
  const std::uint32_t version = get_u32(in);
  if (version > kVersion)
    throw VersionMismatch("embedding file version " + std::to_string(version) +
                          " is newer than supported " + std::to_string(kVersion));
  EmbeddingModel model;
  model.dim_ = get_u32(in);
  const std::uint64_t vocab = get_u64(in);
  model.params_.dim = model.dim_;
  model.params_.window = static_cast<int>(get_u32(in));
  model.params_.negatives = static_cast<int>(get_u32(in));
  model.params_.epochs = static_cast<int>(get_u32(in));
  model.params_.min_count = get_u64(in);
  model.params_.initial_lr = get_f64(in);
  model.params_.min_lr = get_f64(in);
  model.params_.subsample = get_f64(in);
  model.seed_ = get_u64(in);
  for (std::uint64_t i = 0; i < vocab; ++i) {
    const std::uint32_t len = get_u32(in);
    std::string term(len, '\0');
    in.read(term.data(), len);
    if (!in) throw CorruptModel("truncated embedding file");
    const std::uint64_t count = get_u64(in);
    model.index_.emplace(term, model.terms_.size());
    model.terms_.push_back(std::move(term));
    model.counts_.push_back(count);
  }
  model.input_vectors_.resize(vocab * model.dim_);
  for (double& v : model.input_vectors_) v = get_f64(in);
  return model;
}

void export_embedding_text(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(std::numeric_limits<double>::max_digits10);
  out << model.vocab_size() << ' ' << model.dim() << '\n';
  for (std::size_t i = 0; i < model.vocab_size(); ++i) {
    out << model.terms()[i];
    for (double v : model.vector(i)) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace persona::embed
