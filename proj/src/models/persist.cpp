#include <array>
#include <cstring>
#include <fstream>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models {

namespace {

constexpr char kMagic[4] = {'P', 'M', 'D', 'L'};
constexpr std::uint32_t kContainerVersion = 1;
constexpr int kPayloadSchemaVersion = 1;

std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    table[i] = c;
  }
  return table;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t read_u32(const std::string& data, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i)
    v = (v << 8) | static_cast<unsigned char>(data[offset + static_cast<std::size_t>(i)]);
  return v;
}

std::uint64_t read_u64(const std::string& data, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i)
    v = (v << 8) | static_cast<unsigned char>(data[offset + static_cast<std::size_t>(i)]);
  return v;
}

}  // namespace

std::uint32_t crc32(std::string_view bytes) {
  static const auto table = make_crc_table();
  std::uint32_t c = 0xFFFFFFFFu;
  for (char byte : bytes) c = table[(c ^ static_cast<unsigned char>(byte)) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

void save_model(const ClassifierModel& model, const std::filesystem::path& path) {
  nlohmann::json payload = {
      {"schema_version", kPayloadSchemaVersion},
      {"algorithm", std::string(algorithm_name(model.spec.algorithm))},
      {"seed", model.spec.seed},
      {"hyperparams", model.spec.hyperparams},
      {"labels", model.labels},
      {"meta", model.meta},
      {"params", model.impl->params_json()},
  };
  const std::vector<std::uint8_t> cbor = nlohmann::json::to_cbor(payload);

  std::string blob;
  blob.reserve(cbor.size() + 24);
  blob.append(kMagic, 4);
  put_u32(blob, kContainerVersion);
  put_u64(blob, cbor.size());
  const std::string_view body(reinterpret_cast<const char*>(cbor.data()), cbor.size());
  put_u32(blob, crc32(body));
  blob.append(body);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 20 || std::memcmp(data.data(), kMagic, 4) != 0)
    throw CorruptModel("not a model file: " + path.string());
  const std::uint32_t version = read_u32(data, 4);
  if (version > kContainerVersion)
    throw VersionMismatch("model container version " + std::to_string(version) +
                          " is newer than supported " + std::to_string(kContainerVersion));
  const std::uint64_t payload_len = read_u64(data, 8);
  const std::uint32_t stored_crc = read_u32(data, 16);
  if (data.size() != 20 + payload_len) throw CorruptModel("truncated model file");
  const std::string_view body(data.data() + 20, payload_len);
  if (crc32(body) != stored_crc) throw CorruptModel("model checksum mismatch");

  nlohmann::json payload;
  try {
    payload = nlohmann::json::from_cbor(body);
  } catch (const nlohmann::json::exception&) {
    throw CorruptModel("model payload is not valid CBOR");
  }
  const int schema = payload.at("schema_version").get<int>();
  if (schema > kPayloadSchemaVersion)
    throw VersionMismatch("model schema_version " + std::to_string(schema) +
                          " is newer than supported " + std::to_string(kPayloadSchemaVersion));

  ClassifierModel model;
  model.spec.algorithm = parse_algorithm(payload.at("algorithm").get<std::string>());
  model.spec.seed = payload.at("seed").get<std::uint64_t>();
  model.spec.hyperparams = payload.at("hyperparams");
  model.labels = payload.at("labels").get<std::vector<std::string>>();
  model.meta = payload.at("meta");
  const nlohmann::json& params = payload.at("params");
  switch (model.spec.algorithm) {
    case Algorithm::NaiveBayes:
      model.impl = detail::naive_bayes_from_params(params);
      break;
    case Algorithm::LogisticRegression:
      model.impl = detail::logistic_regression_from_params(params);
      break;
    case Algorithm::LinearSvm:
      model.impl = detail::linear_svm_from_params(params);
      break;
    case Algorithm::Knn:
      model.impl = detail::knn_from_params(params);
      break;
    case Algorithm::DecisionTree:
      model.impl = detail::decision_tree_from_params(params);
      break;
    case Algorithm::RandomForest:
      model.impl = detail::random_forest_from_params(params);
      break;
    case Algorithm::GradientBoosting:
      model.impl = detail::gradient_boosting_from_params(params);
      break;
    case Algorithm::Mlp:
      model.impl = detail::mlp_from_params(params);
      break;
  }
  return model;
}

}  // namespace persona::models
