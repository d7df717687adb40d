#include "perseval/baseline/linear_model.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "perseval/common/digest.h"
#include "perseval/common/error.h"
#include "perseval/common/jsonl.h"

namespace perseval::baseline {

namespace {

constexpr char kMagic[4] = {'P', 'V', 'L', 'M'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void append_doubles(std::string& out, const std::vector<double>& xs) {
  for (double x : xs) put_u64(out, std::bit_cast<std::uint64_t>(x));
}

}  // namespace

double LinearModel::margin(std::size_t label, const SparseVector& x) const {
  const auto& w = weights[label];
  double m = bias[label];
  for (std::size_t k = 0; k < x.nnz(); ++k) m += w[x.indices[k]] * x.values[k];
  return m;
}

std::string LinearModel::weight_digest() const {
  std::string bytes;
  append_doubles(bytes, bias);
  for (const auto& w : weights) append_doubles(bytes, w);
  return sha256_hex(bytes);
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  OrderedJson h;
  h["format"] = "perseval-linear";
  h["dataset"] = model.dataset;
  h["labels"] = model.labels;
  h["hash_dim"] = model.config.hash_dim;
  h["ngram_max"] = model.config.ngram_max;
  h["with_user"] = model.config.with_user;
  h["user_dim"] = model.config.user_dim;
  OrderedJson users = OrderedJson::object();
  for (const auto& [id, idx] : model.users) users[id] = idx;
  h["users"] = std::move(users);
  h["bias"] = model.bias;
  h["seed"] = model.seed;
  h["loss_curve"] = model.loss_curve;
  h["validation_f1_curve"] = model.validation_f1_curve;
  h["best_epoch"] = model.best_epoch;
  const std::string header = h.dump();

  std::string out(kMagic, 4);
  put_u32(out, LinearModel::kFormatVersion);
  put_u64(out, header.size());
  out += header;
  for (const auto& w : model.weights) append_doubles(out, w);
  write_file_atomic(path, out);
}

LinearModel load_model(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw DataError(path.string() + " is not a perseval linear model");
  }
  const std::uint32_t version = p[4] | (p[5] << 8) | (p[6] << 16) | (std::uint32_t(p[7]) << 24);
  if (version != LinearModel::kFormatVersion) {
    throw DataError(path.string() + ": unsupported model format version " + std::to_string(version));
  }
  const auto header_len = get_u64(p + 8);
  if (16 + header_len > bytes.size()) throw DataError(path.string() + ": truncated header");
  LinearModel m;
  try {
    const auto h = Json::parse(bytes.substr(16, header_len));
    m.dataset = h.at("dataset").get<std::string>();
    m.labels = h.at("labels").get<std::vector<std::string>>();
    m.config.hash_dim = h.at("hash_dim").get<std::uint32_t>();
    m.config.ngram_max = h.at("ngram_max").get<int>();
    m.config.with_user = h.at("with_user").get<bool>();
    m.config.user_dim = h.at("user_dim").get<std::size_t>();
    for (const auto& [id, idx] : h.at("users").items()) m.users[id] = idx.get<std::size_t>();
    m.bias = h.at("bias").get<std::vector<double>>();
    m.seed = h.at("seed").get<std::uint64_t>();
    m.loss_curve = h.at("loss_curve").get<std::vector<double>>();
    m.validation_f1_curve = h.at("validation_f1_curve").get<std::vector<double>>();
    m.best_epoch = h.at("best_epoch").get<int>();
  } catch (const Json::exception& e) {
    throw DataError(path.string() + ": invalid model header: " + e.what());
  }
  m.config.validate();
  const std::size_t dim = m.config.total_dim();
  const std::size_t expected = 16 + header_len + m.labels.size() * dim * 8;
  if (bytes.size() != expected || m.bias.size() != m.labels.size()) {
    throw DataError(path.string() + ": weight block size does not match header");
  }
  const unsigned char* w = p + 16 + header_len;
  m.weights.assign(m.labels.size(), std::vector<double>(dim));
  for (auto& row : m.weights) {
    for (auto& x : row) {
      x = std::bit_cast<double>(get_u64(w));
      w += 8;
    }
  }
  return m;
}

}  // namespace perseval::baseline
