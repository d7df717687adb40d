#include "perseval/baseline/features.h"

#include <algorithm>
#include <cmath>

#include "perseval/common/error.h"
#include "perseval/common/rng.h"

namespace perseval::baseline {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '\'' || c >= 0x80;
}

}  // namespace

void FeatureConfig::validate() const {
  if (hash_dim == 0 || (hash_dim & (hash_dim - 1)) != 0) {
    throw ConfigError("hash_dim must be a power of two, got " + std::to_string(hash_dim));
  }
  if (ngram_max != 1 && ngram_max != 2) throw ConfigError("ngram_max must be 1 or 2");
}

UserIndex build_user_index(const corpus::AnnotationCorpus& train) {
  UserIndex out;
  for (const auto& r : train.records) out.try_emplace(r.annotator_id, out.size());
  return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Featurized featurize(std::string_view text, std::string_view annotator_id, const UserIndex& users,
                     const FeatureConfig& config) {
  const auto tokens = word_tokens(text);
  std::vector<std::pair<std::uint32_t, double>> entries;
  auto add = [&](std::string_view gram) {
    const auto h = murmur_hash64(gram, kFeatureHashSeed);
    const auto index = static_cast<std::uint32_t>(h & (config.hash_dim - 1));
    entries.emplace_back(index, (h >> 63) ? -1.0 : 1.0);
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    add(tokens[i]);
    if (config.ngram_max >= 2 && i + 1 < tokens.size()) add(tokens[i] + " " + tokens[i + 1]);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Featurized out;
  auto& v = out.vector;
  for (const auto& [idx, val] : entries) {
    if (!v.indices.empty() && v.indices.back() == idx) {
      v.values.back() += val;
    } else {
      v.indices.push_back(idx);
      v.values.push_back(val);
    }
  }
  // Drop exact cancellations so the vector stays canonical.
  std::size_t w = 0;
  double norm2 = 0.0;
  for (std::size_t r = 0; r < v.indices.size(); ++r) {
    if (v.values[r] == 0.0) continue;
    v.indices[w] = v.indices[r];
    v.values[w] = v.values[r];
    norm2 += v.values[w] * v.values[w];
    ++w;
  }
  v.indices.resize(w);
  v.values.resize(w);
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v.values) x *= inv;
  }

  if (config.with_user) {
    auto it = users.find(annotator_id);
    if (it == users.end() || it->second >= config.user_dim) {
      out.cold_start = true;
    } else {
      v.indices.push_back(config.hash_dim + static_cast<std::uint32_t>(it->second));
      v.values.push_back(1.0);
    }
  }
  return out;
}

}  // namespace perseval::baseline
