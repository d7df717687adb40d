#include "perseval/promptgen/user_context.h"

#include <numeric>

#include "perseval/common/error.h"
#include "perseval/common/rng.h"

namespace perseval::promptgen {

UserDirectory::UserDirectory(const corpus::AnnotationCorpus& train) {
  for (const auto& r : train.records) {
    auto [it, inserted] = by_id_.try_emplace(r.annotator_id, users_.size());
    if (inserted) users_.push_back({r.annotator_id, users_.size(), {}});
    users_[it->second].few_shot_pool.push_back({r.text_id, r.text, r.labels});
  }
}

const UserContext* UserDirectory::find(std::string_view user_id) const {
  auto it = by_id_.find(user_id);
  return it == by_id_.end() ? nullptr : &users_[it->second];
}

std::vector<FewShotExample> select_few_shot(const UserContext& user, std::size_t k,
                                            std::string_view exclude_text_id,
                                            std::string_view exclude_text, std::uint64_t seed) {
  if (k == 0) return {};
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < user.few_shot_pool.size(); ++i) {
    const auto& e = user.few_shot_pool[i];
    if (e.text_id != exclude_text_id && e.text != exclude_text) candidates.push_back(i);
  }
  if (candidates.size() < k) {
    throw FewShotError("user '" + user.user_id + "' has " + std::to_string(candidates.size()) +
                       " eligible examples in a pool of " +
                       std::to_string(user.few_shot_pool.size()) + ", need " + std::to_string(k));
  }
  DeterministicRng rng(derive_seed(derive_seed(seed, user.user_id), exclude_text_id));
  // Partial Fisher-Yates: the first k slots become the sample.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  std::vector<FewShotExample> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(user.few_shot_pool[candidates[i]]);
  return out;
}

}  // namespace perseval::promptgen
