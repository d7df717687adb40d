#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "perseval/corpus/annotation.h"

namespace perseval::promptgen {

struct FewShotExample {
  std::string text_id;
  std::string text;
  corpus::LabelSet labels;

  bool operator==(const FewShotExample&) const = default;
};

// What the harness knows about one annotator: a stable small index (shown to
// models as the user id) and their own training annotations.
struct UserContext {
  std::string user_id;
  std::size_t user_index = 0;
  std::vector<FewShotExample> few_shot_pool;
};

// Users indexed by first appearance in the training partition (corpus order).
class UserDirectory {
 public:
  UserDirectory() = default;
  explicit UserDirectory(const corpus::AnnotationCorpus& train);

  const UserContext* find(std::string_view user_id) const;
  const std::vector<UserContext>& users() const { return users_; }
  std::size_t size() const { return users_.size(); }

 private:
  std::vector<UserContext> users_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

// Draws k distinct examples from the user's pool, never one whose text id or
// text equals the target's. The draw depends only on (seed, user, target text
// id). Throws FewShotError when fewer than k candidates remain.
std::vector<FewShotExample> select_few_shot(const UserContext& user, std::size_t k,
                                            std::string_view exclude_text_id,
                                            std::string_view exclude_text, std::uint64_t seed);

}  // namespace perseval::promptgen
