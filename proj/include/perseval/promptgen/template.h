#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "perseval/common/scenario.h"

namespace perseval::promptgen {

using SlotMap = std::map<std::string, std::string, std::less<>>;

// Placeholders are written "<name>" (no '<', '>' or newline inside), exactly as
// they appear in the transcribed templates, e.g. "<user ID>".
std::vector<std::string> template_placeholders(std::string_view tmpl);

// Single-pass substitution: slot values are inserted verbatim and never
// rescanned. Every placeholder needs a slot and every slot must be used,
// otherwise RenderError names the offending placeholder.
std::string render_template(std::string_view tmpl, const SlotMap& slots);

// Placeholder names used by the templates.
namespace slot {
inline constexpr std::string_view kText = "text";
inline constexpr std::string_view kLabelList = "list of the all possible labels from hyphens";
inline constexpr std::string_view kUserId = "user ID";
inline constexpr std::string_view kExampleText = "example text";
inline constexpr std::string_view kExampleResponse = "user's annotations for the example";
inline constexpr std::string_view kFirstExampleText = "first example text";
inline constexpr std::string_view kFirstExampleResponse = "user's annotations for the first example";
inline constexpr std::string_view kSecondExampleText = "second example text";
inline constexpr std::string_view kSecondExampleResponse =
    "user's annotations for the second example";
}  // namespace slot

// The seven templates of one dataset, read from <root>/<dataset>/<scenario>.txt
// byte for byte.
class TemplateSet {
 public:
  static TemplateSet load(const std::filesystem::path& root, const std::string& dataset);

  const std::string& get(ScenarioId s) const { return templates_[static_cast<std::size_t>(s)]; }
  const std::string& dataset() const { return dataset_; }

 private:
  std::string dataset_;
  std::array<std::string, kAllScenarios.size()> templates_;
};

}  // namespace perseval::promptgen
