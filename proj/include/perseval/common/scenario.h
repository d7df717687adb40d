#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace perseval {

// Evaluation setups. Q* query an instruction-tuned model, LM* and CLS* are
// fine-tuned with a generation or classification head; *P variants see the
// user id.
enum class ScenarioId { kQ0S, kQ1S, kQ2S, kLM, kLMP, kCLS, kCLSP };

inline constexpr std::array<ScenarioId, 7> kAllScenarios = {
    ScenarioId::kQ0S, ScenarioId::kQ1S, ScenarioId::kQ2S, ScenarioId::kLM,
    ScenarioId::kLMP, ScenarioId::kCLS, ScenarioId::kCLSP};

// File / JSON key: "q0s", "lmp", ...
std::string_view scenario_key(ScenarioId s);
// Table header: "Q-0S", "LM-P", ...
std::string_view scenario_display(ScenarioId s);
// Accepts either form, case-insensitive.
std::optional<ScenarioId> parse_scenario(std::string_view name);

inline bool is_query(ScenarioId s) {
  return s == ScenarioId::kQ0S || s == ScenarioId::kQ1S || s == ScenarioId::kQ2S;
}
inline bool is_generative(ScenarioId s) {
  return s == ScenarioId::kLM || s == ScenarioId::kLMP;
}
inline bool is_classification(ScenarioId s) {
  return s == ScenarioId::kCLS || s == ScenarioId::kCLSP;
}
inline bool is_personalized(ScenarioId s) {
  return s == ScenarioId::kLMP || s == ScenarioId::kCLSP;
}
inline int few_shot_count(ScenarioId s) {
  return s == ScenarioId::kQ1S ? 1 : s == ScenarioId::kQ2S ? 2 : 0;
}

}  // namespace perseval
