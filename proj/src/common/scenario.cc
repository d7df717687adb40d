#include "perseval/common/scenario.h"

#include <cctype>
#include <string>

namespace perseval {

std::string_view scenario_key(ScenarioId s) {
  switch (s) {
    case ScenarioId::kQ0S: return "q0s";
    case ScenarioId::kQ1S: return "q1s";
    case ScenarioId::kQ2S: return "q2s";
    case ScenarioId::kLM: return "lm";
    case ScenarioId::kLMP: return "lmp";
    case ScenarioId::kCLS: return "cls";
    case ScenarioId::kCLSP: return "clsp";
  }
  return "";
}

std::string_view scenario_display(ScenarioId s) {
  switch (s) {
    case ScenarioId::kQ0S: return "Q-0S";
    case ScenarioId::kQ1S: return "Q-1S";
    case ScenarioId::kQ2S: return "Q-2S";
    case ScenarioId::kLM: return "LM";
    case ScenarioId::kLMP: return "LM-P";
    case ScenarioId::kCLS: return "CLS";
    case ScenarioId::kCLSP: return "CLS-P";
  }
  return "";
}

std::optional<ScenarioId> parse_scenario(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (auto s : kAllScenarios) {
    if (scenario_key(s) == key) return s;
  }
  return std::nullopt;
}

}  // namespace perseval
