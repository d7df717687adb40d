#include "perseval/promptgen/template.h"

#include <set>

#include "perseval/common/error.h"
#include "perseval/common/jsonl.h"

namespace perseval::promptgen {

namespace {

// Calls on_text / on_placeholder for consecutive pieces of the template.
template <typename TextFn, typename SlotFn>
void scan(std::string_view tmpl, TextFn on_text, SlotFn on_placeholder) {
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find('<', pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find_first_of("<>\n", open + 1);
    if (close == std::string_view::npos || tmpl[close] != '>' || close == open + 1) {
      on_text(tmpl.substr(pos, open + 1 - pos));
      pos = open + 1;
      continue;
    }
    on_text(tmpl.substr(pos, open - pos));
    on_placeholder(tmpl.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
  on_text(tmpl.substr(pos));
}

}  // namespace

std::vector<std::string> template_placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  scan(tmpl, [](std::string_view) {}, [&](std::string_view name) { out.emplace_back(name); });
  return out;
}

std::string render_template(std::string_view tmpl, const SlotMap& slots) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::set<std::string_view> used;
  scan(
      tmpl, [&](std::string_view text) { out.append(text); },
      [&](std::string_view name) {
        auto it = slots.find(name);
        if (it == slots.end()) throw RenderError("no value for placeholder <" + std::string(name) + ">");
        used.insert(it->first);
        out.append(it->second);
      });
  for (const auto& [name, _] : slots) {
    if (!used.contains(name)) throw RenderError("slot <" + name + "> is not used by the template");
  }
  return out;
}

TemplateSet TemplateSet::load(const std::filesystem::path& root, const std::string& dataset) {
  TemplateSet set;
  set.dataset_ = dataset;
  for (auto s : kAllScenarios) {
    const auto path = root / dataset / (std::string(scenario_key(s)) + ".txt");
    if (!std::filesystem::exists(path)) {
      throw ConfigError("missing prompt template " + path.string());
    }
    set.templates_[static_cast<std::size_t>(s)] = read_file(path);
  }
  return set;
}

}  // namespace perseval::promptgen
