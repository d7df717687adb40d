#include "perseval/metrics/report.h"

#include <fmt/format.h>

#include <algorithm>
#include <map>

#include "perseval/common/error.h"
#include "perseval/metrics/gain.h"

namespace perseval::metrics {

namespace {

constexpr std::pair<ScenarioId, ScenarioId> kGainPairs[] = {
    {ScenarioId::kLM, ScenarioId::kLMP},
    {ScenarioId::kCLS, ScenarioId::kCLSP},
};

std::string pp(double fraction) { return fmt::format("{:.2f}", fraction * 100.0); }

struct DatasetGroup {
  std::string dataset;
  std::vector<const ScoreReport*> reports;
};

std::vector<DatasetGroup> group_by_dataset(std::span<const ScoreReport> reports) {
  std::vector<DatasetGroup> groups;
  for (const auto& r : reports) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const DatasetGroup& g) { return g.dataset == r.dataset; });
    if (it == groups.end()) {
      groups.push_back({r.dataset, {}});
      it = std::prev(groups.end());
    }
    it->reports.push_back(&r);
  }
  return groups;
}

std::vector<ScenarioId> scenarios_present(const DatasetGroup& g) {
  std::vector<ScenarioId> out;
  for (auto s : kAllScenarios) {
    for (const auto* r : g.reports) {
      if (r->find(s)) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

std::string table(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) s += " | ";
      s += c == 0 ? fmt::format("{:<{}}", cells[c], width[c])
                  : fmt::format("{:>{}}", cells[c], width[c]);
    }
    return s + "\n";
  };
  std::string out = line(header);
  std::string rule;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c > 0) rule += "-+-";
    rule += std::string(width[c], '-');
  }
  out += rule + "\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

}  // namespace

const ScenarioScore* ScoreReport::find(ScenarioId s) const {
  for (const auto& sc : scenarios) {
    if (sc.scenario == s) return &sc;
  }
  return nullptr;
}

ScenarioScore score_scenario(ScenarioId scenario, const corpus::AnnotationCorpus& gold,
                             std::span<const parser::PredictionRecord> predictions) {
  const auto joined = join_predictions(gold, predictions);
  const auto f1 = f1_macro(joined.pairs, gold.schema);
  ScenarioScore s;
  s.scenario = scenario;
  s.f1_macro = f1.macro;
  s.f1_macro_excl = f1.macro_excluding_zero_support;
  s.per_label = f1.per_label;
  s.n_records = joined.pairs.size();
  s.n_errors = joined.errored;
  s.n_missing = joined.missing_predictions;
  s.unmatched_rate = joined.pairs.empty() ? 0.0
                                          : static_cast<double>(joined.with_unmatched) /
                                                static_cast<double>(joined.pairs.size());
  return s;
}

std::vector<GainRow> gain_rows(std::span<const ScoreReport> reports) {
  std::vector<GainRow> out;
  for (const auto& r : reports) {
    for (auto [base, pers] : kGainPairs) {
      const auto* b = r.find(base);
      const auto* p = r.find(pers);
      if (!b || !p || !(b->f1_macro > 0.0)) continue;
      out.push_back({r.dataset, r.model_name, base, pers, b->f1_macro, p->f1_macro,
                     gain(p->f1_macro, b->f1_macro)});
    }
  }
  return out;
}

RenderedReport render_report(std::span<const ScoreReport> reports) {
  RenderedReport out;
  out.csv = "dataset,model,scenario,f1_macro_pp,f1_macro_excl_pp,n_records,unmatched_rate\n";
  out.gains_csv = "dataset,model,comparison,baseline_pp,personalized_pp,gain_pct\n";
  OrderedJson json = OrderedJson::array();

  const auto gains = gain_rows(reports);
  for (const auto& g : group_by_dataset(reports)) {
    const auto scenarios = scenarios_present(g);
    std::vector<std::string> header{"model"};
    for (auto s : scenarios) header.emplace_back(scenario_display(s));
    std::vector<std::vector<std::string>> rows;
    for (const auto* r : g.reports) {
      std::vector<std::string> row{r->model_name};
      for (auto s : scenarios) {
        const auto* sc = r->find(s);
        row.push_back(sc ? pp(sc->f1_macro) : "---");
      }
      rows.push_back(std::move(row));
      for (auto s : kAllScenarios) {
        if (const auto* sc = r->find(s)) {
          out.csv += fmt::format("{},{},{},{},{},{},{:.4f}\n", r->dataset, r->model_name,
                                 scenario_key(s), pp(sc->f1_macro), pp(sc->f1_macro_excl),
                                 sc->n_records, sc->unmatched_rate);
        }
      }
      json.push_back(report_to_json(*r));
    }
    out.text += fmt::format("Dataset: {} (F1-macro, percentage points)\n", g.dataset);
    out.text += table(header, rows);

    std::vector<std::vector<std::string>> gain_table;
    for (const auto* r : g.reports) {
      std::vector<std::string> row{r->model_name};
      bool any = false;
      for (auto [base, pers] : kGainPairs) {
        auto it = std::find_if(gains.begin(), gains.end(), [&](const GainRow& gr) {
          return gr.dataset == r->dataset && gr.model == r->model_name && gr.baseline == base;
        });
        if (it != gains.end()) {
          row.push_back(fmt::format("{:.2f}", it->gain_pct));
          any = true;
        } else {
          row.push_back("---");
        }
      }
      if (any) gain_table.push_back(std::move(row));
    }
    if (!gain_table.empty()) {
      out.text += fmt::format("Gain [%] ({})\n", g.dataset);
      out.text += table({"model", "LM vs LM-P", "CLS vs CLS-P"}, gain_table);
    }
    out.text += "\n";
  }
  if (reports.empty()) {
    out.text = table({"model"}, {});
  }
  for (const auto& g : gains) {
    out.gains_csv += fmt::format("{},{},{}_vs_{},{},{},{:.2f}\n", g.dataset, g.model,
                                 scenario_key(g.baseline), scenario_key(g.personalized),
                                 pp(g.baseline_score), pp(g.personalized_score), g.gain_pct);
  }
  OrderedJson doc;
  doc["reports"] = std::move(json);
  OrderedJson gj = OrderedJson::array();
  for (const auto& g : gains) {
    OrderedJson row;
    row["dataset"] = g.dataset;
    row["model"] = g.model;
    row["comparison"] = fmt::format("{}_vs_{}", scenario_key(g.baseline), scenario_key(g.personalized));
    row["baseline_pp"] = std::round(g.baseline_score * 10000.0) / 100.0;
    row["personalized_pp"] = std::round(g.personalized_score * 10000.0) / 100.0;
    row["gain_pct"] = std::round(g.gain_pct * 100.0) / 100.0;
    gj.push_back(std::move(row));
  }
  doc["gains"] = std::move(gj);
  out.json = doc.dump(2) + "\n";
  return out;
}

OrderedJson report_to_json(const ScoreReport& r, const corpus::LabelSchema* schema) {
  OrderedJson j;
  j["dataset"] = r.dataset;
  j["model"] = r.model_name;
  OrderedJson scen = OrderedJson::array();
  for (const auto& s : r.scenarios) {
    OrderedJson e;
    e["scenario"] = std::string(scenario_key(s.scenario));
    e["f1_macro"] = s.f1_macro;
    e["f1_macro_excl"] = s.f1_macro_excl;
    e["f1_macro_pp"] = std::stod(pp(s.f1_macro));
    e["f1_macro_excl_pp"] = std::stod(pp(s.f1_macro_excl));
    e["n_records"] = s.n_records;
    e["unmatched_rate"] = s.unmatched_rate;
    e["n_errors"] = s.n_errors;
    e["n_missing"] = s.n_missing;
    if (schema && s.per_label.size() == schema->size()) e["labels"] = schema->labels();
    e["per_label_f1"] = s.per_label;
    scen.push_back(std::move(e));
  }
  j["scenarios"] = std::move(scen);
  return j;
}

ScoreReport report_from_json(const Json& j) {
  ScoreReport r;
  try {
    r.dataset = j.at("dataset").get<std::string>();
    r.model_name = j.at("model").get<std::string>();
    for (const auto& e : j.at("scenarios")) {
      ScenarioScore s;
      const auto key = e.at("scenario").get<std::string>();
      auto id = parse_scenario(key);
      if (!id) throw DataError("unknown scenario '" + key + "' in score report");
      s.scenario = *id;
      s.f1_macro = e.at("f1_macro").get<double>();
      s.f1_macro_excl = e.value("f1_macro_excl", s.f1_macro);
      s.n_records = e.value("n_records", std::size_t{0});
      s.unmatched_rate = e.value("unmatched_rate", 0.0);
      s.n_errors = e.value("n_errors", std::size_t{0});
      s.n_missing = e.value("n_missing", std::size_t{0});
      s.per_label = e.value("per_label_f1", std::vector<double>{});
      r.scenarios.push_back(std::move(s));
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("invalid score report: ") + e.what());
  }
  return r;
}

}  // namespace perseval::metrics
