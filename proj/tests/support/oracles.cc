#include "oracles.h"

#include <algorithm>
#include <regex>
#include <sstream>

namespace perseval::oracle {

F1Reference brute_force_f1(const std::vector<StringSet>& gold, const std::vector<StringSet>& pred,
                           const std::vector<std::string>& labels) {
  F1Reference out;
  double sum = 0.0;
  double sum_supported = 0.0;
  int supported = 0;
  for (const auto& label : labels) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t r = 0; r < gold.size(); ++r) {
      const bool g = gold[r].count(label) > 0;
      const bool p = pred[r].count(label) > 0;
      if (g && p) ++tp;
      if (!g && p) ++fp;
      if (g && !p) ++fn;
    }
    const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
    const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    const double f1 = precision + recall == 0 ? 0.0 : 2 * precision * recall / (precision + recall);
    out.per_label.push_back(f1);
    sum += f1;
    if (tp + fn > 0) {
      sum_supported += f1;
      ++supported;
    }
  }
  out.macro = labels.empty() ? 0.0 : sum / static_cast<double>(labels.size());
  out.macro_excl = supported == 0 ? 0.0 : sum_supported / supported;
  return out;
}

StringSet filter_survivors(const std::vector<corpus::AnnotationRecord>& records, std::int64_t num,
                           std::int64_t den) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& r : records) counts[r.annotator_id]++;
  std::int64_t max_count = 0;
  for (const auto& [a, c] : counts) max_count = std::max(max_count, c);
  StringSet out;
  for (const auto& [a, c] : counts) {
    if (!(c * den < num * max_count)) out.insert(a);
  }
  return out;
}

StringSet annotators_of(const std::vector<corpus::AnnotationRecord>& records) {
  StringSet s;
  for (const auto& r : records) s.insert(r.annotator_id);
  return s;
}

StringSet text_ids_of(const std::vector<corpus::AnnotationRecord>& records) {
  StringSet s;
  for (const auto& r : records) s.insert(r.text_id);
  return s;
}

corpus::AnnotationCorpus random_corpus(std::mt19937_64& rng, const corpus::LabelSchema& schema,
                                       int max_texts, int max_annotators) {
  std::uniform_int_distribution<int> n_texts_d(3, max_texts);
  std::uniform_int_distribution<int> n_ann_d(1, max_annotators);
  const int n_texts = n_texts_d(rng);
  const int n_ann = n_ann_d(rng);
  std::vector<double> activity(n_ann);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& a : activity) {
    const double x = u(rng);
    a = x * x * x;  // heavy skew: a few busy annotators, many sparse ones
  }
  corpus::AnnotationCorpus c{schema, {}, {}};
  for (int t = 0; t < n_texts; ++t) {
    for (int a = 0; a < n_ann; ++a) {
      if (u(rng) >= activity[a]) continue;
      corpus::AnnotationRecord r{"t" + std::to_string(t), "text number " + std::to_string(t),
                                 "a" + std::to_string(a), {}};
      r.labels.insert(std::uniform_int_distribution<std::size_t>(0, schema.size() - 1)(rng));
      c.records.push_back(std::move(r));
    }
  }
  return c;
}

namespace {

std::string lower_collapse(const std::string& raw) {
  std::istringstream in(raw);
  std::string word, out;
  while (in >> word) {
    if (!out.empty()) out += ' ';
    for (char ch : word) out += (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch + 32) : ch;
  }
  return out;
}

}  // namespace

std::string reference_normalize(const std::string& raw) {
  static const std::regex lead(R"(^(-|\*|[0-9]+\.)[ \t\n\r\v\f]*)");
  static const std::regex tail(R"([ \t\n\r\v\f]*[.;]$)");
  std::string s = lower_collapse(raw);
  for (;;) {
    std::string next = std::regex_replace(s, lead, "", std::regex_constants::format_first_only);
    next = lower_collapse(std::regex_replace(next, tail, ""));
    if (next == s) return s;
    s = next;
  }
}

ParseReference reference_parse(const std::string& raw, const std::vector<std::string>& labels) {
  ParseReference out;
  const StringSet label_set(labels.begin(), labels.end());
  std::vector<std::string> pieces;
  std::string cur;
  for (char ch : raw) {
    if (ch == ',' || ch == '\n') {
      pieces.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  pieces.push_back(cur);

  for (const auto& piece : pieces) {
    std::string token = reference_normalize(piece);
    if (token.empty()) continue;
    if (label_set.count(token)) {
      out.labels.insert(token);
      continue;
    }
    if (const auto colon = token.rfind(':'); colon != std::string::npos) {
      const std::string after = reference_normalize(token.substr(colon + 1));
      if (!after.empty()) {
        token = after;
        if (label_set.count(token)) {
          out.labels.insert(token);
          continue;
        }
      }
    }
    std::string best;
    for (const auto& l : labels) {
      if (token.size() > l.size() + 1 && token.rfind(l + " ", 0) == 0 && l.size() > best.size()) {
        best = l;
      }
    }
    if (!best.empty()) {
      out.labels.insert(best);
      out.unmatched.push_back(lower_collapse(token.substr(best.size() + 1)));
      continue;
    }
    // Unmatched pieces are reported with surrounding whitespace removed only.
    const auto first = piece.find_first_not_of(" \t\n\r\v\f");
    const auto last = piece.find_last_not_of(" \t\n\r\v\f");
    out.unmatched.push_back(piece.substr(first, last - first + 1));
  }
  std::erase_if(out.unmatched, [&](const std::string& u) {
    const auto n = reference_normalize(u);
    return out.labels.count(n) > 0;
  });
  return out;
}

}  // namespace perseval::oracle
