#include "perseval/parser/response_parser.h"

#include <algorithm>

#include "perseval/common/error.h"

namespace perseval::parser {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Removes one leading list marker; returns true if something was removed.
bool strip_marker(std::string& s) {
  if (s.empty()) return false;
  if (s[0] == '-' || s[0] == '*') {
    s.erase(0, 1);
    return true;
  }
  std::size_t digits = 0;
  while (digits < s.size() && s[digits] >= '0' && s[digits] <= '9') ++digits;
  if (digits > 0 && digits < s.size() && s[digits] == '.') {
    s.erase(0, digits + 1);
    return true;
  }
  return false;
}

bool strip_trailing(std::string& s) {
  if (!s.empty() && (s.back() == '.' || s.back() == ';')) {
    s.pop_back();
    return true;
  }
  return false;
}

void trim_in_place(std::string& s) {
  const auto t = trim(s);
  s = std::string(t);
}

}  // namespace

std::string normalize_token(std::string_view raw) {
  std::string s = corpus::canonical_label(raw);
  for (bool changed = true; changed;) {
    changed = false;
    if (strip_marker(s)) {
      trim_in_place(s);
      changed = true;
    }
    if (strip_trailing(s)) {
      trim_in_place(s);
      changed = true;
    }
  }
  return s;
}

ParseResult parse_label_list(std::string_view raw, const LabelSchema& schema) {
  ParseResult result;
  bool clean = true;
  bool any_piece = false;

  auto handle_piece = [&](std::string_view piece, bool from_newline) {
    const std::string_view trimmed = trim(piece);
    if (trimmed.empty()) {
      clean = false;
      return;
    }
    any_piece = true;
    if (from_newline) clean = false;
    if (clean && !schema.index_of(trimmed)) clean = false;

    std::string token = normalize_token(trimmed);
    if (token.empty()) return;
    if (auto idx = schema.index_of(token)) {
      result.labels.insert(*idx);
      return;
    }
    clean = false;
    if (const auto colon = token.rfind(':'); colon != std::string::npos) {
      std::string tail = normalize_token(std::string_view(token).substr(colon + 1));
      if (!tail.empty()) {
        token = std::move(tail);
        if (auto idx = schema.index_of(token)) {
          result.labels.insert(*idx);
          return;
        }
      }
    }
    std::size_t best = 0;
    std::optional<std::size_t> best_idx;
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const auto& label = schema.labels()[i];
      if (label.size() > best && token.size() > label.size() + 1 &&
          token.compare(0, label.size(), label) == 0 && token[label.size()] == ' ') {
        best = label.size();
        best_idx = i;
      }
    }
    if (best_idx) {
      result.labels.insert(*best_idx);
      result.unmatched.emplace_back(trim(std::string_view(token).substr(best + 1)));
      return;
    }
    result.unmatched.emplace_back(trimmed);
  };

  std::size_t start = 0;
  bool prev_newline = false;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] == ',' || raw[i] == '\n') {
      handle_piece(raw.substr(start, i - start), prev_newline);
      prev_newline = i < raw.size() && raw[i] == '\n';
      start = i + 1;
    }
  }

  // A label that was recognised elsewhere must not also be reported unmatched.
  std::erase_if(result.unmatched, [&](const std::string& u) {
    auto idx = schema.index_of(normalize_token(u));
    return idx && result.labels.contains(*idx);
  });
  result.exact = clean && any_piece && result.unmatched.empty();
  return result;
}

std::string serialize_labels(const LabelSet& labels, const LabelSchema& schema) {
  std::string out;
  for (auto i : labels.indices()) {
    if (i >= schema.size()) {
      throw SerializationError("label index " + std::to_string(i) + " is outside schema '" +
                               schema.dataset_name() + "'");
    }
    if (!out.empty()) out += ", ";
    out += schema.labels()[i];
  }
  return out;
}

}  // namespace perseval::parser
