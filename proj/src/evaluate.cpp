#include "quakeloc/evaluate.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "quakeloc/error.hpp"

namespace quakeloc {

std::string_view class_name(TokenClass c) {
  switch (c) {
    case TokenClass::kDisaster:
      return "DISASTER";
    case TokenClass::kGpe:
      return "GPE";
    case TokenClass::kO:
      return "O";
  }
  return "O";
}

std::vector<std::pair<Token, TokenClass>> token_labels(const AnnotatedExample& example) {
  std::vector<std::pair<Token, TokenClass>> out;
  for (auto& tok : tokenize(example.text)) {
    TokenClass cls = TokenClass::kO;
    for (const auto& s : example.spans) {
      if (tok.start < s.end && s.start < tok.end) {
        cls = s.label == EntityLabel::kGpe ? TokenClass::kGpe : TokenClass::kDisaster;
        break;
      }
    }
    out.emplace_back(std::move(tok), cls);
  }
  return out;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(TokenClass gold) const {
  std::uint64_t t = 0;
  for (auto c : counts[static_cast<std::size_t>(gold)]) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::column_sum(TokenClass predicted) const {
  std::uint64_t t = 0;
  for (const auto& row : counts) t += row[static_cast<std::size_t>(predicted)];
  return t;
}

ConfusionMatrix confusion(std::span<const AnnotatedExample> gold,
                          std::span<const AnnotatedExample> pred) {
  if (gold.size() != pred.size()) {
    throw Error("gold and prediction sets differ in size (" + std::to_string(gold.size()) + " vs " +
                std::to_string(pred.size()) + ")");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].text != pred[i].text) {
      throw Error("gold/prediction text mismatch at example " + std::to_string(i + 1) + ": \"" +
                  gold[i].text + "\"");
    }
    auto g = token_labels(gold[i]);
    auto p = token_labels(pred[i]);
    for (std::size_t t = 0; t < g.size(); ++t) {
      ++cm.counts[static_cast<std::size_t>(g[t].second)][static_cast<std::size_t>(p[t].second)];
    }
  }
  return cm;
}

ClassReport class_report(const ConfusionMatrix& cm) {
  ClassReport r;
  std::uint64_t trace = 0;
  for (auto c : kAllClasses) {
    auto diag = cm.at(c, c);
    trace += diag;
    auto rows = cm.row_sum(c);
    auto cols = cm.column_sum(c);
    auto& m = r.per_class[static_cast<std::size_t>(c)];
    m.precision = cols ? static_cast<double>(diag) / static_cast<double>(cols) : 0.0;
    m.recall = rows ? static_cast<double>(diag) / static_cast<double>(rows) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    m.support = rows;
  }
  auto total = cm.total();
  r.accuracy = total ? static_cast<double>(trace) / static_cast<double>(total) : 0.0;
  return r;
}

std::string ClassReport::to_text() const {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %9s %9s %9s %9s %9s\n", "Label", "Precision", "Recall",
                "F1-Score", "Support", "Accuracy");
  out += line;
  for (auto c : kAllClasses) {
    const auto& m = (*this)[c];
    // per-label accuracy column is the label's recall
    std::snprintf(line, sizeof line, "%-10s %9.2f %9.2f %9.2f %9llu %9.2f\n",
                  std::string(class_name(c)).c_str(), m.precision, m.recall, m.f1,
                  static_cast<unsigned long long>(m.support), m.recall);
    out += line;
  }
  std::snprintf(line, sizeof line, "\n%-10s %9.4f\n", "accuracy", accuracy);
  out += line;
  return out;
}

std::string ClassReport::to_json() const {
  nlohmann::ordered_json doc;
  for (auto c : kAllClasses) {
    const auto& m = (*this)[c];
    doc[std::string(class_name(c))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  }
  doc["accuracy"] = accuracy;
  return doc.dump(2);
}

double entity_accuracy(std::span<const AnnotatedExample> gold,
                       std::span<const AnnotatedExample> pred, EntityLabel label) {
  if (gold.size() != pred.size()) throw Error("gold and prediction sets differ in size");
  std::size_t total = 0, hit = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].text != pred[i].text) {
      throw Error("gold/prediction text mismatch at example " + std::to_string(i + 1));
    }
    for (const auto& s : gold[i].spans) {
      if (s.label != label) continue;
      ++total;
      hit += std::find(pred[i].spans.begin(), pred[i].spans.end(), s) != pred[i].spans.end();
    }
  }
  return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

}  // namespace quakeloc
