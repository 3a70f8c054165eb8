#pragma once

// Precision/recall reports, book-level splits, glossary top-k accuracy and
// cross-occurrence aggregation of suggestions.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "masrad/csv.hpp"
#include "masrad/error.hpp"
#include "masrad/textnorm.hpp"

namespace masrad {

enum class EvalMode { kClassification, kSelection };

inline std::string_view eval_mode_name(EvalMode m) {
  return m == EvalMode::kClassification ? "classification" : "selection";
}

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Confusion counts;
  /// Set when precision (no predicted positives) or recall (no actual
  /// positives) had a zero denominator and was reported as 0.
  bool degenerate_precision = false;
  bool degenerate_recall = false;
};

inline Prf prf_from_counts(const Confusion& c) {
  Prf r;
  r.counts = c;
  if (c.tp + c.fp == 0) {
    r.degenerate_precision = true;
  } else {
    r.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn == 0) {
    r.degenerate_recall = true;
  } else {
    r.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

inline Prf prf(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                                std::to_string(labels.size()) + " labels");
  }
  if (predictions.empty()) throw Error(ErrorCode::kLengthMismatch, "nothing to evaluate");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i]) {
      labels[i] ? ++c.tp : ++c.fp;
    } else {
      labels[i] ? ++c.fn : ++c.tn;
    }
  }
  return prf_from_counts(c);
}

struct EvaluationReport {
  EvalMode mode = EvalMode::kClassification;
  Prf overall;
  std::map<std::string, Prf> per_book;
};

inline EvaluationReport evaluate(const std::vector<bool>& predictions,
                                 const std::vector<bool>& labels,
                                 const std::vector<std::string>& books, EvalMode mode) {
  if (books.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "book list length differs from labels");
  }
  EvaluationReport r;
  r.mode = mode;
  r.overall = prf(predictions, labels);
  std::map<std::string, std::pair<std::vector<bool>, std::vector<bool>>> by_book;
  for (std::size_t i = 0; i < books.size(); ++i) {
    by_book[books[i]].first.push_back(predictions[i]);
    by_book[books[i]].second.push_back(labels[i]);
  }
  for (const auto& [book, pl] : by_book) r.per_book[book] = prf(pl.first, pl.second);
  return r;
}

inline std::string render_report(const EvaluationReport& r) {
  auto pct = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", v * 100.0);
    return std::string(buf);
  };
  std::string out = "mode: " + std::string(eval_mode_name(r.mode)) + "\n";
  auto line = [&](const std::string& name, const Prf& p) {
    out += name + "  P=" + pct(p.precision) + " R=" + pct(p.recall) + " F1=" + pct(p.f1) +
           "  (tp=" + std::to_string(p.counts.tp) + " fp=" + std::to_string(p.counts.fp) +
           " fn=" + std::to_string(p.counts.fn) + " tn=" + std::to_string(p.counts.tn) + ")\n";
  };
  line("overall", r.overall);
  for (const auto& [book, p] : r.per_book) line("  " + book, p);
  return out;
}

template <typename T>
struct BookSplit {
  std::vector<T> train;
  std::vector<T> test;
  std::size_t excluded = 0;
};

/// Assigns each instance by its `book_id` member; unlisted books are
/// excluded and counted.
template <typename T>
BookSplit<T> book_split(const std::vector<T>& instances, const std::set<std::string>& train_books,
                        const std::set<std::string>& test_books) {
  for (const auto& b : train_books) {
    if (test_books.count(b) != 0) {
      throw Error(ErrorCode::kOverlappingSets, "book '" + b + "' is in both train and test");
    }
  }
  BookSplit<T> split;
  for (const T& inst : instances) {
    if (train_books.count(inst.book_id) != 0) split.train.push_back(inst);
    else if (test_books.count(inst.book_id) != 0) split.test.push_back(inst);
    else ++split.excluded;
  }
  return split;
}

/// One occurrence's candidates with their scores.
struct OccurrenceRanking {
  std::string occurrence_id;
  std::vector<std::pair<std::string, double>> candidates;  // (arabic surface, score)
};

struct Suggestion {
  std::string arabic_term;
  double aggregate_score = 0.0;
  std::size_t occurrences = 0;
};

/// Groups surfaces across occurrences by their normalized Arabic key and
/// sums scores. The displayed surface is the most frequent spelling (ties:
/// smallest). Order: score descending, then surface.
inline std::vector<Suggestion> aggregate_suggestions(const std::vector<OccurrenceRanking>& rankings) {
  struct Acc {
    double score = 0.0;
    std::set<std::string> occurrences;
    std::map<std::string, std::size_t> spellings;
  };
  std::map<std::string, Acc> groups;
  for (const auto& r : rankings) {
    for (const auto& [surface, score] : r.candidates) {
      auto& acc = groups[arabic_term_key(surface)];
      acc.score += score;
      acc.occurrences.insert(r.occurrence_id);
      ++acc.spellings[surface];
    }
  }
  std::vector<Suggestion> out;
  for (const auto& [key, acc] : groups) {
    const auto best = std::max_element(
        acc.spellings.begin(), acc.spellings.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    out.push_back({best->first, acc.score, acc.occurrences.size()});
  }
  std::sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
    if (a.aggregate_score != b.aggregate_score) return a.aggregate_score > b.aggregate_score;
    return a.arabic_term < b.arabic_term;
  });
  return out;
}

struct GlossaryConcept {
  std::string english;
  std::string french;
  std::string arabic;
};

/// CSV with header english,french,arabic.
inline std::vector<GlossaryConcept> parse_glossary_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows.front() != std::vector<std::string>{"english", "french", "arabic"}) {
    throw Error(ErrorCode::kParse, "glossary header must be english,french,arabic");
  }
  std::vector<GlossaryConcept> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 3) throw Error(ErrorCode::kParse, "glossary row " + std::to_string(i) + " needs 3 fields");
    GlossaryConcept c{r[0], r[1], r[2]};
    if ((c.english.empty() && c.french.empty()) || c.arabic.empty()) {
      throw Error(ErrorCode::kParse, "glossary row " + std::to_string(i) + " is incomplete");
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct TopKResult {
  std::size_t k = 1;
  std::size_t matched = 0;
  std::size_t hits = 0;
  double accuracy = 0.0;
};

/// `suggestions` maps foreign_match_key(term) to its aggregated, ordered
/// Arabic suggestions. Only concepts whose English or French term was
/// extracted count; accuracy is hits / matched (0 when nothing matched).
inline TopKResult topk_accuracy(const std::vector<GlossaryConcept>& glossary,
                                const std::map<std::string, std::vector<Suggestion>>& suggestions,
                                std::size_t k) {
  if (glossary.empty()) throw Error(ErrorCode::kEmptyGlossary, "glossary has no concepts");
  if (k == 0) throw Error(ErrorCode::kUsage, "k must be at least 1");
  TopKResult r;
  r.k = k;
  for (const auto& c : glossary) {
    const std::string expert = arabic_term_key(c.arabic);
    bool matched = false;
    bool hit = false;
    for (const std::string* term : {&c.english, &c.french}) {
      if (term->empty()) continue;
      auto it = suggestions.find(foreign_match_key(*term));
      if (it == suggestions.end()) continue;
      matched = true;
      const std::size_t n = std::min(k, it->second.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (arabic_term_key(it->second[i].arabic_term) == expert) hit = true;
      }
    }
    r.matched += matched ? 1 : 0;
    r.hits += hit ? 1 : 0;
  }
  if (r.matched > 0) r.accuracy = static_cast<double>(r.hits) / static_cast<double>(r.matched);
  return r;
}

}  // namespace masrad
