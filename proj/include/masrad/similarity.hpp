#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "masrad/error.hpp"
#include "masrad/utf8.hpp"

namespace masrad {

/// Unit-cost edit distance over Unicode scalar values.
inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(utf8::decode(a), utf8::decode(b));
}

/// (len(t) + len(s) - d) / (len(t) + len(s)); lengths count scalar values,
/// spaces included.
inline double lexical_ratio(std::string_view t, std::string_view s) {
  const auto tu = utf8::decode(t);
  const auto su = utf8::decode(s);
  const std::size_t total = tu.size() + su.size();
  if (total == 0) throw Error(ErrorCode::kBothEmpty, "lexical_ratio of two empty strings");
  const std::size_t d = levenshtein(tu, su);
  return static_cast<double>(total - d) / static_cast<double>(total);
}

/// Cosine similarity clamped to [0, 1]. Zero vectors give 0.
inline double clamped_cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "embedding dimensions differ");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace masrad
