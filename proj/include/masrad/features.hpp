#pragma once

// The six per-candidate features and the rank/difference augmentation
// computed within each occurrence.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "masrad/candgen.hpp"
#include "masrad/csv.hpp"
#include "masrad/extract.hpp"
#include "masrad/providers.hpp"
#include "masrad/similarity.hpp"
#include "masrad/soundex.hpp"

namespace masrad {

/// Bits recording which features fell back to their neutral value because a
/// provider was unavailable.
enum MissingFeature : std::uint8_t {
  kMissingSemantic = 1,
  kMissingTransLex = 2,
  kMissingTranslitLex = 4,
  kMissingEntity = 8,
  kMissingPos = 16,
};

struct FeatureVector {
  std::string candidate_id;
  std::string occurrence_id;
  std::string book_id;
  std::size_t word_count = 0;
  bool variant = false;

  double semantic = 0.0;
  double trans_lex = 0.0;
  double translit_lex = 0.0;
  Entity entity = Entity::kNone;
  Entity source_entity = Entity::kNone;
  Pos pos_first = Pos::kMisc;
  bool phonetic = false;

  std::size_t semantic_rank = 0;
  std::size_t trans_lex_rank = 0;
  std::size_t translit_lex_rank = 0;
  double semantic_diff = 0.0;
  double trans_lex_diff = 0.0;
  double translit_lex_diff = 0.0;

  std::optional<bool> label;
  std::uint8_t missing = 0;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

namespace detail {

template <typename Fn>
auto guarded(std::uint8_t& missing, std::uint8_t bit, auto fallback, Fn&& fn) -> decltype(fallback) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kProviderUnavailable) throw;
    missing |= bit;
    return fallback;
  }
}

inline std::string first_word(std::string_view surface) {
  for (const Token& t : tokenize(surface)) {
    if (t.is_word()) return t.text;
  }
  return {};
}

}  // namespace detail

inline void augment(std::vector<FeatureVector>& group);

/// l1: lexical ratio between the machine translation of f and the candidate.
inline double translation_similarity(const Candidate& cand, std::string_view f, ProviderSet& p,
                                     const NormalizationProfile& profile = NormalizationProfile::matching()) {
  return lexical_ratio(normalize_candidate(p.translate(f), profile), cand.normalized);
}

/// l2: lexical ratio between the transliteration of f and the candidate.
inline double transliteration_similarity(const Candidate& cand, std::string_view f,
                                         ProviderSet& p,
                                         const NormalizationProfile& profile = NormalizationProfile::matching()) {
  return lexical_ratio(normalize_candidate(p.transliterate(f), profile), cand.normalized);
}

inline double semantic_similarity(const Candidate& cand, std::string_view f, ProviderSet& p) {
  const auto a = p.embed(f);
  const auto b = p.embed(cand.normalized);
  return clamped_cosine(a, b);
}

struct EntityPair {
  Entity entity = Entity::kNone;
  Entity source_entity = Entity::kNone;
  friend bool operator==(const EntityPair&, const EntityPair&) = default;
};

inline EntityPair entity_feature(const Candidate& cand, std::string_view f, ProviderSet& p,
                                 std::string_view context = {}) {
  return {p.ner(cand.surface, context), p.ner(f, {})};
}

inline Pos pos_first_word(const Candidate& cand, ProviderSet& p, std::string_view context = {}) {
  return p.pos(detail::first_word(cand.surface), context);
}

/// Base features for every candidate of one occurrence, then augmented.
inline std::vector<FeatureVector> compute_features(const Occurrence& occ,
                                                   const std::vector<Candidate>& cands,
                                                   ProviderSet& p,
                                                   const NormalizationProfile& profile = NormalizationProfile::matching()) {
  std::vector<FeatureVector> out;
  out.reserve(cands.size());
  std::uint8_t source_missing = 0;
  const Entity source_entity = detail::guarded(source_missing, kMissingEntity, Entity::kNone,
                                               [&] { return p.ner(occ.foreign_term, {}); });
  for (const Candidate& c : cands) {
    FeatureVector fv;
    fv.candidate_id = c.candidate_id;
    fv.occurrence_id = occ.occurrence_id;
    fv.book_id = occ.book_id;
    fv.word_count = c.word_count;
    fv.variant = c.variant;
    fv.missing = source_missing;
    fv.semantic = detail::guarded(fv.missing, kMissingSemantic, 0.0,
                                  [&] { return semantic_similarity(c, occ.foreign_term, p); });
    fv.trans_lex = detail::guarded(fv.missing, kMissingTransLex, 0.0,
                                   [&] { return translation_similarity(c, occ.foreign_term, p, profile); });
    fv.translit_lex = detail::guarded(fv.missing, kMissingTranslitLex, 0.0, [&] {
      return transliteration_similarity(c, occ.foreign_term, p, profile);
    });
    fv.entity = detail::guarded(fv.missing, kMissingEntity, Entity::kNone,
                                [&] { return p.ner(c.surface, occ.context_text); });
    fv.source_entity = source_entity;
    fv.pos_first = detail::guarded(fv.missing, kMissingPos, Pos::kMisc,
                                   [&] { return pos_first_word(c, p, occ.context_text); });
    fv.phonetic = phonetic_similar(c.surface, occ.foreign_term);
    out.push_back(std::move(fv));
  }
  if (!out.empty()) augment(out);
  return out;
}

namespace detail {

inline void augment_one(std::vector<FeatureVector>& group, double FeatureVector::*value,
                        std::size_t FeatureVector::*rank, double FeatureVector::*diff) {
  std::vector<double> sorted;
  sorted.reserve(group.size());
  for (const auto& fv : group) sorted.push_back(fv.*value);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double max = sorted.front();
  for (auto& fv : group) {
    const auto it = std::find(sorted.begin(), sorted.end(), fv.*value);
    fv.*rank = static_cast<std::size_t>(it - sorted.begin());
    fv.*diff = max - fv.*value;
  }
}

}  // namespace detail

/// Fills x_rank (index of the first equal value in the descending-sorted
/// group, so ties share the smaller rank) and x_diff (group max minus x).
inline void augment(std::vector<FeatureVector>& group) {
  if (group.empty()) throw Error(ErrorCode::kEmptyGroup, "augment of an empty occurrence");
  for (const auto& fv : group) {
    if (fv.occurrence_id != group.front().occurrence_id) {
      throw Error(ErrorCode::kEmptyGroup, "augment group mixes occurrences");
    }
  }
  detail::augment_one(group, &FeatureVector::semantic, &FeatureVector::semantic_rank,
                      &FeatureVector::semantic_diff);
  detail::augment_one(group, &FeatureVector::trans_lex, &FeatureVector::trans_lex_rank,
                      &FeatureVector::trans_lex_diff);
  detail::augment_one(group, &FeatureVector::translit_lex, &FeatureVector::translit_lex_rank,
                      &FeatureVector::translit_lex_diff);
}

/// Splits a flat list into per-occurrence groups, keeping first-seen order.
template <typename T>
std::vector<std::vector<T>> group_by_occurrence(const std::vector<T>& items) {
  std::vector<std::vector<T>> groups;
  std::map<std::string, std::size_t> index;
  for (const T& item : items) {
    auto [it, inserted] = index.try_emplace(item.occurrence_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(item);
  }
  return groups;
}

// ---- training-data CSV ---------------------------------------------------

inline const std::vector<std::string>& feature_csv_columns() {
  static const std::vector<std::string> cols = {
      "candidate_id",      "occurrence_id",  "book_id",           "word_count",
      "variant",           "semantic",       "trans_lex",         "translit_lex",
      "entity",            "source_entity",  "pos_first",         "phonetic",
      "semantic_rank",     "trans_lex_rank", "translit_lex_rank", "semantic_diff",
      "trans_lex_diff",    "translit_lex_diff", "label",          "missing"};
  return cols;
}

inline std::string missing_to_string(std::uint8_t m) {
  static const std::pair<std::uint8_t, const char*> kNames[] = {
      {kMissingSemantic, "semantic"}, {kMissingTransLex, "trans_lex"},
      {kMissingTranslitLex, "translit_lex"}, {kMissingEntity, "entity"}, {kMissingPos, "pos"}};
  std::string out;
  for (const auto& [bit, name] : kNames) {
    if ((m & bit) == 0) continue;
    if (!out.empty()) out.push_back('|');
    out += name;
  }
  return out;
}

inline std::uint8_t missing_from_string(std::string_view s) {
  std::uint8_t m = 0;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t bar = s.find('|', start);
    if (bar == std::string_view::npos) bar = s.size();
    const auto name = s.substr(start, bar - start);
    if (name == "semantic") m |= kMissingSemantic;
    else if (name == "trans_lex") m |= kMissingTransLex;
    else if (name == "translit_lex") m |= kMissingTranslitLex;
    else if (name == "entity") m |= kMissingEntity;
    else if (name == "pos") m |= kMissingPos;
    else throw Error(ErrorCode::kParse, "unknown missing-feature flag '" + std::string(name) + "'");
    start = bar + 1;
  }
  return m;
}

inline std::string features_to_csv(const std::vector<FeatureVector>& rows) {
  std::string out = csv::row(feature_csv_columns());
  for (const auto& fv : rows) {
    out += csv::row({fv.candidate_id, fv.occurrence_id, fv.book_id, std::to_string(fv.word_count),
                     fv.variant ? "1" : "0", format_double(fv.semantic),
                     format_double(fv.trans_lex), format_double(fv.translit_lex),
                     std::string(entity_name(fv.entity)), std::string(entity_name(fv.source_entity)),
                     std::string(pos_name(fv.pos_first)), fv.phonetic ? "1" : "0",
                     std::to_string(fv.semantic_rank), std::to_string(fv.trans_lex_rank),
                     std::to_string(fv.translit_lex_rank), format_double(fv.semantic_diff),
                     format_double(fv.trans_lex_diff), format_double(fv.translit_lex_diff),
                     fv.label ? (*fv.label ? "true" : "false") : "",
                     missing_to_string(fv.missing)});
  }
  return out;
}

inline std::vector<FeatureVector> features_from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows.front() != feature_csv_columns()) {
    throw Error(ErrorCode::kSchemaMismatch, "features CSV header does not match the schema");
  }
  std::vector<FeatureVector> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != feature_csv_columns().size()) {
      throw Error(ErrorCode::kParse, "features CSV row " + std::to_string(r) + " has wrong width");
    }
    FeatureVector fv;
    fv.candidate_id = f[0];
    fv.occurrence_id = f[1];
    fv.book_id = f[2];
    fv.word_count = static_cast<std::size_t>(parse_int(f[3]));
    fv.variant = f[4] == "1";
    fv.semantic = parse_double(f[5]);
    fv.trans_lex = parse_double(f[6]);
    fv.translit_lex = parse_double(f[7]);
    fv.entity = parse_entity(f[8]);
    fv.source_entity = parse_entity(f[9]);
    fv.pos_first = parse_pos(f[10]);
    fv.phonetic = f[11] == "1";
    fv.semantic_rank = static_cast<std::size_t>(parse_int(f[12]));
    fv.trans_lex_rank = static_cast<std::size_t>(parse_int(f[13]));
    fv.translit_lex_rank = static_cast<std::size_t>(parse_int(f[14]));
    fv.semantic_diff = parse_double(f[15]);
    fv.trans_lex_diff = parse_double(f[16]);
    fv.translit_lex_diff = parse_double(f[17]);
    if (f[18] == "true") fv.label = true;
    else if (f[18] == "false") fv.label = false;
    else if (!f[18].empty()) throw Error(ErrorCode::kParse, "bad label '" + f[18] + "'");
    fv.missing = missing_from_string(f[19]);
    out.push_back(std::move(fv));
  }
  return out;
}

}  // namespace masrad
