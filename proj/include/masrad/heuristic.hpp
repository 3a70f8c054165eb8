#pragma once

// Hand-tuned additive score and per-occurrence argmax selection.
//
//   total = S_L + S_S + S_E + S_P + S_POS
//   S_L   = [l1 >= tau] * 1.2 * l1 + [l2 >= tau] * l2      (tau = 0.7)
//   S_S   = 1.45 * semantic
//   S_E   = 0.7 same non-None entity, 0.3 different non-None entity, else 0
//   S_P   = 1 if phonetically similar
//   S_POS = -1 for verb/prep/conj, +1 for noun/noun_prop, else 0

#include <algorithm>
#include <string>
#include <vector>

#include "masrad/error.hpp"
#include "masrad/features.hpp"

namespace masrad {

struct HeuristicWeights {
  double tau = 0.7;
  double translation = 1.2;
  double transliteration = 1.0;
  double semantic = 1.45;
  double entity_match = 0.7;
  double entity_mismatch = 0.3;
  double phonetic = 1.0;
  double pos_penalty = -1.0;
  double pos_bonus = 1.0;
};

inline constexpr double kHeuristicMin = -1.0;
inline constexpr double kHeuristicMax = 6.35;

struct HeuristicScore {
  std::string candidate_id;
  std::string occurrence_id;
  std::size_t word_count = 0;
  double s_l = 0.0;
  double s_s = 0.0;
  double s_e = 0.0;
  double s_p = 0.0;
  double s_pos = 0.0;
  double total = 0.0;
  /// False when some feature fell back to a neutral value.
  bool complete = true;
};

inline HeuristicScore heuristic_score(const FeatureVector& fv, const HeuristicWeights& w = {}) {
  HeuristicScore s;
  s.candidate_id = fv.candidate_id;
  s.occurrence_id = fv.occurrence_id;
  s.word_count = fv.word_count;
  s.complete = fv.missing == 0;
  s.s_l = (fv.trans_lex >= w.tau ? w.translation * fv.trans_lex : 0.0) +
          (fv.translit_lex >= w.tau ? w.transliteration * fv.translit_lex : 0.0);
  s.s_s = w.semantic * fv.semantic;
  if (fv.entity != Entity::kNone) {
    s.s_e = fv.entity == fv.source_entity ? w.entity_match : w.entity_mismatch;
  }
  s.s_p = fv.phonetic ? w.phonetic : 0.0;
  switch (fv.pos_first) {
    case Pos::kVerb:
    case Pos::kPrep:
    case Pos::kConj:
      s.s_pos = w.pos_penalty;
      break;
    case Pos::kNoun:
    case Pos::kNounProp:
      s.s_pos = w.pos_bonus;
      break;
    default:
      break;
  }
  s.total = s.s_l + s.s_s + s.s_e + s.s_p + s.s_pos;
  return s;
}

/// Strict ordering used for every per-occurrence selection: higher score,
/// then fewer words, then smaller candidate_id.
inline bool better_candidate(double score_a, std::size_t words_a, const std::string& id_a,
                             double score_b, std::size_t words_b, const std::string& id_b) {
  if (score_a != score_b) return score_a > score_b;
  if (words_a != words_b) return words_a < words_b;
  return id_a < id_b;
}

inline const HeuristicScore& select_by_heuristic(const std::vector<HeuristicScore>& scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyGroup, "no candidates to select from");
  const HeuristicScore* best = &scores.front();
  for (const HeuristicScore& s : scores) {
    if (better_candidate(s.total, s.word_count, s.candidate_id, best->total, best->word_count,
                         best->candidate_id)) {
      best = &s;
    }
  }
  return *best;
}

}  // namespace masrad
