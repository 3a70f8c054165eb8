#pragma once

// Fixed-width numeric encoding of a FeatureVector.
//
// Column order (schema "masrad-features/1", 30 columns):
//   0-2   semantic, trans_lex, translit_lex
//   3-5   semantic_rank, trans_lex_rank, translit_lex_rank
//   6-8   semantic_diff, trans_lex_diff, translit_lex_diff
//   9-13  entity one-hot         PER LOC ORG MISC None
//   14-18 source_entity one-hot  PER LOC ORG MISC None
//   19-28 pos_first one-hot      adj adv conj misc noun noun_prop part prep pron verb
//   29    phonetic (0/1)

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "masrad/error.hpp"
#include "masrad/features.hpp"

namespace masrad {

inline constexpr std::string_view kSchemaVersion = "masrad-features/1";
inline constexpr std::size_t kEncodedWidth = 30;

struct EncodedInstance {
  std::vector<double> values;
  std::optional<bool> label;
  std::string occurrence_id;
  std::string candidate_id;
  std::string book_id;
  std::size_t word_count = 0;
};

inline const std::vector<std::string>& encoded_column_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"semantic",          "trans_lex",      "translit_lex",
                                  "semantic_rank",     "trans_lex_rank", "translit_lex_rank",
                                  "semantic_diff",     "trans_lex_diff", "translit_lex_diff"};
    for (Entity e : kAllEntities) n.push_back("entity=" + std::string(entity_name(e)));
    for (Entity e : kAllEntities) n.push_back("source_entity=" + std::string(entity_name(e)));
    for (Pos p : kAllPos) n.push_back("pos_first=" + std::string(pos_name(p)));
    n.push_back("phonetic");
    return n;
  }();
  return names;
}

inline EncodedInstance encode(const FeatureVector& fv) {
  EncodedInstance inst;
  inst.label = fv.label;
  inst.occurrence_id = fv.occurrence_id;
  inst.candidate_id = fv.candidate_id;
  inst.book_id = fv.book_id;
  inst.word_count = fv.word_count;

  auto& v = inst.values;
  v.reserve(kEncodedWidth);
  v.insert(v.end(), {fv.semantic, fv.trans_lex, fv.translit_lex,
                     static_cast<double>(fv.semantic_rank), static_cast<double>(fv.trans_lex_rank),
                     static_cast<double>(fv.translit_lex_rank), fv.semantic_diff,
                     fv.trans_lex_diff, fv.translit_lex_diff});
  auto one_hot = [&](auto value, const auto& all) {
    bool hit = false;
    for (const auto& candidate : all) {
      const bool on = candidate == value;
      hit = hit || on;
      v.push_back(on ? 1.0 : 0.0);
    }
    if (!hit) throw Error(ErrorCode::kUnknownCategory, "value outside the encoding schema");
  };
  one_hot(fv.entity, kAllEntities);
  one_hot(fv.source_entity, kAllEntities);
  one_hot(fv.pos_first, kAllPos);
  v.push_back(fv.phonetic ? 1.0 : 0.0);
  return inst;
}

inline std::vector<EncodedInstance> encode_all(const std::vector<FeatureVector>& fvs) {
  std::vector<EncodedInstance> out;
  out.reserve(fvs.size());
  for (const auto& fv : fvs) out.push_back(encode(fv));
  return out;
}

}  // namespace masrad
