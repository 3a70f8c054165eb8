#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "masrad/features.hpp"
#include "test_util.hpp"

namespace masrad {
namespace {

class ConstMapper : public TextMapper {
 public:
  explicit ConstMapper(std::string out) : out_(std::move(out)) {}
  std::string map(std::string_view) override { return out_; }

 private:
  std::string out_;
};

Candidate candidate(const std::string& surface, const std::string& id = "o#1") {
  Candidate c;
  c.candidate_id = id;
  c.occurrence_id = "o";
  c.surface = surface;
  c.normalized = normalize_candidate(surface);
  c.word_count = 1;
  return c;
}

FeatureVector with_values(double s, double l1, double l2) {
  FeatureVector fv;
  fv.occurrence_id = "o";
  fv.semantic = s;
  fv.trans_lex = l1;
  fv.translit_lex = l2;
  return fv;
}

std::vector<FeatureVector> group_of(const std::vector<double>& values) {
  std::vector<FeatureVector> g;
  for (double v : values) g.push_back(with_values(v, v, v));
  return g;
}

TEST(Augment, DistinctValues) {
  auto g = group_of({0.8, 0.5, 0.3});
  augment(g);
  EXPECT_EQ(g[0].semantic_rank, 0u);
  EXPECT_EQ(g[1].semantic_rank, 1u);
  EXPECT_EQ(g[2].semantic_rank, 2u);
  EXPECT_DOUBLE_EQ(g[0].semantic_diff, 0.0);
  EXPECT_DOUBLE_EQ(g[1].semantic_diff, 0.3);
  EXPECT_DOUBLE_EQ(g[2].semantic_diff, 0.5);
}

TEST(Augment, TiesShareSmallerRank) {
  auto g = group_of({0.9, 0.4, 0.9});
  augment(g);
  EXPECT_EQ(g[0].trans_lex_rank, 0u);
  EXPECT_EQ(g[1].trans_lex_rank, 2u);
  EXPECT_EQ(g[2].trans_lex_rank, 0u);
  EXPECT_DOUBLE_EQ(g[1].trans_lex_diff, 0.5);
  EXPECT_DOUBLE_EQ(g[2].trans_lex_diff, 0.0);
}

TEST(Augment, SingleAndEmpty) {
  auto g = group_of({0.42});
  augment(g);
  EXPECT_EQ(g[0].translit_lex_rank, 0u);
  EXPECT_DOUBLE_EQ(g[0].translit_lex_diff, 0.0);
  std::vector<FeatureVector> empty;
  EXPECT_MASRAD_ERROR(augment(empty), ErrorCode::kEmptyGroup);
  auto mixed = group_of({0.1, 0.2});
  mixed[1].occurrence_id = "other";
  EXPECT_MASRAD_ERROR(augment(mixed), ErrorCode::kEmptyGroup);
}

// rank = number of strictly greater values; diff = max - x.
TEST(Augment, MatchesCountingOracle) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<FeatureVector> g;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid so ties are common.
      g.push_back(with_values((rng() % 5) / 4.0, (rng() % 3) / 2.0, (rng() % 11) / 10.0));
    }
    auto augmented = g;
    augment(augmented);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t greater_s = 0, greater_t = 0, greater_l = 0;
      double max_s = 0, max_t = 0, max_l = 0;
      for (const auto& o : g) {
        greater_s += o.semantic > g[i].semantic;
        greater_t += o.trans_lex > g[i].trans_lex;
        greater_l += o.translit_lex > g[i].translit_lex;
        max_s = std::max(max_s, o.semantic);
        max_t = std::max(max_t, o.trans_lex);
        max_l = std::max(max_l, o.translit_lex);
      }
      ASSERT_EQ(augmented[i].semantic_rank, greater_s);
      ASSERT_EQ(augmented[i].trans_lex_rank, greater_t);
      ASSERT_EQ(augmented[i].translit_lex_rank, greater_l);
      ASSERT_EQ(augmented[i].semantic_diff, max_s - g[i].semantic);
      ASSERT_EQ(augmented[i].trans_lex_diff, max_t - g[i].trans_lex);
      ASSERT_EQ(augmented[i].translit_lex_diff, max_l - g[i].translit_lex);
      ASSERT_GE(augmented[i].semantic_diff, 0.0);
    }
  }
}

TEST(LexicalFeatures, TranslationAndTransliteration) {
  LookupTable tr;
  tr.insert("London School of Economics and Political Science", "كلية لندن للاقتصاد والعلوم السياسية");
  LookupTable tl;
  tl.insert("Ehud Prawer", "ايهود براور");
  ProviderSet p(nullptr, std::make_shared<TableMapper>(tr), std::make_shared<TableMapper>(tl), nullptr,
                nullptr);
  const auto london = candidate("كلية لندن للعلوم الاقتصادية والسياسية");
  EXPECT_NEAR(translation_similarity(london, "London School of Economics and Political Science", p), 0.79, 0.005);
  const auto ehud = candidate("إيهود براور");
  EXPECT_NEAR(transliteration_similarity(ehud, "Ehud Prawer", p), 0.95, 0.005);
  EXPECT_DOUBLE_EQ(transliteration_similarity(candidate("ايهود براور"), "Ehud Prawer", p), 1.0);
  EXPECT_MASRAD_ERROR(translation_similarity(london, "Boeing", p), ErrorCode::kProviderUnavailable);
}

TEST(LexicalFeatures, EmptyTranslationScoresZero) {
  ProviderSet p(nullptr, std::make_shared<ConstMapper>(""), nullptr, nullptr, nullptr);
  EXPECT_DOUBLE_EQ(translation_similarity(candidate("الإثنية"), "x", p), 0.0);
}

TEST(LexicalFeatures, DisjointAlphabetsHalf) {
  ProviderSet p(nullptr, nullptr, std::make_shared<ConstMapper>("بببب"), nullptr, nullptr);
  EXPECT_DOUBLE_EQ(transliteration_similarity(candidate("سسسس"), "x", p), 0.5);
}

TEST(EntityFeature, Tables) {
  LookupTable ner;
  ner.insert("هيرزبرغ", "PER");
  ner.insert("Anne Herzberg", "PER");
  ner.insert("بوينغ", "ORG");
  ProviderSet p(nullptr, nullptr, nullptr, std::make_shared<TableEntityTagger>(ner), nullptr);
  EXPECT_EQ(entity_feature(candidate("هيرزبرغ"), "Anne Herzberg", p), (EntityPair{Entity::kPER, Entity::kPER}));
  EXPECT_EQ(entity_feature(candidate("بوينغ"), "Anne Herzberg", p), (EntityPair{Entity::kORG, Entity::kPER}));
  ProviderSet empty(nullptr, nullptr, nullptr, std::make_shared<TableEntityTagger>(), nullptr);
  EXPECT_EQ(entity_feature(candidate("هيرزبرغ"), "Anne Herzberg", empty), (EntityPair{}));
}

TEST(PosFeature, FirstWordInReadingOrder) {
  LookupTable pos;
  pos.insert("انتقد", "verb");
  pos.insert("الإثنية", "noun");
  ProviderSet p(nullptr, nullptr, nullptr, nullptr, std::make_shared<TablePosTagger>(pos));
  EXPECT_EQ(pos_first_word(candidate("انتقد كثيراً النزعة الإثنية المركزية"), p), Pos::kVerb);
  EXPECT_EQ(pos_first_word(candidate("الإثنية"), p), Pos::kNoun);
  EXPECT_EQ(pos_first_word(candidate("نقده"), p), Pos::kMisc);
}

TEST(ComputeFeatures, MissingProvidersAreFlagged) {
  const auto occs = extract_occurrences({"d", "b", "شركة لوكهيد مارتن (Lockheed Martin)", ""}).occurrences;
  ASSERT_EQ(occs.size(), 1u);
  const auto cands = generate_candidates(occs[0]);
  ProviderSet none(nullptr, nullptr, nullptr, nullptr, nullptr);
  const auto fvs = compute_features(occs[0], cands, none);
  ASSERT_EQ(fvs.size(), 3u);
  for (const auto& fv : fvs) {
    EXPECT_EQ(fv.missing, kMissingSemantic | kMissingTransLex | kMissingTranslitLex | kMissingEntity | kMissingPos);
    EXPECT_EQ(fv.semantic, 0.0);
    EXPECT_EQ(fv.entity, Entity::kNone);
    EXPECT_EQ(fv.pos_first, Pos::kMisc);
    EXPECT_EQ(fv.book_id, "b");
  }
  EXPECT_FALSE(fvs[0].phonetic);
  EXPECT_TRUE(fvs[1].phonetic);
  EXPECT_FALSE(fvs[2].phonetic);
}

TEST(ComputeFeatures, BuiltinProviders) {
  const auto occs = extract_occurrences({"d", "b", "شركة لوكهيد مارتن (Lockheed Martin)", ""}).occurrences;
  const auto cands = generate_candidates(occs[0]);
  auto p = ProviderSet::builtin();
  const auto fvs = compute_features(occs[0], cands, p);
  for (const auto& fv : fvs) EXPECT_EQ(fv.missing, kMissingTransLex);
  // The two-word candidate is the transliteration-closest one.
  EXPECT_EQ(fvs[1].translit_lex_rank, 0u);
  EXPECT_GE(fvs[1].translit_lex, 0.7);
}

TEST(FeaturesCsv, RoundTrip) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 200; ++i) {
    FeatureVector fv = with_values(u(rng), u(rng), u(rng));
    fv.candidate_id = "b, \"quoted\":" + std::to_string(i) + "#1";
    fv.occurrence_id = "b:" + std::to_string(i / 3);
    fv.book_id = "كتاب";
    fv.word_count = 1 + rng() % 7;
    fv.variant = rng() % 2;
    fv.entity = kAllEntities[rng() % kAllEntities.size()];
    fv.source_entity = kAllEntities[rng() % kAllEntities.size()];
    fv.pos_first = kAllPos[rng() % kAllPos.size()];
    fv.phonetic = rng() % 2;
    fv.semantic_rank = rng() % 5;
    fv.semantic_diff = u(rng);
    fv.trans_lex_diff = u(rng);
    fv.translit_lex_diff = u(rng);
    if (rng() % 3 != 0) fv.label = rng() % 2 == 0;
    fv.missing = static_cast<std::uint8_t>(rng() % 32);
    rows.push_back(fv);
  }
  const auto csv_text = features_to_csv(rows);
  EXPECT_EQ(features_from_csv(csv_text), rows);
  EXPECT_EQ(features_to_csv(features_from_csv(csv_text)), csv_text);
}

TEST(FeaturesCsv, SchemaErrors) {
  EXPECT_MASRAD_ERROR(features_from_csv("a,b,c\n"), ErrorCode::kSchemaMismatch);
  EXPECT_MASRAD_ERROR(features_from_csv(""), ErrorCode::kSchemaMismatch);
  const auto header = features_to_csv({});
  EXPECT_TRUE(features_from_csv(header).empty());
  EXPECT_MASRAD_ERROR(features_from_csv(header + "x,y\n"), ErrorCode::kParse);
  EXPECT_MASRAD_ERROR(missing_from_string("semantic|bogus"), ErrorCode::kParse);
  EXPECT_EQ(missing_from_string(missing_to_string(31)), 31);
}

}  // namespace
}  // namespace masrad
