#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "masrad/eval.hpp"
#include "test_util.hpp"

namespace masrad {
namespace {

struct Inst {
  std::string book_id;
  int id = 0;
};

TEST(Prf, PerfectPredictions) {
  const std::vector<bool> labels = {true, false, false, true};
  const auto r = prf(labels, labels);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f1, 1.0);
}

TEST(Prf, CountsExample) {
  const auto r = prf_from_counts({9, 1, 2, 0});
  EXPECT_DOUBLE_EQ(r.precision, 0.9);
  EXPECT_NEAR(r.recall, 0.818, 5e-4);
  EXPECT_NEAR(r.f1, 0.857, 5e-4);
  EXPECT_DOUBLE_EQ(r.f1, 2.0 * 0.9 * (9.0 / 11.0) / (0.9 + 9.0 / 11.0));
}

TEST(Prf, DegenerateCases) {
  auto r = prf({false, false}, {true, false});
  EXPECT_TRUE(r.degenerate_precision);
  EXPECT_FALSE(r.degenerate_recall);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.f1, 0.0);
  r = prf({true, false}, {false, false});
  EXPECT_TRUE(r.degenerate_recall);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_MASRAD_ERROR(prf({true}, {true, false}), ErrorCode::kLengthMismatch);
  EXPECT_MASRAD_ERROR(prf({}, {}), ErrorCode::kLengthMismatch);
}

TEST(Prf, MatchesConfusionOracle) {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<bool> p(n), l(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng() % 2;
      l[i] = rng() % 3 == 0;
    }
    // Oracle: filter-and-count per definition.
    double tp = 0, pred_pos = 0, act_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pred_pos += p[i];
      act_pos += l[i];
      tp += p[i] && l[i];
    }
    const double P = pred_pos > 0 ? tp / pred_pos : 0.0;
    const double R = act_pos > 0 ? tp / act_pos : 0.0;
    const double F = P + R > 0 ? 2 * P * R / (P + R) : 0.0;
    const auto r = prf(p, l);
    ASSERT_DOUBLE_EQ(r.precision, P);
    ASSERT_DOUBLE_EQ(r.recall, R);
    ASSERT_DOUBLE_EQ(r.f1, F);
    ASSERT_EQ(r.counts.total(), n);
    ASSERT_EQ(r.degenerate_precision, pred_pos == 0);
    ASSERT_EQ(r.degenerate_recall, act_pos == 0);
  }
}

TEST(Evaluate, PerBookBreakdown) {
  const auto r = evaluate({true, false, true, true}, {true, true, false, true}, {"a", "a", "b", "b"},
                          EvalMode::kSelection);
  EXPECT_EQ(r.per_book.size(), 2u);
  EXPECT_EQ(r.per_book.at("a").counts.tp, 1u);
  EXPECT_EQ(r.per_book.at("a").counts.fn, 1u);
  EXPECT_EQ(r.per_book.at("b").counts.fp, 1u);
  EXPECT_EQ(r.overall.counts.total(), 4u);
  const auto text = render_report(r);
  EXPECT_NE(text.find("mode: selection"), std::string::npos);
  EXPECT_NE(text.find("overall  P=66.7% R=66.7% F1=66.7%"), std::string::npos);
  EXPECT_MASRAD_ERROR(evaluate({true}, {true}, {}, EvalMode::kSelection), ErrorCode::kLengthMismatch);
}

TEST(BookSplit, PartitionsByBook) {
  std::vector<Inst> all;
  // 15 books; the first nine hold 15865 instances, the last six 3540.
  for (int b = 0; b < 15; ++b) {
    const int n = b < 9 ? (b == 0 ? 15865 - 8 * 1762 : 1762) : (b == 9 ? 3540 - 5 * 590 : 590);
    for (int i = 0; i < n; ++i) all.push_back({"book" + std::to_string(b), i});
  }
  all.push_back({"stray", 0});
  std::set<std::string> train, test;
  for (int b = 0; b < 9; ++b) train.insert("book" + std::to_string(b));
  for (int b = 9; b < 15; ++b) test.insert("book" + std::to_string(b));
  const auto split = book_split(all, train, test);
  EXPECT_EQ(split.train.size(), 15865u);
  EXPECT_EQ(split.test.size(), 3540u);
  EXPECT_EQ(split.excluded, 1u);
  EXPECT_EQ(split.train.size() + split.test.size() + split.excluded, all.size());
  for (const auto& i : split.train) EXPECT_EQ(train.count(i.book_id), 1u);
  for (const auto& i : split.test) EXPECT_EQ(test.count(i.book_id), 1u);

  const auto no_test = book_split(all, train, {});
  EXPECT_TRUE(no_test.test.empty());
  EXPECT_MASRAD_ERROR(book_split(all, {"book1"}, {"book1", "book2"}), ErrorCode::kOverlappingSets);
}

TEST(Aggregate, SumsAgreeingSurfaces) {
  const auto s = aggregate_suggestions({{"o1", {{"الإثنية المركزية", 0.8}, {"المركزية", 0.1}}},
                                        {"o2", {{"الإثنيّة المركزية", 0.7}, {"النزعة", 0.2}}}});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].arabic_term, "الإثنية المركزية");
  EXPECT_DOUBLE_EQ(s[0].aggregate_score, 1.5);
  EXPECT_EQ(s[0].occurrences, 2u);
  EXPECT_EQ(s[1].arabic_term, "النزعة");
}

TEST(Aggregate, SingleOccurrencePassesThrough) {
  const auto s = aggregate_suggestions({{"o1", {{"ب", 0.2}, {"أ", 0.9}}}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].arabic_term, "أ");
  EXPECT_EQ(s[1].arabic_term, "ب");
  EXPECT_TRUE(aggregate_suggestions({}).empty());
}

TEST(Aggregate, TwoTranslationsStayDistinct) {
  const auto s = aggregate_suggestions({{"essays:1", {{"للمركزية - الإثنية", 1.0}}},
                                        {"essays:2", {{"النزعة الإثنية المركزية", 1.0}}}});
  EXPECT_EQ(s.size(), 2u);
}

TEST(Aggregate, ConservesScore) {
  std::mt19937 rng(41);
  const std::vector<std::string> words = {"أ", "ا", "ب", "بَ", "ت", "ث ج", "ث  ج"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<OccurrenceRanking> rankings;
    double total = 0.0;
    for (int o = 0; o < 1 + static_cast<int>(rng() % 5); ++o) {
      OccurrenceRanking r{"o" + std::to_string(o), {}};
      for (int c = 0; c < 1 + static_cast<int>(rng() % 4); ++c) {
        const double score = (rng() % 100) / 8.0;  // exact in binary
        r.candidates.emplace_back(words[rng() % words.size()], score);
        total += score;
      }
      rankings.push_back(r);
    }
    const auto s = aggregate_suggestions(rankings);
    double sum = 0.0;
    for (const auto& x : s) sum += x.aggregate_score;
    ASSERT_DOUBLE_EQ(sum, total);
    for (std::size_t i = 1; i < s.size(); ++i) ASSERT_GE(s[i - 1].aggregate_score, s[i].aggregate_score);
  }
}

std::map<std::string, std::vector<Suggestion>> suggestions_fixture() {
  return {
      {"ethnocentrism", {{"المركزية الإثنية", 2, 2}, {"النزعة", 1, 1}}},
      {"lockheed martin", {{"شركة", 3, 1}, {"مارتن", 2, 1}, {"لوكهيد مارتن", 1, 1}}},
      {"regavim", {{"جمعية", 1, 1}}},
  };
}

TEST(TopK, RanksOneThreeAbsent) {
  const std::vector<GlossaryConcept> glossary = {
      {"Ethnocentrism", "", "المركزية الإثنية"},
      {"", "Lockheed-Martin", "لوكهيد مارتن"},
      {"Regavim", "Regavim", "ريغافيم"},
      {"Unrelated", "", "شيء"},
  };
  const auto s = suggestions_fixture();
  const auto t1 = topk_accuracy(glossary, s, 1);
  EXPECT_EQ(t1.matched, 2u);  // the hyphen is dropped, giving "lockheedmartin"
  const std::vector<GlossaryConcept> fixed = {
      {"Ethnocentrism", "", "المركزية الإثنية"},
      {"", "Lockheed  Martin.", "لوكهيد مارتن"},
      {"Regavim", "Regavim", "ريغافيم"},
      {"Unrelated", "", "شيء"},
  };
  const auto a1 = topk_accuracy(fixed, s, 1);
  const auto a3 = topk_accuracy(fixed, s, 3);
  EXPECT_EQ(a1.matched, 3u);
  EXPECT_DOUBLE_EQ(a1.accuracy, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(a3.accuracy, 2.0 / 3.0);
}

TEST(TopK, MonotoneInK) {
  std::mt19937 rng(43);
  const std::vector<std::string> arabic = {"أ", "ب", "ت", "ث", "ج"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<GlossaryConcept> glossary;
    std::map<std::string, std::vector<Suggestion>> s;
    for (int c = 0; c < 6; ++c) {
      const std::string term = "term" + std::to_string(c);
      glossary.push_back({term, "", arabic[rng() % arabic.size()]});
      if (rng() % 4 == 0) continue;
      auto& list = s[term];
      for (int i = 0; i < static_cast<int>(rng() % 5); ++i) list.push_back({arabic[rng() % arabic.size()], 1.0, 1});
    }
    double prev = 0.0;
    for (std::size_t k = 1; k <= 6; ++k) {
      const double acc = topk_accuracy(glossary, s, k).accuracy;
      ASSERT_GE(acc, prev);
      prev = acc;
    }
  }
}

TEST(TopK, Errors) {
  EXPECT_MASRAD_ERROR(topk_accuracy({}, {}, 1), ErrorCode::kEmptyGlossary);
  EXPECT_MASRAD_ERROR(topk_accuracy({{"a", "", "ب"}}, {}, 0), ErrorCode::kUsage);
  EXPECT_EQ(topk_accuracy({{"a", "", "ب"}}, {}, 1).accuracy, 0.0);
}

TEST(Glossary, ParseCsv) {
  const auto g = parse_glossary_csv("english,french,arabic\nEthnocentrism,\"ethnocentrisme, l'\",المركزية الإثنية\n");
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].french, "ethnocentrisme, l'");
  EXPECT_MASRAD_ERROR(parse_glossary_csv("en,fr,ar\n"), ErrorCode::kParse);
  EXPECT_MASRAD_ERROR(parse_glossary_csv("english,french,arabic\n,,ب\n"), ErrorCode::kParse);
  EXPECT_MASRAD_ERROR(parse_glossary_csv("english,french,arabic\na,b\n"), ErrorCode::kParse);
}

}  // namespace
}  // namespace masrad
