#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "masrad/extract.hpp"
#include "test_util.hpp"

namespace masrad {
namespace {

std::vector<std::string> word_texts(const Occurrence& occ) {
  std::vector<std::string> out;
  for (const auto& t : occ.preceding_words) out.push_back(t.text);
  return out;
}

Document essays() {
  return load_corpus(testing::samples_dir() / "ethnocentrism").at(0);
}

TEST(Extract, FixtureHasTwoOccurrences) {
  const auto doc = essays();
  EXPECT_EQ(doc.doc_id, "essays");
  const auto r = extract_occurrences(doc);
  ASSERT_EQ(r.occurrences.size(), 2u);
  EXPECT_TRUE(r.issues.empty());
  EXPECT_EQ(r.occurrences[0].occurrence_id, "essays:1");
  EXPECT_EQ(r.occurrences[1].occurrence_id, "essays:2");
  for (const auto& o : r.occurrences) EXPECT_EQ(o.foreign_term, "l’ethnocentrisme");
}

TEST(Extract, SecondContextPrecedingWords) {
  const auto r = extract_occurrences(essays());
  ASSERT_EQ(r.occurrences.size(), 2u);
  EXPECT_EQ(word_texts(r.occurrences[1]),
            (std::vector<std::string>{"المركزية", "الإثنية", "النزعة", "كثيراً", "انتقد"}));
  EXPECT_EQ(r.occurrences[1].word_count(), 5u);
}

TEST(Extract, FirstContextKeepsInteriorDash) {
  const auto r = extract_occurrences(essays());
  ASSERT_EQ(r.occurrences.size(), 2u);
  EXPECT_EQ(word_texts(r.occurrences[0]),
            (std::vector<std::string>{"الإثنية", "-", "للمركزية", "الحاد", "نقده", "يتحول", "ولا"}));
  EXPECT_EQ(r.occurrences[0].word_count(), 6u);
}

TEST(Extract, NoParenthesesNoOccurrences) {
  const auto r = extract_occurrences({"d", "b", "انتقد كثيراً النزعة الإثنية المركزية", ""});
  EXPECT_TRUE(r.occurrences.empty());
  EXPECT_TRUE(r.issues.empty());
}

TEST(Extract, ArabicParentheticalIsNotForeign) {
  EXPECT_TRUE(extract_occurrences({"d", "b", "قال (أي شيء) بعدها", ""}).occurrences.empty());
  EXPECT_TRUE(extract_occurrences({"d", "b", "في عام (1967) وقع", ""}).occurrences.empty());
  EXPECT_TRUE(extract_occurrences({"d", "b", "قال () بعدها", ""}).occurrences.empty());
}

TEST(Extract, UnbalancedParenthesesReported) {
  auto r = extract_occurrences({"d", "b", "النزعة الإثنية (ethnocentrism", ""});
  EXPECT_TRUE(r.occurrences.empty());
  ASSERT_EQ(r.issues.size(), 1u);
  EXPECT_EQ(r.issues[0].code, ErrorCode::kUnbalancedParentheses);

  r = extract_occurrences({"d", "b", "النزعة ethnocentrism) ثم الإثنية (ethnie)", ""});
  ASSERT_EQ(r.issues.size(), 1u);
  ASSERT_EQ(r.occurrences.size(), 1u);
  EXPECT_EQ(r.occurrences[0].foreign_term, "ethnie");
}

TEST(Extract, NoArabicContextIsDropped) {
  const auto r = extract_occurrences({"d", "b", "(Lockheed Martin) قال، (Boeing)", ""});
  EXPECT_TRUE(r.occurrences.empty());
  EXPECT_EQ(r.dropped_no_context, 2u);
}

TEST(Extract, PunctuationEndsTheWindow) {
  const auto r = extract_occurrences({"d", "b", "قال الرجل، شركة لوكهيد مارتن (Lockheed Martin)", ""});
  ASSERT_EQ(r.occurrences.size(), 1u);
  EXPECT_EQ(word_texts(r.occurrences[0]), (std::vector<std::string>{"مارتن", "لوكهيد", "شركة"}));
}

TEST(Extract, WindowIsCapped) {
  std::string text;
  for (int i = 0; i < 30; ++i) text += "كلمة ";
  text += "(word)";
  ExtractConfig cfg;
  cfg.max_window = 4;
  const auto r = extract_occurrences({"d", "b", text, ""}, cfg);
  ASSERT_EQ(r.occurrences.size(), 1u);
  EXPECT_EQ(r.occurrences[0].word_count(), 4u);
}

TEST(Extract, ParagraphsDoNotShareContext) {
  const auto r = extract_occurrences({"d", "b", "كلمة أولى\n\n(first) ثم ثانية (second)", ""});
  ASSERT_EQ(r.occurrences.size(), 1u);
  EXPECT_EQ(r.occurrences[0].foreign_term, "second");
  EXPECT_EQ(word_texts(r.occurrences[0]), (std::vector<std::string>{"ثانية", "ثم"}));
}

TEST(Extract, SpansIndexTheDocument) {
  const auto doc = essays();
  for (const auto& o : extract_occurrences(doc).occurrences) {
    const auto& s = o.foreign_char_span;
    EXPECT_EQ(doc.text.substr(s.start, s.end - s.start), "(" + o.foreign_term + ")");
    EXPECT_EQ(doc.text.substr(o.context_offset, o.context_text.size()), o.context_text);
    std::size_t prev = s.start;
    for (const auto& t : o.preceding_words) {
      EXPECT_EQ(doc.text.substr(t.char_start, t.char_end - t.char_start), t.text);
      EXPECT_LE(t.char_end, prev);
      prev = t.char_start;
    }
  }
}

TEST(Extract, CorpusLayout) {
  testing::TempDir dir;
  std::filesystem::create_directories(dir / "bookB");
  std::ofstream(dir / "bookA.txt") << "النزعة (a)";
  std::ofstream(dir / "bookB" / "ch2.txt") << "النزعة (b)";
  std::ofstream(dir / "bookB" / "ch1.txt") << "النزعة (c)";
  std::ofstream(dir / "notes.md") << "ignored";
  const auto docs = load_corpus(dir.path());
  ASSERT_EQ(docs.size(), 3u);
  EXPECT_EQ(docs[0].doc_id, "bookA");
  EXPECT_EQ(docs[1].doc_id, "bookB/ch1");
  EXPECT_EQ(docs[1].book_id, "bookB");
  EXPECT_EQ(docs[2].doc_id, "bookB/ch2");
  EXPECT_MASRAD_ERROR(load_corpus(dir / "missing"), ErrorCode::kIoFailure);
}

}  // namespace
}  // namespace masrad
