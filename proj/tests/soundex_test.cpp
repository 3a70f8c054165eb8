#include <string>

#include <gtest/gtest.h>

#include "masrad/soundex.hpp"
#include "test_util.hpp"

namespace masrad {
namespace {

TEST(Soundex, LatinReferenceCodes) {
  EXPECT_EQ(soundex("Robert"), "R163");
  EXPECT_EQ(soundex("Rupert"), "R163");
  EXPECT_EQ(soundex("Ashcraft"), "A261");
  EXPECT_EQ(soundex("Tymczak"), "T522");
  EXPECT_EQ(soundex("Pfister"), "P236");
  EXPECT_EQ(soundex("Honeyman"), "H555");
  EXPECT_EQ(soundex("R"), "R000");
  EXPECT_EQ(soundex("Müller"), soundex("Muller"));
}

TEST(Soundex, NoLetters) {
  EXPECT_MASRAD_ERROR(soundex(""), ErrorCode::kNoLetters);
  EXPECT_MASRAD_ERROR(soundex("1967"), ErrorCode::kNoLetters);
  EXPECT_MASRAD_ERROR(soundex("ع"), ErrorCode::kNoLetters);
}

TEST(Soundex, ArabicMatchesLatin) {
  EXPECT_EQ(soundex("Regavim"), "R215");
  EXPECT_EQ(soundex("ريغافيم"), "R215");
  EXPECT_EQ(soundex("لوكهيد"), soundex("Lockheed"));
  EXPECT_EQ(soundex("مارتن"), soundex("Martin"));
}

TEST(Phonetic, ExampleRows) {
  EXPECT_TRUE(phonetic_similar("ريغافيم", "Regavim"));
  EXPECT_TRUE(phonetic_similar("لوكهيد مارتن", "Lockheed Martin"));
  EXPECT_FALSE(phonetic_similar("مثل لوكهيد مارتن", "Lockheed Martin"));
}

TEST(Phonetic, TokenCountsMustAgree) {
  EXPECT_FALSE(phonetic_similar("", "Regavim"));
  EXPECT_FALSE(phonetic_similar("مارتن", "Lockheed Martin"));
  EXPECT_TRUE(phonetic_similar("لوكهيد 16", "Lockheed 16"));
  EXPECT_FALSE(phonetic_similar("لوكهيد 15", "Lockheed 16"));
}

TEST(Romanize, TableIsStable) {
  EXPECT_EQ(kRomanizationVersion, "ar-latn/1");
  EXPECT_EQ(romanize("شخص"), "shkhs");
  EXPECT_EQ(romanize("مُحَمَّد"), "mhmd");
  EXPECT_EQ(romanize("Café!"), "cafe");
}

// Every table letter romanizes to lower-case ASCII, and the result is a fixed
// point of romanize.
TEST(Romanize, AlphabetRoundTrip) {
  for (char32_t c : romanization_alphabet()) {
    std::string s;
    utf8::append(s, c);
    const std::string r = romanize(s);
    for (char ch : r) ASSERT_TRUE(ch >= 'a' && ch <= 'z') << s;
    EXPECT_EQ(romanize(r), r) << s;
    EXPECT_EQ(r, std::string(romanize_letter(c))) << s;
  }
}

}  // namespace
}  // namespace masrad
