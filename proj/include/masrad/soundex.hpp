#pragma once

// Russell/American soundex and the fixed Arabic romanization it runs on.
//
// Romanization table, version 1. Changing any entry changes phonetic
// features and must bump kRomanizationVersion.
//
//   ا a   أ a   إ i   آ a   ٱ a   ء -   ؤ u   ئ y   ى a   ة a
//   ب b   ت t   ث th  ج j   ح h   خ kh  د d   ذ dh  ر r   ز z
//   س s   ش sh  ص s   ض d   ط t   ظ z   ع -   غ gh  ف f   ق q
//   ك k   ل l   م m   ن n   ه h   و w   ي y   پ p   چ ch  ڤ v
//   گ g   ک k   ی y
//
// '-' means the letter is dropped. Diacritics and tatweel are removed first;
// anything else outside the table is ignored.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "masrad/error.hpp"
#include "masrad/textnorm.hpp"

namespace masrad {

inline constexpr std::string_view kRomanizationVersion = "ar-latn/1";

inline std::string_view romanize_letter(char32_t c) {
  switch (c) {
    case 0x0627: return "a";   // ا
    case 0x0623: return "a";   // أ
    case 0x0625: return "i";   // إ
    case 0x0622: return "a";   // آ
    case 0x0671: return "a";   // ٱ
    case 0x0621: return "";    // ء
    case 0x0624: return "u";   // ؤ
    case 0x0626: return "y";   // ئ
    case 0x0649: return "a";   // ى
    case 0x0629: return "a";   // ة
    case 0x0628: return "b";
    case 0x062A: return "t";
    case 0x062B: return "th";
    case 0x062C: return "j";
    case 0x062D: return "h";
    case 0x062E: return "kh";
    case 0x062F: return "d";
    case 0x0630: return "dh";
    case 0x0631: return "r";
    case 0x0632: return "z";
    case 0x0633: return "s";
    case 0x0634: return "sh";
    case 0x0635: return "s";
    case 0x0636: return "d";
    case 0x0637: return "t";
    case 0x0638: return "z";
    case 0x0639: return "";    // ع
    case 0x063A: return "gh";
    case 0x0641: return "f";
    case 0x0642: return "q";
    case 0x0643: return "k";
    case 0x0644: return "l";
    case 0x0645: return "m";
    case 0x0646: return "n";
    case 0x0647: return "h";
    case 0x0648: return "w";
    case 0x064A: return "y";
    case 0x067E: return "p";   // پ
    case 0x0686: return "ch";  // چ
    case 0x06A4: return "v";   // ڤ
    case 0x06AF: return "g";   // گ
    case 0x06A9: return "k";   // ک
    case 0x06CC: return "y";   // ی
    default: return "";
  }
}

/// Letters of the Arabic alphabet covered by the romanization table.
inline std::vector<char32_t> romanization_alphabet() {
  return {0x0627, 0x0623, 0x0625, 0x0622, 0x0671, 0x0621, 0x0624, 0x0626,
          0x0649, 0x0629, 0x0628, 0x062A, 0x062B, 0x062C, 0x062D, 0x062E,
          0x062F, 0x0630, 0x0631, 0x0632, 0x0633, 0x0634, 0x0635, 0x0636,
          0x0637, 0x0638, 0x0639, 0x063A, 0x0641, 0x0642, 0x0643, 0x0644,
          0x0645, 0x0646, 0x0647, 0x0648, 0x064A, 0x067E, 0x0686, 0x06A4,
          0x06AF, 0x06A9, 0x06CC};
}

/// Latin-1 / Latin Extended-A letters folded to their base ASCII letter.
inline char fold_latin_to_ascii(char32_t c) {
  c = chars::fold_case(c);
  if (c >= 'a' && c <= 'z') return static_cast<char>(c);
  if ((c >= 0xE0 && c <= 0xE5) || (c >= 0x0101 && c <= 0x0105)) return 'a';
  if (c == 0xE7 || (c >= 0x0107 && c <= 0x010D)) return 'c';
  if ((c >= 0xE8 && c <= 0xEB) || (c >= 0x0113 && c <= 0x011B)) return 'e';
  if ((c >= 0xEC && c <= 0xEF) || (c >= 0x0129 && c <= 0x0131)) return 'i';
  if (c == 0xF1 || (c >= 0x0144 && c <= 0x0148)) return 'n';
  if ((c >= 0xF2 && c <= 0xF6) || c == 0xF8 || (c >= 0x014D && c <= 0x0151)) return 'o';
  if ((c >= 0xF9 && c <= 0xFC) || (c >= 0x0169 && c <= 0x0173)) return 'u';
  if (c == 0xFD || c == 0xFF) return 'y';
  if (c == 0xDF) return 's';
  if (c >= 0x015B && c <= 0x0161) return 's';
  if (c >= 0x017A && c <= 0x017E) return 'z';
  if (c == 0x010F || c == 0x0111) return 'd';
  if (c >= 0x011D && c <= 0x0123) return 'g';
  if (c >= 0x013A && c <= 0x0142) return 'l';
  if (c >= 0x0155 && c <= 0x0159) return 'r';
  if (c >= 0x0163 && c <= 0x0167) return 't';
  return 0;
}

/// Lower-case ASCII romanization of `text`. Arabic letters go through the
/// table; Latin letters are folded to ASCII; everything else is dropped.
inline std::string romanize(std::string_view text) {
  const std::string clean = normalize_arabic(text, NormalizationProfile::matching());
  std::string out;
  std::size_t pos = 0;
  while (pos < clean.size()) {
    const char32_t c = utf8::next(clean, pos);
    if (chars::is_arabic_letter(c)) {
      out += romanize_letter(c);
    } else if (const char a = fold_latin_to_ascii(c); a != 0) {
      out.push_back(a);
    }
  }
  return out;
}

namespace detail {

// 0 = vowel (separates repeats), -1 = h/w (transparent), else the digit.
inline int soundex_class(char c) {
  static constexpr std::array<int, 26> kTable = {
      0, 1, 2, 3, 0, 1, 2, -1, 0, 2, 2, 4, 5,
      5, 0, 1, 2, 6, 2, 3, 0, 1, -1, 2, 0, 2};
  return kTable[static_cast<std::size_t>(c - 'a')];
}

}  // namespace detail

/// Four-character soundex code (letter + three digits).
inline std::string soundex(std::string_view token) {
  const std::string letters = romanize(token);
  if (letters.empty()) throw Error(ErrorCode::kNoLetters, "no letters in '" + std::string(token) + "'");

  std::string code(1, static_cast<char>(letters[0] - 'a' + 'A'));
  int prev = detail::soundex_class(letters[0]);
  for (std::size_t i = 1; i < letters.size() && code.size() < 4; ++i) {
    const int cls = detail::soundex_class(letters[i]);
    if (cls == -1) continue;
    if (cls == 0) {
      prev = 0;
      continue;
    }
    if (cls != prev) code.push_back(static_cast<char>('0' + cls));
    prev = cls;
  }
  code.resize(4, '0');
  return code;
}

/// Same number of word tokens, and pairwise-equal soundex codes. Tokens
/// without letters must match literally.
inline bool phonetic_similar(std::string_view candidate, std::string_view foreign_term) {
  std::vector<std::string> a;
  std::vector<std::string> b;
  for (const Token& t : tokenize(candidate)) {
    if (t.is_word()) a.push_back(t.text);
  }
  for (const Token& t : tokenize(foreign_term)) {
    if (t.is_word()) b.push_back(t.text);
  }
  if (a.empty() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string ra = romanize(a[i]);
    const std::string rb = romanize(b[i]);
    if (ra.empty() || rb.empty()) {
      if (a[i] != b[i]) return false;
      continue;
    }
    if (soundex(a[i]) != soundex(b[i])) return false;
  }
  return true;
}

}  // namespace masrad
