#pragma once

// Arabic-aware normalization, tokenization and script classification.
//
// Offsets in Token are byte offsets into the UTF-8 source string, so
// `source.substr(char_start, char_end - char_start) == text` always holds.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "masrad/utf8.hpp"

namespace masrad {

enum class Script { kArabic, kLatin, kDigit, kPunct, kMixed };

inline std::string_view script_name(Script s) {
  switch (s) {
    case Script::kArabic: return "Arabic";
    case Script::kLatin: return "Latin";
    case Script::kDigit: return "Digit";
    case Script::kPunct: return "Punct";
    case Script::kMixed: return "Mixed";
  }
  return "Mixed";
}

struct Token {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  Script script = Script::kMixed;

  bool is_word() const { return script != Script::kPunct; }
  friend bool operator==(const Token&, const Token&) = default;
};

namespace chars {

inline constexpr char32_t kTatweel = 0x0640;

inline bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == 0x00A0 || c == 0x200F || c == 0x200E ||
         c == 0x2028 || c == 0x2029 || (c >= 0x2000 && c <= 0x200B) ||
         c == 0x202F || c == 0x3000 || c == 0xFEFF;
}

inline bool is_arabic_block(char32_t c) {
  return (c >= 0x0600 && c <= 0x06FF) || (c >= 0x0750 && c <= 0x077F) ||
         (c >= 0x08A0 && c <= 0x08FF) || (c >= 0xFB50 && c <= 0xFDFF) ||
         (c >= 0xFE70 && c <= 0xFEFF);
}

inline bool is_arabic_diacritic(char32_t c) {
  return (c >= 0x064B && c <= 0x065F) || c == 0x0670 ||
         (c >= 0x06D6 && c <= 0x06DC) || (c >= 0x06DF && c <= 0x06E4) ||
         c == 0x06E7 || c == 0x06E8 || (c >= 0x06EA && c <= 0x06ED) ||
         (c >= 0x08D3 && c <= 0x08FF) || (c >= 0x0610 && c <= 0x061A);
}

inline bool is_arabic_digit(char32_t c) {
  return (c >= 0x0660 && c <= 0x0669) || (c >= 0x06F0 && c <= 0x06F9);
}

inline bool is_digit(char32_t c) {
  return (c >= '0' && c <= '9') || is_arabic_digit(c);
}

inline bool is_arabic_letter(char32_t c) {
  return (c >= 0x0620 && c <= 0x063F) || (c >= 0x0641 && c <= 0x064A) ||
         (c >= 0x066E && c <= 0x066F) || (c >= 0x0671 && c <= 0x06D3) ||
         c == 0x06D5 || (c >= 0x06EE && c <= 0x06EF) ||
         (c >= 0x06FA && c <= 0x06FF) || (c >= 0x0750 && c <= 0x077F) ||
         (c >= 0x08A0 && c <= 0x08C9) || (c >= 0xFB50 && c <= 0xFDFB) ||
         (c >= 0xFE70 && c <= 0xFEFC);
}

inline bool is_latin_letter(char32_t c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= 0x00C0 && c <= 0x024F && c != 0x00D7 && c != 0x00F7) ||
         (c >= 0x1E00 && c <= 0x1EFF);
}

/// Letters from scripts other than Latin and Arabic (Greek, Cyrillic,
/// Hebrew). They count against the Latin majority of a parenthetical.
inline bool is_other_letter(char32_t c) {
  return (c >= 0x0370 && c <= 0x03FF) || (c >= 0x0400 && c <= 0x04FF) ||
         (c >= 0x05D0 && c <= 0x05EA);
}

inline bool is_apostrophe(char32_t c) {
  return c == '\'' || c == 0x2019 || c == 0x2018 || c == 0x02BC;
}

inline bool is_dash(char32_t c) {
  return c == '-' || c == 0x2010 || c == 0x2011 || c == 0x2012 ||
         c == 0x2013 || c == 0x2014 || c == 0x2015;
}

inline bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
           (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
  }
  switch (c) {
    case 0x060C:  // ،
    case 0x061B:  // ؛
    case 0x061F:  // ؟
    case 0x066A:  // ٪
    case 0x066B:
    case 0x066C:
    case 0x06D4:  // ۔
    case 0x00AB:  // «
    case 0x00BB:  // »
    case 0x00A1:
    case 0x00BF:
    case 0x00B7:
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
    case 0x201E:
    case 0x2026:  // …
    case 0x2039:
    case 0x203A:
    case 0xFD3E:  // ornate parentheses
    case 0xFD3F:
      return true;
    default:
      return is_dash(c);
  }
}

inline bool is_sentence_end(char32_t c) {
  return c == '.' || c == 0x061F || c == '!' || c == 0x061B || c == ':' ||
         c == '?' || c == 0x06D4 || c == 0x2026;
}

inline bool is_open_paren(char32_t c) { return c == '(' || c == 0xFD3E; }
inline bool is_close_paren(char32_t c) { return c == ')' || c == 0xFD3F; }

/// Simple case folding for Latin (ASCII, Latin-1 and Latin Extended-A).
inline char32_t fold_case(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) return c + 32;
  // Latin Extended-A pairs alternate upper/lower with parity flips.
  if (c == 0x0130) return 'i';
  if (c == 0x0178) return 0x00FF;
  const bool even_upper = (c >= 0x0100 && c <= 0x0137) || (c >= 0x014A && c <= 0x0177);
  const bool odd_upper = (c >= 0x0139 && c <= 0x0148) || (c >= 0x0179 && c <= 0x017E);
  if ((even_upper && c % 2 == 0) || (odd_upper && c % 2 == 1)) return c + 1;
  return c;
}

}  // namespace chars

/// Which rewrites normalize_arabic applies. Every flag is a pure character
/// map or deletion, so any combination is idempotent.
struct NormalizationProfile {
  bool remove_tatweel = true;
  bool remove_diacritics = true;
  bool unify_alef = true;         // أ إ آ ٱ -> ا
  bool teh_marbuta_to_heh = false;  // ة -> ه
  bool alef_maqsura_to_yeh = false;  // ى -> ي

  /// The full comparison profile (diacritics, tatweel, alef variants).
  static NormalizationProfile comparison() { return {}; }

  /// The profile used for stored `normalized` text and lexical ratios: the
  /// alef/hamza distinction is kept so it still costs one edit.
  static NormalizationProfile matching() {
    NormalizationProfile p;
    p.unify_alef = false;
    return p;
  }

  friend bool operator==(const NormalizationProfile&,
                         const NormalizationProfile&) = default;
};

inline std::string normalize_arabic(std::string_view text,
                                    const NormalizationProfile& profile = {}) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t c = utf8::next(text, pos);
    if (profile.remove_tatweel && c == chars::kTatweel) continue;
    if (profile.remove_diacritics && chars::is_arabic_diacritic(c)) continue;
    if (profile.unify_alef &&
        (c == 0x0623 || c == 0x0625 || c == 0x0622 || c == 0x0671)) {
      c = 0x0627;
    }
    if (profile.teh_marbuta_to_heh && c == 0x0629) c = 0x0647;
    if (profile.alef_maqsura_to_yeh && c == 0x0649) c = 0x064A;
    utf8::append(out, c);
  }
  return out;
}

/// Collapses whitespace runs to one ASCII space and trims both ends.
inline std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t c = utf8::next(text, pos);
    if (chars::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(text.substr(start, pos - start));
  }
  return out;
}

inline Script classify_script(std::string_view word) {
  std::size_t pos = 0;
  std::size_t total = 0;
  std::size_t arabic = 0;
  std::size_t latin = 0;
  std::size_t digits = 0;
  std::size_t punct = 0;
  while (pos < word.size()) {
    const char32_t c = utf8::next(word, pos);
    ++total;
    if (chars::is_digit(c)) {
      ++digits;
    } else if (chars::is_arabic_block(c)) {
      ++arabic;
    } else if (chars::is_latin_letter(c) || chars::is_apostrophe(c)) {
      ++latin;
    } else if (chars::is_punct(c)) {
      ++punct;
    }
  }
  if (total == 0) return Script::kMixed;
  if (punct == total) return Script::kPunct;
  if (digits == total) return Script::kDigit;
  if (arabic == total) return Script::kArabic;
  if (latin == total) return Script::kLatin;
  return Script::kMixed;
}

/// Splits on whitespace; every punctuation character becomes its own token.
/// Apostrophes between two letters stay inside the word ("l’ethnocentrisme").
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t word_start = std::string_view::npos;

  auto flush_word = [&](std::size_t end) {
    if (word_start == std::string_view::npos) return;
    Token t;
    t.text = std::string(text.substr(word_start, end - word_start));
    t.char_start = word_start;
    t.char_end = end;
    t.script = classify_script(t.text);
    tokens.push_back(std::move(t));
    word_start = std::string_view::npos;
  };

  auto is_letter = [](char32_t c) {
    return chars::is_latin_letter(c) || chars::is_arabic_letter(c) ||
           chars::is_other_letter(c);
  };

  std::size_t pos = 0;
  char32_t prev = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t c = utf8::next(text, pos);
    if (chars::is_space(c)) {
      flush_word(start);
      prev = c;
      continue;
    }
    if (chars::is_apostrophe(c) && word_start != std::string_view::npos &&
        is_letter(prev) && pos < text.size()) {
      std::size_t peek = pos;
      if (is_letter(utf8::next(text, peek))) {
        prev = c;
        continue;
      }
    }
    if (chars::is_punct(c)) {
      flush_word(start);
      tokens.push_back(Token{std::string(text.substr(start, pos - start)),
                             start, pos, Script::kPunct});
      prev = c;
      continue;
    }
    if (word_start == std::string_view::npos) word_start = start;
    prev = c;
  }
  flush_word(text.size());
  return tokens;
}

inline bool contains_arabic_letter(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (chars::is_arabic_letter(utf8::next(text, pos))) return true;
  }
  return false;
}

inline bool contains_latin_letter(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (chars::is_latin_letter(utf8::next(text, pos))) return true;
  }
  return false;
}

/// Matching key for foreign terms: case-folded, punctuation stripped,
/// whitespace collapsed.
inline std::string foreign_match_key(std::string_view text) {
  std::string stripped;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t c = utf8::next(text, pos);
    if (chars::is_punct(c)) continue;
    utf8::append(stripped, chars::fold_case(c));
  }
  return collapse_whitespace(stripped);
}

/// Key used to count and group foreign terms: case-folded and
/// whitespace-collapsed, punctuation kept.
inline std::string foreign_term_key(std::string_view text) {
  std::string folded;
  std::size_t pos = 0;
  while (pos < text.size()) utf8::append(folded, chars::fold_case(utf8::next(text, pos)));
  return collapse_whitespace(folded);
}

/// Key used to decide whether two Arabic renderings are "the same term".
inline std::string arabic_term_key(std::string_view text) {
  return collapse_whitespace(
      normalize_arabic(text, NormalizationProfile::comparison()));
}

}  // namespace masrad
