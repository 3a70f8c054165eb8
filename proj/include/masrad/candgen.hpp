#pragma once

// Candidate generation: the prefixes w1..wi anchored at the parenthesis.

#include <cstddef>
#include <cstdio>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "masrad/extract.hpp"
#include "masrad/textnorm.hpp"

namespace masrad {

struct Candidate {
  std::string candidate_id;
  std::string occurrence_id;
  std::size_t word_count = 0;
  /// Words in reading order, copied from the source (dashes included).
  std::string surface;
  std::string normalized;
  /// Clitic-stripped variant of another candidate.
  bool variant = false;
  /// Document byte range of the surface. Variants share their base span.
  ByteSpan span;
};

struct CandGenConfig {
  std::size_t alpha = 2;
  std::size_t beta = 5;
  bool clitic_variants = false;
  NormalizationProfile profile = NormalizationProfile::matching();
};

inline std::size_t foreign_word_count(std::string_view foreign_term) {
  std::size_t n = 0;
  for (const Token& t : tokenize(foreign_term)) n += t.is_word() ? 1 : 0;
  return n == 0 ? 1 : n;
}

inline std::string normalize_candidate(std::string_view surface,
                                      const NormalizationProfile& profile = NormalizationProfile::matching()) {
  return collapse_whitespace(normalize_arabic(surface, profile));
}

inline std::vector<Candidate> clitic_variants(const Candidate& cand,
                                              const NormalizationProfile& profile);

inline std::vector<Candidate> generate_candidates(const Occurrence& occ,
                                                  const CandGenConfig& cfg = {}) {
  std::vector<Candidate> out;
  if (occ.preceding_words.empty()) return out;
  const std::size_t cap = foreign_word_count(occ.foreign_term) * cfg.alpha + cfg.beta;
  const std::size_t w1_end = occ.preceding_words.front().char_end;

  std::size_t words = 0;
  for (const Token& t : occ.preceding_words) {
    if (!t.is_word()) continue;
    if (++words > cap) break;
    Candidate c;
    c.candidate_id = occ.occurrence_id + "#" + std::to_string(words);
    c.occurrence_id = occ.occurrence_id;
    c.word_count = words;
    c.span = {t.char_start, w1_end};
    c.surface = occ.context_text.substr(t.char_start - occ.context_offset,
                                        w1_end - t.char_start);
    c.normalized = normalize_candidate(c.surface, cfg.profile);
    out.push_back(c);
    if (cfg.clitic_variants) {
      for (Candidate& v : clitic_variants(c, cfg.profile)) out.push_back(std::move(v));
    }
  }
  return out;
}

/// Single-letter proclitics that attach to the following word.
inline bool is_proclitic(char32_t c) {
  return c == 0x0648 /* و */ || c == 0x0641 /* ف */ || c == 0x0628 /* ب */ ||
         c == 0x0644 /* ل */ || c == 0x0643 /* ك */;
}

/// Emits the candidate with one proclitic stripped from its first word, if
/// it has one. "لل" (li + al-) is restored to "ال". The definite article
/// itself is never stripped.
inline std::vector<Candidate> clitic_variants(const Candidate& cand,
                                              const NormalizationProfile& profile = NormalizationProfile::matching()) {
  const auto tokens = tokenize(cand.surface);
  const Token* first = nullptr;
  for (const Token& t : tokens) {
    if (t.is_word()) {
      first = &t;
      break;
    }
  }
  if (first == nullptr || first->script != Script::kArabic) return {};

  const std::u32string word = utf8::decode(first->text);
  if (word.empty() || !is_proclitic(word[0])) return {};
  std::u32string rest = word.substr(1);
  if (word[0] == 0x0644 && !rest.empty() && rest[0] == 0x0644) {
    rest.insert(rest.begin(), 0x0627);  // لل -> ال
  }
  std::size_t letters = 0;
  for (char32_t c : rest) letters += chars::is_arabic_letter(c) ? 1 : 0;
  if (letters < 2) return {};

  Candidate v = cand;
  v.candidate_id = cand.candidate_id + "v";
  v.variant = true;
  v.surface = cand.surface.substr(0, first->char_start) + utf8::encode(rest) +
              cand.surface.substr(first->char_end);
  v.normalized = normalize_candidate(v.surface, profile);
  return {v};
}

struct StatsReport {
  std::size_t books = 0;
  std::size_t unique_foreign_terms = 0;
  std::size_t occurrences = 0;
  std::size_t candidates = 0;
  double average_candidates = 0.0;
};

inline StatsReport corpus_stats(const std::vector<Occurrence>& occurrences,
                                const std::vector<Candidate>& candidates) {
  StatsReport r;
  std::set<std::string> books;
  std::set<std::string> terms;
  for (const Occurrence& o : occurrences) {
    books.insert(o.book_id);
    terms.insert(foreign_term_key(o.foreign_term));
  }
  r.books = books.size();
  r.unique_foreign_terms = terms.size();
  r.occurrences = occurrences.size();
  r.candidates = candidates.size();
  r.average_candidates =
      r.occurrences == 0 ? 0.0
                         : static_cast<double>(r.candidates) / static_cast<double>(r.occurrences);
  return r;
}

/// Two decimals, as printed by `stats`.
inline std::string format_average(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace masrad
