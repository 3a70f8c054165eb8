#pragma once

// Locating parenthetical foreign terms and their Arabic left-context.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "masrad/error.hpp"
#include "masrad/textnorm.hpp"

namespace masrad {

struct Document {
  std::string doc_id;
  std::string book_id;
  std::string text;
  std::string source_path;
};

struct ByteSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

struct Occurrence {
  std::string occurrence_id;
  std::string doc_id;
  std::string book_id;
  std::string foreign_term;
  /// Covers the parentheses themselves, in document bytes.
  ByteSpan foreign_char_span;
  std::string context_text;
  /// Where context_text starts in the document.
  std::size_t context_offset = 0;
  /// w1..wn: w1 is nearest the opening parenthesis. Offsets are document
  /// bytes. Interior dash tokens are kept but are not words.
  std::vector<Token> preceding_words;

  std::size_t word_count() const {
    return static_cast<std::size_t>(std::count_if(
        preceding_words.begin(), preceding_words.end(),
        [](const Token& t) { return t.is_word(); }));
  }
};

struct ExtractConfig {
  std::size_t max_window = 12;
};

struct ExtractIssue {
  ErrorCode code = ErrorCode::kUnbalancedParentheses;
  std::string doc_id;
  std::size_t position = 0;
  std::string message;
};

struct ExtractResult {
  std::vector<Occurrence> occurrences;
  std::vector<ExtractIssue> issues;
  /// Foreign parentheticals dropped for lack of Arabic left-context.
  std::size_t dropped_no_context = 0;
};

namespace detail {

/// Paragraphs are maximal runs of non-blank lines; returns byte ranges.
inline std::vector<ByteSpan> split_paragraphs(std::string_view text) {
  std::vector<ByteSpan> out;
  std::size_t line_start = 0;
  std::size_t para_start = std::string_view::npos;
  std::size_t para_end = 0;
  while (line_start <= text.size()) {
    std::size_t nl = text.find('\n', line_start);
    const std::size_t line_end = nl == std::string_view::npos ? text.size() : nl;
    const auto line = text.substr(line_start, line_end - line_start);
    const bool blank = collapse_whitespace(line).empty();
    if (blank) {
      if (para_start != std::string_view::npos) out.push_back({para_start, para_end});
      para_start = std::string_view::npos;
    } else {
      if (para_start == std::string_view::npos) para_start = line_start;
      para_end = line_end;
    }
    if (nl == std::string_view::npos) break;
    line_start = nl + 1;
  }
  if (para_start != std::string_view::npos) out.push_back({para_start, para_end});
  return out;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size()) {
    std::size_t p = b;
    if (!chars::is_space(utf8::next(s, p))) break;
    b = p;
  }
  std::size_t e = s.size();
  while (e > b) {
    // Step back to the start of the previous scalar value.
    std::size_t p = e - 1;
    while (p > b && (static_cast<unsigned char>(s[p]) & 0xC0) == 0x80) --p;
    std::size_t q = p;
    if (!chars::is_space(utf8::next(s, q))) break;
    e = p;
  }
  return s.substr(b, e - b);
}

/// Latin letters must be a strict majority of all letters, and no Arabic
/// letter may appear. Digits and punctuation do not vote.
inline bool is_foreign(std::string_view inner) {
  std::size_t latin = 0;
  std::size_t other = 0;
  std::size_t pos = 0;
  while (pos < inner.size()) {
    const char32_t c = utf8::next(inner, pos);
    if (chars::is_latin_letter(c)) {
      ++latin;
    } else if (chars::is_arabic_letter(c)) {
      return false;
    } else if (chars::is_other_letter(c)) {
      ++other;
    }
  }
  return latin > 0 && latin > other;
}

inline char32_t first_char(std::string_view s) {
  std::size_t p = 0;
  return s.empty() ? 0 : utf8::next(s, p);
}

}  // namespace detail

inline ExtractResult extract_occurrences(const Document& doc,
                                         const ExtractConfig& cfg = {}) {
  ExtractResult result;
  std::size_t ordinal = 0;
  const std::string_view text = doc.text;

  for (const ByteSpan& para : detail::split_paragraphs(text)) {
    const auto para_text = text.substr(para.start, para.end - para.start);
    std::vector<Token> tokens = tokenize(para_text);
    for (Token& t : tokens) {
      t.char_start += para.start;
      t.char_end += para.start;
    }

    std::vector<std::size_t> open_stack;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].script != Script::kPunct) continue;
      const char32_t c = detail::first_char(tokens[i].text);
      if (chars::is_open_paren(c)) {
        open_stack.push_back(i);
      } else if (chars::is_close_paren(c)) {
        if (open_stack.empty()) {
          result.issues.push_back({ErrorCode::kUnbalancedParentheses, doc.doc_id,
                                   tokens[i].char_start,
                                   "closing parenthesis without opening"});
          continue;
        }
        pairs.emplace_back(open_stack.back(), i);
        open_stack.pop_back();
      }
    }
    for (std::size_t open : open_stack) {
      result.issues.push_back({ErrorCode::kUnbalancedParentheses, doc.doc_id,
                               tokens[open].char_start,
                               "opening parenthesis never closed"});
    }
    std::sort(pairs.begin(), pairs.end());

    for (const auto& [open, close] : pairs) {
      const std::size_t inner_start = tokens[open].char_end;
      const std::size_t inner_end = tokens[close].char_start;
      const auto inner = detail::trim(text.substr(inner_start, inner_end - inner_start));
      if (inner.empty() || !detail::is_foreign(inner)) continue;

      std::vector<Token> words;
      std::vector<Token> pending_dashes;
      std::size_t n_words = 0;
      for (std::size_t k = open; k-- > 0;) {
        const Token& t = tokens[k];
        if (t.script == Script::kPunct) {
          const char32_t c = detail::first_char(t.text);
          if (chars::is_dash(c)) {
            if (n_words > 0) pending_dashes.push_back(t);
            continue;
          }
          break;
        }
        if (t.script != Script::kArabic) break;
        for (Token& d : pending_dashes) words.push_back(std::move(d));
        pending_dashes.clear();
        words.push_back(t);
        if (++n_words >= cfg.max_window) break;
      }
      if (n_words == 0) {
        ++result.dropped_no_context;
        continue;
      }

      Occurrence occ;
      occ.occurrence_id = doc.doc_id + ":" + std::to_string(++ordinal);
      occ.doc_id = doc.doc_id;
      occ.book_id = doc.book_id;
      occ.foreign_term = std::string(inner);
      occ.foreign_char_span = {tokens[open].char_start, tokens[close].char_end};
      occ.context_text = std::string(para_text);
      occ.context_offset = para.start;
      occ.preceding_words = std::move(words);
      result.occurrences.push_back(std::move(occ));
    }
  }
  return result;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Each `*.txt` file directly under `root` is one book (book_id = stem);
/// each subdirectory is one book whose `*.txt` files are its documents.
/// Ordering is lexicographic so repeated runs see the same corpus.
inline std::vector<Document> load_corpus(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) {
    if (fs::is_regular_file(root)) {
      return {Document{root.stem().string(), root.stem().string(),
                       read_file(root), root.string()}};
    }
    throw Error(ErrorCode::kIoFailure, "no such input directory: " + root.string());
  }
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(root)) entries.push_back(e.path());
  std::sort(entries.begin(), entries.end());

  std::vector<Document> docs;
  for (const auto& p : entries) {
    if (fs::is_regular_file(p) && p.extension() == ".txt") {
      const std::string stem = p.stem().string();
      docs.push_back({stem, stem, read_file(p), p.string()});
    } else if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      const std::string book = p.filename().string();
      for (const auto& f : files) {
        docs.push_back({book + "/" + f.stem().string(), book, read_file(f), f.string()});
      }
    }
  }
  return docs;
}

}  // namespace masrad
