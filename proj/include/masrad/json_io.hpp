#pragma once

// JSON (de)serialization of the stored record types.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "masrad/candgen.hpp"
#include "masrad/error.hpp"
#include "masrad/eval.hpp"
#include "masrad/extract.hpp"
#include "masrad/features.hpp"
#include "masrad/heuristic.hpp"
#include "masrad/termbase.hpp"

namespace masrad {

using json = nlohmann::ordered_json;

inline json to_json(const Token& t) {
  return {{"text", t.text},
          {"char_start", t.char_start},
          {"char_end", t.char_end},
          {"script", std::string(script_name(t.script))}};
}

inline Token token_from_json(const json& j) {
  Token t;
  t.text = j.at("text").get<std::string>();
  t.char_start = j.at("char_start").get<std::size_t>();
  t.char_end = j.at("char_end").get<std::size_t>();
  t.script = classify_script(t.text);
  return t;
}

inline json to_json(const Occurrence& o) {
  json words = json::array();
  for (const auto& t : o.preceding_words) words.push_back(to_json(t));
  return {{"occurrence_id", o.occurrence_id},
          {"doc_id", o.doc_id},
          {"book_id", o.book_id},
          {"foreign_term", o.foreign_term},
          {"foreign_char_span", {o.foreign_char_span.start, o.foreign_char_span.end}},
          {"context_text", o.context_text},
          {"context_offset", o.context_offset},
          {"preceding_words", std::move(words)}};
}

inline Occurrence occurrence_from_json(const json& j) {
  Occurrence o;
  o.occurrence_id = j.at("occurrence_id").get<std::string>();
  o.doc_id = j.at("doc_id").get<std::string>();
  o.book_id = j.at("book_id").get<std::string>();
  o.foreign_term = j.at("foreign_term").get<std::string>();
  o.foreign_char_span = {j.at("foreign_char_span").at(0).get<std::size_t>(),
                         j.at("foreign_char_span").at(1).get<std::size_t>()};
  o.context_text = j.at("context_text").get<std::string>();
  o.context_offset = j.at("context_offset").get<std::size_t>();
  for (const auto& w : j.at("preceding_words")) o.preceding_words.push_back(token_from_json(w));
  return o;
}

inline json to_json(const Candidate& c) {
  return {{"candidate_id", c.candidate_id},
          {"occurrence_id", c.occurrence_id},
          {"word_count", c.word_count},
          {"surface", c.surface},
          {"normalized", c.normalized},
          {"variant", c.variant},
          {"span", {c.span.start, c.span.end}}};
}

inline Candidate candidate_from_json(const json& j) {
  Candidate c;
  c.candidate_id = j.at("candidate_id").get<std::string>();
  c.occurrence_id = j.at("occurrence_id").get<std::string>();
  c.word_count = j.at("word_count").get<std::size_t>();
  c.surface = j.at("surface").get<std::string>();
  c.normalized = j.at("normalized").get<std::string>();
  c.variant = j.value("variant", false);
  c.span = {j.at("span").at(0).get<std::size_t>(), j.at("span").at(1).get<std::size_t>()};
  return c;
}

inline json to_json(const HeuristicScore& s) {
  return {{"candidate_id", s.candidate_id}, {"occurrence_id", s.occurrence_id},
          {"word_count", s.word_count},     {"s_l", s.s_l},
          {"s_s", s.s_s},                   {"s_e", s.s_e},
          {"s_p", s.s_p},                   {"s_pos", s.s_pos},
          {"total", s.total},               {"complete", s.complete}};
}

inline HeuristicScore heuristic_score_from_json(const json& j) {
  HeuristicScore s;
  s.candidate_id = j.at("candidate_id").get<std::string>();
  s.occurrence_id = j.at("occurrence_id").get<std::string>();
  s.word_count = j.at("word_count").get<std::size_t>();
  s.s_l = j.at("s_l").get<double>();
  s.s_s = j.at("s_s").get<double>();
  s.s_e = j.at("s_e").get<double>();
  s.s_p = j.at("s_p").get<double>();
  s.s_pos = j.at("s_pos").get<double>();
  s.total = j.at("total").get<double>();
  s.complete = j.at("complete").get<bool>();
  return s;
}

inline json to_json(const AnnotationRecord& r) {
  json j = {{"candidate_id", r.candidate_id},
            {"occurrence_id", r.occurrence_id},
            {"label", r.label},
            {"provenance", std::string(provenance_name(r.provenance))},
            {"reviewer", r.reviewer},
            {"timestamp", format_timestamp(r.timestamp_ms)}};
  if (r.custom_term) j["custom_term"] = *r.custom_term;
  return j;
}

inline AnnotationRecord annotation_from_json(const json& j) {
  AnnotationRecord r;
  r.candidate_id = j.at("candidate_id").get<std::string>();
  r.occurrence_id = j.at("occurrence_id").get<std::string>();
  r.label = j.at("label").get<bool>();
  r.provenance = parse_provenance(j.at("provenance").get<std::string>());
  r.reviewer = j.value("reviewer", "");
  r.timestamp_ms = parse_timestamp(j.at("timestamp").get<std::string>());
  if (j.contains("custom_term")) r.custom_term = j.at("custom_term").get<std::string>();
  return r;
}

inline json to_json(const TermbaseEntry& e) {
  json translations = json::array();
  for (const auto& t : e.translations) {
    translations.push_back({{"arabic_term", t.arabic_term},
                            {"aggregate_score", t.aggregate_score},
                            {"occurrence_count", t.occurrence_count},
                            {"status", std::string(status_name(t.status))},
                            {"preferred", t.preferred},
                            {"evidence", t.evidence}});
  }
  return {{"foreign_term", e.foreign_term}, {"translations", std::move(translations)}, {"evidence", e.evidence}};
}

inline TermbaseEntry termbase_entry_from_json(const json& j) {
  TermbaseEntry e;
  e.foreign_term = j.at("foreign_term").get<std::string>();
  for (const auto& t : j.at("translations")) {
    TermbaseTranslation tr;
    tr.arabic_term = t.at("arabic_term").get<std::string>();
    tr.aggregate_score = t.at("aggregate_score").get<double>();
    tr.occurrence_count = t.at("occurrence_count").get<std::size_t>();
    tr.status = parse_status(t.at("status").get<std::string>());
    tr.preferred = t.at("preferred").get<bool>();
    tr.evidence = t.value("evidence", std::vector<std::string>{});
    e.translations.push_back(std::move(tr));
  }
  e.evidence = j.value("evidence", std::vector<std::string>{});
  return e;
}

inline json to_json(const Prf& p) {
  return {{"precision", p.precision},
          {"recall", p.recall},
          {"f1", p.f1},
          {"tp", p.counts.tp},
          {"fp", p.counts.fp},
          {"fn", p.counts.fn},
          {"tn", p.counts.tn},
          {"degenerate_precision", p.degenerate_precision},
          {"degenerate_recall", p.degenerate_recall}};
}

inline json to_json(const EvaluationReport& r) {
  json books = json::object();
  for (const auto& [b, p] : r.per_book) books[b] = to_json(p);
  return {{"mode", std::string(eval_mode_name(r.mode))}, {"overall", to_json(r.overall)}, {"per_book", std::move(books)}};
}

inline json to_json(const StatsReport& s) {
  return {{"books", s.books},
          {"unique_foreign_terms", s.unique_foreign_terms},
          {"occurrences", s.occurrences},
          {"candidates", s.candidates},
          {"average_candidates", s.average_candidates}};
}

inline json to_json(const std::vector<InconsistentTerm>& report) {
  json out = json::array();
  for (const auto& r : report) {
    json translations = json::array();
    for (const auto& [term, ids] : r.translations) {
      translations.push_back({{"arabic_term", term}, {"occurrences", ids.size()}, {"occurrence_ids", ids}});
    }
    out.push_back({{"foreign_term", r.foreign_term}, {"translations", std::move(translations)}});
  }
  return out;
}

/// One compact JSON document per line, LF-terminated.
template <typename T>
std::string to_jsonl(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    out += to_json(item).dump();
    out += '\n';
  }
  return out;
}

template <typename Fn>
auto from_jsonl(std::string_view text, Fn&& parse) {
  std::vector<decltype(parse(json{}))> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(parse(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline std::string export_jsonl(std::vector<TermbaseEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.foreign_term < b.foreign_term; });
  return to_jsonl(entries);
}

inline std::vector<TermbaseEntry> import_jsonl(std::string_view text) {
  return from_jsonl(text, termbase_entry_from_json);
}

}  // namespace masrad
