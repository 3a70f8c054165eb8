#pragma once

// Annotation log replay, termbase assembly, export/import and the
// consistency report.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "masrad/candgen.hpp"
#include "masrad/csv.hpp"
#include "masrad/error.hpp"
#include "masrad/eval.hpp"
#include "masrad/extract.hpp"

namespace masrad {

// ---- timestamps ------------------------------------------------------------

/// Milliseconds since the Unix epoch, rendered as "YYYY-MM-DDTHH:MM:SS.mmmZ".
inline std::string format_timestamp(std::int64_t epoch_ms) {
  const std::time_t secs = static_cast<std::time_t>(epoch_ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(epoch_ms % 1000));
  return buf;
}

inline std::int64_t parse_timestamp(std::string_view s) {
  std::tm tm{};
  int ms = 0;
  const std::string str(s);
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ", &tm.tm_year, &tm.tm_mon,
                  &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms) < 6) {
    throw Error(ErrorCode::kParse, "bad timestamp '" + str + "'");
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return static_cast<std::int64_t>(timegm(&tm)) * 1000 + ms;
}

inline std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// ---- annotations -----------------------------------------------------------

enum class Provenance { kHeuristicDraft, kExpert };

inline std::string_view provenance_name(Provenance p) {
  return p == Provenance::kExpert ? "expert" : "heuristic-draft";
}

inline Provenance parse_provenance(std::string_view s) {
  if (s == "expert") return Provenance::kExpert;
  if (s == "heuristic-draft") return Provenance::kHeuristicDraft;
  throw Error(ErrorCode::kParse, "unknown provenance '" + std::string(s) + "'");
}

struct AnnotationRecord {
  std::string candidate_id;
  std::string occurrence_id;
  bool label = false;
  Provenance provenance = Provenance::kHeuristicDraft;
  std::string reviewer;
  std::int64_t timestamp_ms = 0;
  /// Set on expert-only candidates that did not come from generation.
  std::optional<std::string> custom_term;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

/// Materialized view of an append-only annotation log. Per candidate the
/// effective label is the latest expert record, else the latest draft; once
/// an occurrence has an expert True, candidates without their own expert
/// record read as False.
class AnnotationState {
 public:
  struct CustomCandidate {
    std::string candidate_id;
    std::string surface;
  };

  AnnotationState() = default;
  explicit AnnotationState(const std::vector<AnnotationRecord>& log) {
    for (const auto& r : log) apply(r);
  }

  void apply(const AnnotationRecord& r) {
    auto& occ = occurrences_[r.occurrence_id];
    auto& slot = occ.candidates[r.candidate_id];
    const Versioned v{r, seq_++};
    if (r.provenance == Provenance::kExpert) {
      slot.expert = v;
      occ.reviewed = true;
    } else {
      slot.draft = v;
    }
    if (r.custom_term) {
      auto& customs = occ.custom;
      if (std::none_of(customs.begin(), customs.end(),
                       [&](const CustomCandidate& c) { return c.candidate_id == r.candidate_id; })) {
        customs.push_back({r.candidate_id, *r.custom_term});
      }
    }
    ++size_;
  }

  std::optional<bool> label(const std::string& occurrence_id, const std::string& candidate_id) const {
    auto it = occurrences_.find(occurrence_id);
    if (it == occurrences_.end()) return std::nullopt;
    const auto labels = it->second.effective();
    auto lit = labels.find(candidate_id);
    if (lit == labels.end()) return std::nullopt;
    return lit->second;
  }

  /// All effective labels of one occurrence.
  std::map<std::string, bool> labels(const std::string& occurrence_id) const {
    auto it = occurrences_.find(occurrence_id);
    return it == occurrences_.end() ? std::map<std::string, bool>{} : it->second.effective();
  }

  std::optional<std::string> true_candidate(const std::string& occurrence_id) const {
    for (const auto& [cand, label] : labels(occurrence_id)) {
      if (label) return cand;
    }
    return std::nullopt;
  }

  /// The candidate an expert marked True, if any.
  std::optional<std::string> expert_choice(const std::string& occurrence_id) const {
    auto it = occurrences_.find(occurrence_id);
    if (it == occurrences_.end()) return std::nullopt;
    for (const auto& [cand, slot] : it->second.candidates) {
      if (slot.expert && slot.expert->record.label) return cand;
    }
    return std::nullopt;
  }

  std::optional<Provenance> provenance(const std::string& occurrence_id,
                                       const std::string& candidate_id) const {
    auto it = occurrences_.find(occurrence_id);
    if (it == occurrences_.end()) return std::nullopt;
    auto cit = it->second.candidates.find(candidate_id);
    if (cit == it->second.candidates.end()) return std::nullopt;
    if (cit->second.expert) return Provenance::kExpert;
    if (cit->second.draft) return Provenance::kHeuristicDraft;
    return std::nullopt;
  }

  /// The record the candidate's current label comes from.
  std::optional<AnnotationRecord> deciding_record(const std::string& occurrence_id,
                                                  const std::string& candidate_id) const {
    auto it = occurrences_.find(occurrence_id);
    if (it == occurrences_.end()) return std::nullopt;
    auto cit = it->second.candidates.find(candidate_id);
    if (cit == it->second.candidates.end()) return std::nullopt;
    if (cit->second.expert) return cit->second.expert->record;
    if (cit->second.draft) return cit->second.draft->record;
    return std::nullopt;
  }

  bool reviewed(const std::string& occurrence_id) const {
    auto it = occurrences_.find(occurrence_id);
    return it != occurrences_.end() && it->second.reviewed;
  }

  std::vector<CustomCandidate> custom_candidates(const std::string& occurrence_id) const {
    auto it = occurrences_.find(occurrence_id);
    return it == occurrences_.end() ? std::vector<CustomCandidate>{} : it->second.custom;
  }

  /// Every candidate id referenced by the log, with its occurrence.
  std::vector<std::pair<std::string, std::string>> referenced() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [occ, state] : occurrences_) {
      for (const auto& [cand, slot] : state.candidates) out.emplace_back(occ, cand);
    }
    return out;
  }

  /// Records to append so that `candidate_id` reads `label`. Setting True
  /// also emits False records for whichever candidate currently reads
  /// True. Returns nothing when the write would be a no-op: for drafts, an
  /// identical latest draft; for experts, an identical expert record less
  /// than `dedupe_ms` old.
  std::vector<AnnotationRecord> plan(const AnnotationRecord& want, std::int64_t dedupe_ms = 1000) const {
    const auto occ_it = occurrences_.find(want.occurrence_id);
    if (occ_it != occurrences_.end()) {
      auto cit = occ_it->second.candidates.find(want.candidate_id);
      if (cit != occ_it->second.candidates.end()) {
        const auto& slot = cit->second;
        if (want.provenance == Provenance::kHeuristicDraft && slot.draft &&
            slot.draft->record.label == want.label) {
          return {};
        }
        if (want.provenance == Provenance::kExpert && slot.expert &&
            slot.expert->record.label == want.label &&
            want.timestamp_ms - slot.expert->record.timestamp_ms < dedupe_ms &&
            want.timestamp_ms >= slot.expert->record.timestamp_ms) {
          return {};
        }
      }
    }
    std::vector<AnnotationRecord> out;
    if (want.label && occ_it != occurrences_.end()) {
      const auto& occ = occ_it->second;
      const auto current = occ.effective();
      for (const auto& [cand, label] : current) {
        if (cand == want.candidate_id) continue;
        const auto& slot = occ.candidates.at(cand);
        const bool draft_true = slot.draft && slot.draft->record.label;
        const bool expert_true = slot.expert && slot.expert->record.label;
        // Drafts only flip drafts; experts flip whatever reads True.
        if (want.provenance == Provenance::kHeuristicDraft ? draft_true : (label || expert_true)) {
          AnnotationRecord flip = want;
          flip.candidate_id = cand;
          flip.label = false;
          flip.custom_term.reset();
          for (const auto& cc : occ.custom) {
            if (cc.candidate_id == cand) flip.custom_term = cc.surface;
          }
          out.push_back(std::move(flip));
        }
      }
    }
    out.push_back(want);
    return out;
  }

  std::size_t size() const { return size_; }

  /// Only the records that still determine the view: latest expert and
  /// latest draft per candidate, in original order.
  std::vector<AnnotationRecord> compacted() const {
    std::vector<std::pair<std::uint64_t, AnnotationRecord>> keep;
    for (const auto& [occ, state] : occurrences_) {
      for (const auto& [cand, slot] : state.candidates) {
        if (slot.draft) keep.emplace_back(slot.draft->seq, slot.draft->record);
        if (slot.expert) keep.emplace_back(slot.expert->seq, slot.expert->record);
      }
    }
    std::sort(keep.begin(), keep.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<AnnotationRecord> out;
    for (auto& [seq, rec] : keep) out.push_back(std::move(rec));
    return out;
  }

 private:
  struct Versioned {
    AnnotationRecord record;
    std::uint64_t seq = 0;
  };
  struct Slot {
    std::optional<Versioned> expert;
    std::optional<Versioned> draft;
  };
  struct OccState {
    std::map<std::string, Slot> candidates;
    std::vector<CustomCandidate> custom;
    bool reviewed = false;

    std::map<std::string, bool> effective() const {
      bool expert_true = false;
      for (const auto& [cand, slot] : candidates) {
        expert_true = expert_true || (slot.expert && slot.expert->record.label);
      }
      std::map<std::string, bool> out;
      std::string latest_true;
      std::uint64_t latest_seq = 0;
      for (const auto& [cand, slot] : candidates) {
        const Versioned* v = slot.expert ? &*slot.expert : (slot.draft ? &*slot.draft : nullptr);
        if (v == nullptr) continue;
        bool label = v->record.label;
        if (expert_true && !slot.expert) label = false;
        out[cand] = label;
        if (label && (latest_true.empty() || v->seq > latest_seq)) {
          latest_true = cand;
          latest_seq = v->seq;
        }
      }
      // A hand-edited log may hold several Trues; the newest wins.
      for (auto& [cand, label] : out) label = label && cand == latest_true;
      return out;
    }
  };

  std::map<std::string, OccState> occurrences_;
  std::uint64_t seq_ = 0;
  std::size_t size_ = 0;
};

// ---- termbase --------------------------------------------------------------

enum class TranslationStatus { kAuto, kExpertConfirmed, kExpertCorrected };

inline std::string_view status_name(TranslationStatus s) {
  switch (s) {
    case TranslationStatus::kAuto: return "auto";
    case TranslationStatus::kExpertConfirmed: return "expert-confirmed";
    case TranslationStatus::kExpertCorrected: return "expert-corrected";
  }
  return "auto";
}

inline TranslationStatus parse_status(std::string_view s) {
  if (s == "auto") return TranslationStatus::kAuto;
  if (s == "expert-confirmed") return TranslationStatus::kExpertConfirmed;
  if (s == "expert-corrected") return TranslationStatus::kExpertCorrected;
  throw Error(ErrorCode::kParse, "unknown status '" + std::string(s) + "'");
}

struct TermbaseTranslation {
  std::string arabic_term;
  double aggregate_score = 0.0;
  std::size_t occurrence_count = 0;
  TranslationStatus status = TranslationStatus::kAuto;
  bool preferred = false;
  std::vector<std::string> evidence;

  friend bool operator==(const TermbaseTranslation&, const TermbaseTranslation&) = default;
};

struct TermbaseEntry {
  std::string foreign_term;
  std::vector<TermbaseTranslation> translations;
  std::vector<std::string> evidence;

  friend bool operator==(const TermbaseEntry&, const TermbaseEntry&) = default;
};

/// The automatic pick for one occurrence (model head or heuristic argmax).
struct OccurrenceSelection {
  std::string occurrence_id;
  std::string candidate_id;
  double score = 0.0;
};

/// Score given to an occurrence whose translation an expert chose.
inline constexpr double kExpertScore = 1.0;

/// Groups per-occurrence choices by normalized foreign term. Expert labels
/// override automatic selections; an occurrence an expert reviewed without
/// accepting any candidate contributes nothing.
inline std::vector<TermbaseEntry> build_termbase(const std::vector<Occurrence>& occurrences,
                                                 const std::vector<Candidate>& candidates,
                                                 const std::vector<OccurrenceSelection>& selections,
                                                 const AnnotationState& annotations) {
  std::map<std::string, const Occurrence*> occ_by_id;
  for (const auto& o : occurrences) occ_by_id[o.occurrence_id] = &o;
  std::map<std::string, const Candidate*> cand_by_id;
  for (const auto& c : candidates) cand_by_id[c.candidate_id] = &c;

  std::map<std::string, const OccurrenceSelection*> sel_by_occ;
  for (const auto& s : selections) {
    if (occ_by_id.count(s.occurrence_id) == 0) {
      throw Error(ErrorCode::kDanglingReference, "selection for unknown occurrence " + s.occurrence_id);
    }
    if (cand_by_id.count(s.candidate_id) == 0) {
      throw Error(ErrorCode::kDanglingReference, "selection of unknown candidate " + s.candidate_id);
    }
    sel_by_occ[s.occurrence_id] = &s;
  }
  for (const auto& [occ, cand] : annotations.referenced()) {
    if (occ_by_id.count(occ) == 0) {
      throw Error(ErrorCode::kDanglingReference, "annotation for unknown occurrence " + occ);
    }
    const auto customs = annotations.custom_candidates(occ);
    const bool custom = std::any_of(customs.begin(), customs.end(),
                                    [&](const auto& c) { return c.candidate_id == cand; });
    if (!custom && cand_by_id.count(cand) == 0) {
      throw Error(ErrorCode::kDanglingReference, "annotation for unknown candidate " + cand);
    }
  }

  struct Choice {
    std::string occurrence_id;
    std::string surface;
    double score = 0.0;
    TranslationStatus status = TranslationStatus::kAuto;
  };
  std::map<std::string, std::vector<Choice>> by_term;

  for (const auto& o : occurrences) {
    const auto sel = sel_by_occ.find(o.occurrence_id);
    const OccurrenceSelection* auto_pick = sel == sel_by_occ.end() ? nullptr : sel->second;
    Choice choice;
    choice.occurrence_id = o.occurrence_id;
    if (auto expert = annotations.expert_choice(o.occurrence_id)) {
      if (auto c = cand_by_id.find(*expert); c != cand_by_id.end()) {
        choice.surface = c->second->surface;
      } else {
        for (const auto& cc : annotations.custom_candidates(o.occurrence_id)) {
          if (cc.candidate_id == *expert) choice.surface = cc.surface;
        }
      }
      choice.score = kExpertScore;
      const bool agrees =
          auto_pick != nullptr &&
          (auto_pick->candidate_id == *expert ||
           arabic_term_key(cand_by_id.at(auto_pick->candidate_id)->surface) ==
               arabic_term_key(choice.surface));
      choice.status = agrees ? TranslationStatus::kExpertConfirmed : TranslationStatus::kExpertCorrected;
    } else if (annotations.reviewed(o.occurrence_id) || auto_pick == nullptr) {
      continue;
    } else {
      choice.surface = cand_by_id.at(auto_pick->candidate_id)->surface;
      choice.score = auto_pick->score;
    }
    by_term[foreign_term_key(o.foreign_term)].push_back(std::move(choice));
  }

  std::vector<TermbaseEntry> entries;
  for (auto& [term, choices] : by_term) {
    std::vector<OccurrenceRanking> rankings;
    for (const auto& c : choices) rankings.push_back({c.occurrence_id, {{c.surface, c.score}}});
    TermbaseEntry entry;
    entry.foreign_term = term;
    for (const auto& s : aggregate_suggestions(rankings)) {
      TermbaseTranslation t;
      t.arabic_term = s.arabic_term;
      t.aggregate_score = s.aggregate_score;
      const std::string key = arabic_term_key(s.arabic_term);
      for (const auto& c : choices) {
        if (arabic_term_key(c.surface) != key) continue;
        t.evidence.push_back(c.occurrence_id);
        t.status = std::max(t.status, c.status);
      }
      t.occurrence_count = t.evidence.size();
      entry.translations.push_back(std::move(t));
    }
    // Preferred: the best-scored expert translation, else the top one.
    auto pref = std::find_if(entry.translations.begin(), entry.translations.end(),
                             [](const auto& t) { return t.status != TranslationStatus::kAuto; });
    if (pref == entry.translations.end()) pref = entry.translations.begin();
    pref->preferred = true;
    std::rotate(entry.translations.begin(), pref, pref + 1);
    for (const auto& c : choices) entry.evidence.push_back(c.occurrence_id);
    entries.push_back(std::move(entry));
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.foreign_term < b.foreign_term; });
  return entries;
}

// ---- export / import -------------------------------------------------------

namespace detail {

inline std::string tsv_field(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

inline std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab == std::string_view::npos ? line.size() - start : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

}  // namespace detail

inline constexpr std::string_view kTermbaseTsvHeader = "foreign_term\tarabic_term\tscore\toccurrences\tstatus\n";

/// One row per translation, preferred first; entries in byte order of
/// foreign_term.
inline std::string export_tsv(std::vector<TermbaseEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.foreign_term < b.foreign_term; });
  std::string out(kTermbaseTsvHeader);
  for (const auto& e : entries) {
    for (const auto& t : e.translations) {
      out += detail::tsv_field(e.foreign_term) + "\t" + detail::tsv_field(t.arabic_term) + "\t" +
             format_double(t.aggregate_score) + "\t" + std::to_string(t.occurrence_count) + "\t" +
             std::string(status_name(t.status)) + "\n";
    }
  }
  return out;
}

/// Inverse of export_tsv. Evidence is not part of the TSV and comes back
/// empty; the first row of each term is the preferred translation.
inline std::vector<TermbaseEntry> import_tsv(std::string_view text) {
  std::vector<TermbaseEntry> entries;
  std::size_t start = 0;
  bool header = true;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(start, nl - start);
    start = nl + 1;
    if (header) {
      if (std::string(line) + "\n" != kTermbaseTsvHeader) {
        throw Error(ErrorCode::kParse, "termbase TSV header mismatch");
      }
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = detail::split_tabs(line);
    if (f.size() != 5) throw Error(ErrorCode::kParse, "termbase TSV row needs 5 fields");
    if (entries.empty() || entries.back().foreign_term != f[0]) entries.push_back({f[0], {}, {}});
    TermbaseTranslation t;
    t.arabic_term = f[1];
    t.aggregate_score = parse_double(f[2]);
    t.occurrence_count = static_cast<std::size_t>(parse_int(f[3]));
    t.status = parse_status(f[4]);
    t.preferred = entries.back().translations.empty();
    entries.back().translations.push_back(std::move(t));
  }
  return entries;
}

// ---- consistency -------------------------------------------------------------

struct InconsistentTerm {
  std::string foreign_term;
  /// (arabic term, occurrence ids)
  std::vector<std::pair<std::string, std::vector<std::string>>> translations;
};

/// Terms rendered with two or more distinct normalized Arabic translations.
inline std::vector<InconsistentTerm> consistency_report(const std::vector<TermbaseEntry>& entries) {
  std::vector<InconsistentTerm> out;
  for (const auto& e : entries) {
    std::map<std::string, std::pair<std::string, std::vector<std::string>>> distinct;
    for (const auto& t : e.translations) {
      auto& slot = distinct[arabic_term_key(t.arabic_term)];
      if (slot.first.empty()) slot.first = t.arabic_term;
      slot.second.insert(slot.second.end(), t.evidence.begin(), t.evidence.end());
    }
    if (distinct.size() < 2) continue;
    InconsistentTerm it{e.foreign_term, {}};
    for (const auto& t : e.translations) {
      auto d = distinct.find(arabic_term_key(t.arabic_term));
      if (d == distinct.end()) continue;
      it.translations.push_back(d->second);
      distinct.erase(d);
    }
    out.push_back(std::move(it));
  }
  return out;
}

inline std::string consistency_tsv(const std::vector<InconsistentTerm>& report) {
  std::string out = "foreign_term\tarabic_term\toccurrences\toccurrence_ids\n";
  for (const auto& r : report) {
    for (const auto& [term, ids] : r.translations) {
      std::string joined;
      for (const auto& id : ids) joined += (joined.empty() ? "" : " ") + id;
      out += detail::tsv_field(r.foreign_term) + "\t" + detail::tsv_field(term) + "\t" +
             std::to_string(ids.size()) + "\t" + detail::tsv_field(joined) + "\n";
    }
  }
  return out;
}

}  // namespace masrad
