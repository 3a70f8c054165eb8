#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "masrad/json_io.hpp"
#include "masrad/store.hpp"
#include "masrad/termbase.hpp"
#include "test_util.hpp"

namespace masrad {
namespace {

AnnotationRecord rec(const std::string& occ, const std::string& cand, bool label, Provenance p,
                     std::int64_t ts = 0) {
  AnnotationRecord r;
  r.occurrence_id = occ;
  r.candidate_id = cand;
  r.label = label;
  r.provenance = p;
  r.reviewer = p == Provenance::kExpert ? "expert" : "heuristic";
  r.timestamp_ms = ts;
  return r;
}

void post(AnnotationState& state, std::vector<AnnotationRecord>& log, const AnnotationRecord& want) {
  for (const auto& r : state.plan(want)) {
    state.apply(r);
    log.push_back(r);
  }
}

std::size_t true_count(const AnnotationState& s, const std::string& occ) {
  std::size_t n = 0;
  for (const auto& [c, l] : s.labels(occ)) n += l;
  return n;
}

struct Fixture {
  std::vector<Occurrence> occurrences;
  std::vector<Candidate> candidates;
};

Fixture ethnocentrism() {
  Fixture f;
  f.occurrences = extract_occurrences(load_corpus(testing::samples_dir() / "ethnocentrism").at(0)).occurrences;
  for (const auto& o : f.occurrences) {
    for (auto& c : generate_candidates(o)) f.candidates.push_back(std::move(c));
  }
  return f;
}

// essays:1#1 الإثنية, essays:2#2 الإثنية المركزية
std::vector<OccurrenceSelection> auto_picks() {
  return {{"essays:1", "essays:1#1", 1.25}, {"essays:2", "essays:2#2", 1.5}};
}

TEST(Timestamp, RoundTrip) {
  EXPECT_EQ(format_timestamp(0), "1970-01-01T00:00:00.000Z");
  EXPECT_EQ(format_timestamp(1760000000123), "2025-10-09T08:53:20.123Z");
  EXPECT_EQ(parse_timestamp("2025-10-09T08:53:20.123Z"), 1760000000123);
  EXPECT_EQ(parse_timestamp("2025-10-09T08:53:20Z"), 1760000000000);
  EXPECT_MASRAD_ERROR(parse_timestamp("yesterday"), ErrorCode::kParse);
}

TEST(AnnotationState, ExpertSupersedesDraft) {
  AnnotationState s;
  std::vector<AnnotationRecord> log;
  post(s, log, rec("o", "o#1", true, Provenance::kHeuristicDraft));
  post(s, log, rec("o", "o#2", false, Provenance::kHeuristicDraft));
  EXPECT_EQ(s.true_candidate("o"), "o#1");
  EXPECT_FALSE(s.reviewed("o"));

  post(s, log, rec("o", "o#2", true, Provenance::kExpert, 5000));
  EXPECT_EQ(s.true_candidate("o"), "o#2");
  EXPECT_EQ(s.expert_choice("o"), "o#2");
  EXPECT_EQ(s.label("o", "o#1"), false);
  EXPECT_TRUE(s.reviewed("o"));
  EXPECT_EQ(s.provenance("o", "o#1"), Provenance::kExpert);  // flipped by the expert post

  // Later drafts cannot override the expert view.
  post(s, log, rec("o", "o#1", true, Provenance::kHeuristicDraft));
  EXPECT_EQ(s.true_candidate("o"), "o#2");
  EXPECT_EQ(true_count(s, "o"), 1u);
}

TEST(AnnotationState, DraftReplayIsIdempotent) {
  AnnotationState s;
  std::vector<AnnotationRecord> log;
  post(s, log, rec("o", "o#1", true, Provenance::kHeuristicDraft));
  post(s, log, rec("o", "o#2", false, Provenance::kHeuristicDraft));
  const auto n = log.size();
  post(s, log, rec("o", "o#1", true, Provenance::kHeuristicDraft));
  post(s, log, rec("o", "o#2", false, Provenance::kHeuristicDraft));
  EXPECT_EQ(log.size(), n);
}

TEST(AnnotationState, ExpertDedupeWindow) {
  AnnotationState s;
  std::vector<AnnotationRecord> log;
  post(s, log, rec("o", "o#1", true, Provenance::kExpert, 10'000));
  post(s, log, rec("o", "o#1", true, Provenance::kExpert, 10'999));
  EXPECT_EQ(log.size(), 1u);
  post(s, log, rec("o", "o#1", true, Provenance::kExpert, 11'000));
  EXPECT_EQ(log.size(), 2u);
  post(s, log, rec("o", "o#1", false, Provenance::kExpert, 11'001));
  EXPECT_EQ(log.size(), 3u);
  EXPECT_FALSE(s.true_candidate("o").has_value());
  EXPECT_TRUE(s.reviewed("o"));
}

TEST(AnnotationState, HandEditedLogNewestTrueWins) {
  const AnnotationState s({rec("o", "o#1", true, Provenance::kExpert), rec("o", "o#2", true, Provenance::kExpert)});
  EXPECT_EQ(s.true_candidate("o"), "o#2");
  EXPECT_EQ(true_count(s, "o"), 1u);
}

// At most one True per occurrence, and an expert True always becomes the
// occurrence's True candidate.
TEST(AnnotationState, OneTrueUnderRandomPosts) {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    AnnotationState s;
    std::vector<AnnotationRecord> log;
    std::int64_t clock = 0;
    for (int step = 0; step < 60; ++step) {
      const std::string occ = "o" + std::to_string(rng() % 3);
      const std::string cand = occ + "#" + std::to_string(1 + rng() % 4);
      const auto prov = rng() % 2 ? Provenance::kExpert : Provenance::kHeuristicDraft;
      clock += static_cast<std::int64_t>(rng() % 1500);
      const bool label = rng() % 3 != 0;
      post(s, log, rec(occ, cand, label, prov, clock));
      ASSERT_LE(true_count(s, occ), 1u);
      if (prov == Provenance::kExpert) {
        if (label) {
          ASSERT_EQ(s.true_candidate(occ), cand);
        } else {
          ASSERT_EQ(s.label(occ, cand), false);
        }
      }
    }
    // Replaying the log gives the same view, and so does its compaction.
    const AnnotationState replay(log);
    const AnnotationState compact(s.compacted());
    for (int o = 0; o < 3; ++o) {
      const std::string occ = "o" + std::to_string(o);
      ASSERT_EQ(replay.labels(occ), s.labels(occ));
      ASSERT_EQ(compact.labels(occ), s.labels(occ));
      ASSERT_EQ(compact.reviewed(occ), s.reviewed(occ));
    }
    ASSERT_LE(s.compacted().size(), log.size());
  }
}

TEST(AnnotationState, CustomTermsSurviveCompaction) {
  AnnotationState s;
  std::vector<AnnotationRecord> log;
  auto custom = rec("o", "o#x1", true, Provenance::kExpert, 0);
  custom.custom_term = "كتيبة العاصفة";
  post(s, log, custom);
  post(s, log, rec("o", "o#1", true, Provenance::kExpert, 5000));
  const AnnotationState compact(s.compacted());
  ASSERT_EQ(compact.custom_candidates("o").size(), 1u);
  EXPECT_EQ(compact.custom_candidates("o")[0].surface, "كتيبة العاصفة");
  EXPECT_EQ(compact.true_candidate("o"), "o#1");
}

TEST(Termbase, AutoSelectionsOnly) {
  const auto f = ethnocentrism();
  const auto entries = build_termbase(f.occurrences, f.candidates, auto_picks(), AnnotationState{});
  ASSERT_EQ(entries.size(), 1u);
  const auto& e = entries[0];
  EXPECT_EQ(e.foreign_term, "l’ethnocentrisme");
  ASSERT_EQ(e.translations.size(), 2u);
  EXPECT_EQ(e.translations[0].arabic_term, "الإثنية المركزية");
  EXPECT_TRUE(e.translations[0].preferred);
  EXPECT_EQ(e.translations[0].status, TranslationStatus::kAuto);
  EXPECT_EQ(e.translations[1].arabic_term, "الإثنية");
  EXPECT_EQ(e.evidence.size(), 2u);

  const auto report = consistency_report(entries);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].translations.size(), 2u);
  EXPECT_EQ(consistency_tsv(report),
            "foreign_term\tarabic_term\toccurrences\toccurrence_ids\n"
            "l’ethnocentrisme\tالإثنية المركزية\t1\tessays:2\n"
            "l’ethnocentrisme\tالإثنية\t1\tessays:1\n");
}

TEST(Termbase, AgreeingOccurrencesMerge) {
  const auto f = ethnocentrism();
  // essays:1 auto-selects الإثنية; the expert gives essays:2 the same term.
  AnnotationState s;
  std::vector<AnnotationRecord> log;
  auto custom = rec("essays:2", "essays:2#x1", true, Provenance::kExpert);
  custom.custom_term = "الاثنيّة";
  post(s, log, custom);
  const auto entries = build_termbase(f.occurrences, f.candidates, auto_picks(), s);
  ASSERT_EQ(entries.size(), 1u);
  ASSERT_EQ(entries[0].translations.size(), 1u);
  const auto& t = entries[0].translations[0];
  EXPECT_EQ(t.occurrence_count, 2u);
  EXPECT_DOUBLE_EQ(t.aggregate_score, 1.25 + kExpertScore);
  EXPECT_EQ(t.status, TranslationStatus::kExpertCorrected);
  EXPECT_TRUE(consistency_report(entries).empty());
}

TEST(Termbase, ExpertConfirmsOrCorrects) {
  const auto f = ethnocentrism();
  AnnotationState s;
  std::vector<AnnotationRecord> log;
  post(s, log, rec("essays:2", "essays:2#2", true, Provenance::kExpert));
  auto entries = build_termbase(f.occurrences, f.candidates, auto_picks(), s);
  EXPECT_EQ(entries[0].translations[0].arabic_term, "الإثنية المركزية");
  EXPECT_EQ(entries[0].translations[0].status, TranslationStatus::kExpertConfirmed);

  post(s, log, rec("essays:2", "essays:2#3", true, Provenance::kExpert, 5000));
  entries = build_termbase(f.occurrences, f.candidates, auto_picks(), s);
  const auto& pref = entries[0].translations[0];
  EXPECT_EQ(pref.arabic_term, "النزعة الإثنية المركزية");
  EXPECT_EQ(pref.status, TranslationStatus::kExpertCorrected);
  EXPECT_TRUE(pref.preferred);
  // Expert preference wins over a higher automatic score.
  EXPECT_DOUBLE_EQ(pref.aggregate_score, kExpertScore);
  EXPECT_DOUBLE_EQ(entries[0].translations[1].aggregate_score, 1.25);
}

TEST(Termbase, RejectedOccurrenceIsSkipped) {
  const auto f = ethnocentrism();
  AnnotationState s;
  std::vector<AnnotationRecord> log;
  post(s, log, rec("essays:1", "essays:1#1", false, Provenance::kExpert));
  const auto entries = build_termbase(f.occurrences, f.candidates, auto_picks(), s);
  ASSERT_EQ(entries[0].translations.size(), 1u);
  EXPECT_EQ(entries[0].evidence, (std::vector<std::string>{"essays:2"}));
}

TEST(Termbase, DanglingReferences) {
  const auto f = ethnocentrism();
  EXPECT_MASRAD_ERROR(build_termbase(f.occurrences, f.candidates, {{"essays:9", "essays:1#1", 1}}, {}),
                      ErrorCode::kDanglingReference);
  EXPECT_MASRAD_ERROR(build_termbase(f.occurrences, f.candidates, {{"essays:1", "essays:1#99", 1}}, {}),
                      ErrorCode::kDanglingReference);
  const AnnotationState s({rec("essays:1", "essays:1#42", true, Provenance::kExpert)});
  EXPECT_MASRAD_ERROR(build_termbase(f.occurrences, f.candidates, {}, s), ErrorCode::kDanglingReference);
}

TEST(Export, EmptyTermbaseIsHeaderOnly) {
  EXPECT_EQ(export_tsv({}), std::string(kTermbaseTsvHeader));
  EXPECT_TRUE(import_tsv(kTermbaseTsvHeader).empty());
  EXPECT_EQ(export_jsonl({}), "");
}

TEST(Export, RowsPerTranslation) {
  const auto f = ethnocentrism();
  const auto entries = build_termbase(f.occurrences, f.candidates, auto_picks(), {});
  EXPECT_EQ(export_tsv(entries),
            std::string(kTermbaseTsvHeader) +
                "l’ethnocentrisme\tالإثنية المركزية\t1.5\t1\tauto\n"
                "l’ethnocentrisme\tالإثنية\t1.25\t1\tauto\n");
}

TEST(Export, RoundTripsAreByteIdentical) {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  const std::vector<std::string> arabic = {"الإثنية", "الإثنية المركزية", "كتيبة العاصفة", "لوكهيد مارتن"};
  std::vector<TermbaseEntry> entries;
  for (int i = 0; i < 40; ++i) {
    TermbaseEntry e;
    e.foreign_term = "term " + std::to_string(i * 7919 % 101);
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k) {
      TermbaseTranslation t;
      t.arabic_term = arabic[(i + k) % arabic.size()];
      t.aggregate_score = u(rng);
      t.occurrence_count = 1 + rng() % 4;
      t.status = static_cast<TranslationStatus>(rng() % 3);
      t.preferred = k == 0;
      e.translations.push_back(t);
    }
    if (std::none_of(entries.begin(), entries.end(), [&](const auto& x) { return x.foreign_term == e.foreign_term; })) {
      entries.push_back(e);
    }
  }
  const auto tsv = export_tsv(entries);
  EXPECT_EQ(export_tsv(import_tsv(tsv)), tsv);
  const auto jsonl = export_jsonl(entries);
  EXPECT_EQ(export_jsonl(import_jsonl(jsonl)), jsonl);

  const auto f = ethnocentrism();
  const auto real = build_termbase(f.occurrences, f.candidates, auto_picks(), {});
  EXPECT_EQ(import_jsonl(export_jsonl(real)), real);
  EXPECT_MASRAD_ERROR(import_tsv("bad header\n"), ErrorCode::kParse);
  EXPECT_MASRAD_ERROR(import_tsv(std::string(kTermbaseTsvHeader) + "a\tb\n"), ErrorCode::kParse);
  EXPECT_MASRAD_ERROR(import_jsonl("{not json}\n"), ErrorCode::kParse);
}

TEST(Consistency, DiacriticsOnlyIsConsistent) {
  TermbaseEntry e{"ethnocentrism", {}, {}};
  e.translations.push_back({"الإثنيّة", 1, 1, TranslationStatus::kAuto, true, {"a:1"}});
  e.translations.push_back({"الاثنية", 1, 1, TranslationStatus::kAuto, false, {"a:2"}});
  EXPECT_TRUE(consistency_report({e}).empty());
  TermbaseEntry single{"x", {{"س", 1, 1, TranslationStatus::kAuto, true, {"a:3"}}}, {}};
  EXPECT_TRUE(consistency_report({single}).empty());
}

TEST(AnnotationJson, RoundTrip) {
  auto r = rec("essays:1", "essays:1#x1", true, Provenance::kExpert, 1760000000123);
  r.custom_term = "كتيبة العاصفة";
  const auto j = to_json(r);
  EXPECT_EQ(j["timestamp"], "2025-10-09T08:53:20.123Z");
  EXPECT_EQ(j["provenance"], "expert");
  EXPECT_EQ(annotation_from_json(j), r);
  const auto plain = rec("o", "o#1", false, Provenance::kHeuristicDraft, 0);
  EXPECT_FALSE(to_json(plain).contains("custom_term"));
  EXPECT_EQ(annotation_from_json(to_json(plain)), plain);
}

TEST(Store, AppendCompactAndIntegrity) {
  testing::TempDir dir;
  const Store store(dir.path());
  const auto f = ethnocentrism();
  store.write(files::kOccurrences, to_jsonl(f.occurrences));
  store.write(files::kCandidates, to_jsonl(f.candidates));
  EXPECT_TRUE(store.annotations().empty());

  AnnotationState s;
  std::vector<AnnotationRecord> log;
  post(s, log, rec("essays:1", "essays:1#1", true, Provenance::kHeuristicDraft));
  post(s, log, rec("essays:1", "essays:1#2", true, Provenance::kExpert, 1000));
  post(s, log, rec("essays:1", "essays:1#3", true, Provenance::kExpert, 3000));
  auto custom = rec("essays:2", "essays:2#x1", true, Provenance::kExpert, 4000);
  custom.custom_term = "المركزية العرقية";
  post(s, log, custom);
  store.append_annotations(log);
  EXPECT_EQ(store.annotations(), log);
  EXPECT_NO_THROW(store.check_integrity());

  const auto before = store.annotation_state();
  const auto dropped = store.compact_annotations();
  EXPECT_EQ(dropped, log.size() - s.compacted().size());
  EXPECT_GT(dropped, 0u);
  const auto after = store.annotation_state();
  for (const auto& o : f.occurrences) EXPECT_EQ(after.labels(o.occurrence_id), before.labels(o.occurrence_id));
  EXPECT_EQ(store.compact_annotations(), 0u);

  store.append_annotations({rec("essays:1", "essays:1#77", true, Provenance::kExpert, 9000)});
  EXPECT_MASRAD_ERROR(store.check_integrity(), ErrorCode::kDanglingReference);
}

TEST(Store, WriterLockIsExclusive) {
  testing::TempDir dir;
  const Store store(dir.path());
  {
    const WriterLock held(dir.path());
    EXPECT_MASRAD_ERROR(WriterLock again(dir.path()), ErrorCode::kStoreBusy);
    EXPECT_MASRAD_ERROR(store.append_annotations({rec("o", "o#1", true, Provenance::kExpert)}),
                        ErrorCode::kStoreBusy);
  }
  EXPECT_NO_THROW(store.append_annotations({rec("o", "o#1", true, Provenance::kExpert)}));
  EXPECT_MASRAD_ERROR(store.read(files::kModel), ErrorCode::kIoFailure);
}

}  // namespace
}  // namespace masrad
