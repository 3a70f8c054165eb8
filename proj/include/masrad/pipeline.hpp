#pragma once

// Store-to-store pipeline steps behind the CLI subcommands. Each step reads
// its inputs from the store, writes its outputs with write-then-rename and
// records a manifest under manifests/<command>.json.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "masrad/candgen.hpp"
#include "masrad/digest.hpp"
#include "masrad/encode.hpp"
#include "masrad/eval.hpp"
#include "masrad/extract.hpp"
#include "masrad/features.hpp"
#include "masrad/forest.hpp"
#include "masrad/heuristic.hpp"
#include "masrad/json_io.hpp"
#include "masrad/parallel.hpp"
#include "masrad/providers.hpp"
#include "masrad/soundex.hpp"
#include "masrad/store.hpp"
#include "masrad/termbase.hpp"

namespace masrad {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 1;

struct RunConfig {
  std::filesystem::path store_root;
  ProviderConfig providers;
  ExtractConfig extract;
  CandGenConfig candgen;
  std::string normalization = "matching";
  std::uint64_t seed = kDefaultSeed;
  std::size_t threads = 0;
  std::size_t trees = 252;
  double threshold = 0.5;
  std::string reviewer = "heuristic";

  /// Flat JSON object. Relative table paths resolve against `base_dir`.
  static RunConfig from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    static const std::set<std::string> kKeys = {
        "store", "embedder", "translator", "transliterator", "ner", "pos", "alpha", "beta",
        "max_window", "clitic_variants", "normalization", "seed", "threads", "trees",
        "threshold", "reviewer"};
    if (!j.is_object()) throw Error(ErrorCode::kUsage, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (kKeys.count(key) == 0) throw Error(ErrorCode::kUsage, "unknown config key '" + key + "'");
    }
    RunConfig c;
    try {
      if (j.contains("store")) c.store_root = resolve(j["store"].get<std::string>(), base_dir);
      auto source = [&](const char* key, ProviderSource& out) {
        if (!j.contains(key)) return;
        out = ProviderSource::parse(j[key].get<std::string>());
        if (out.kind == "table") out.arg = resolve(out.arg, base_dir).string();
      };
      source("embedder", c.providers.embedder);
      source("translator", c.providers.translator);
      source("transliterator", c.providers.transliterator);
      source("ner", c.providers.ner);
      source("pos", c.providers.pos);
      c.candgen.alpha = j.value("alpha", c.candgen.alpha);
      c.candgen.beta = j.value("beta", c.candgen.beta);
      c.candgen.clitic_variants = j.value("clitic_variants", c.candgen.clitic_variants);
      c.extract.max_window = j.value("max_window", c.extract.max_window);
      c.set_normalization(j.value("normalization", c.normalization));
      c.seed = j.value("seed", c.seed);
      c.threads = j.value("threads", c.threads);
      c.trees = j.value("trees", c.trees);
      c.threshold = j.value("threshold", c.threshold);
      c.reviewer = j.value("reviewer", c.reviewer);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kUsage, std::string("config: ") + e.what());
    }
    return c;
  }

  void set_normalization(const std::string& name) {
    if (name == "matching") candgen.profile = NormalizationProfile::matching();
    else if (name == "comparison") candgen.profile = NormalizationProfile::comparison();
    else throw Error(ErrorCode::kUsage, "normalization must be matching or comparison");
    normalization = name;
  }

  /// Table paths must exist; the store root must be set.
  void validate() const {
    if (store_root.empty()) throw Error(ErrorCode::kUsage, "no store: pass --store or set MASRAD_STORE");
    for (const ProviderSource* s : {&providers.embedder, &providers.translator, &providers.transliterator,
                                    &providers.ner, &providers.pos}) {
      if (s->kind == "table" && !std::filesystem::exists(s->arg)) {
        throw Error(ErrorCode::kUsage, "provider table not found: " + s->arg);
      }
    }
    if (trees == 0) throw Error(ErrorCode::kUsage, "trees must be at least 1");
    if (candgen.alpha == 0 && candgen.beta == 0) throw Error(ErrorCode::kUsage, "alpha and beta are both 0");
  }

  /// Everything that can change outputs. Store location and thread count
  /// are left out.
  json to_json() const {
    return {{"embedder", providers.embedder.str()},
            {"translator", providers.translator.str()},
            {"transliterator", providers.transliterator.str()},
            {"ner", providers.ner.str()},
            {"pos", providers.pos.str()},
            {"alpha", candgen.alpha},
            {"beta", candgen.beta},
            {"max_window", extract.max_window},
            {"clitic_variants", candgen.clitic_variants},
            {"normalization", normalization},
            {"seed", seed},
            {"trees", trees},
            {"threshold", threshold},
            {"reviewer", reviewer}};
  }

 private:
  static std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
  }
};

/// What a step reports: JSON for machines, text for the terminal.
struct StepResult {
  json summary = json::object();
  std::string text;
};

enum class Scorer { kAuto, kHeuristic, kModel };

inline Scorer parse_scorer(std::string_view s) {
  if (s == "auto") return Scorer::kAuto;
  if (s == "heuristic") return Scorer::kHeuristic;
  if (s == "model") return Scorer::kModel;
  throw Error(ErrorCode::kUsage, "scorer must be auto, heuristic or model");
}

enum class LabelSource { kExpert, kAll };

namespace detail {

/// Draft timestamps come from SOURCE_DATE_EPOCH (seconds) so reruns are
/// byte-identical; without it they are the epoch.
inline std::int64_t draft_timestamp_ms() {
  if (const char* s = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      return static_cast<std::int64_t>(parse_int(s)) * 1000;
    } catch (const Error&) {
    }
  }
  return 0;
}

inline void write_manifest(const Store& store, std::string_view command, const RunConfig& cfg,
                           const std::vector<std::string_view>& inputs,
                           const std::vector<std::string_view>& outputs, json extra_inputs = json::object()) {
  auto digests = [&](const std::vector<std::string_view>& names, json base) {
    for (auto name : names) {
      if (store.has(name)) base[std::string(name)] = sha256_hex(store.read(name));
    }
    return base;
  };
  const json manifest = {{"command", command},
                         {"tool_version", kToolVersion},
                         {"feature_schema", kSchemaVersion},
                         {"model_format", kModelFormat},
                         {"romanization", kRomanizationVersion},
                         {"config", cfg.to_json()},
                         {"config_digest", sha256_hex(cfg.to_json().dump())},
                         {"inputs", digests(inputs, std::move(extra_inputs))},
                         {"outputs", digests(outputs, json::object())}};
  store.write(std::string(files::kManifests) + "/" + std::string(command) + ".json", manifest.dump(2) + "\n");
}

}  // namespace detail

/// Fills `label` from the annotation view. With kExpert only occurrences an
/// expert reviewed are labeled. Within a labeled occurrence, candidates with
/// no record are False once some candidate reads True or an expert has
/// reviewed it; otherwise they stay unlabeled.
inline void apply_labels(std::vector<FeatureVector>& rows, const AnnotationState& state, LabelSource source) {
  std::map<std::string, std::map<std::string, bool>> cache;
  for (auto& fv : rows) {
    fv.label.reset();
    const bool reviewed = state.reviewed(fv.occurrence_id);
    if (source == LabelSource::kExpert && !reviewed) continue;
    auto [it, inserted] = cache.try_emplace(fv.occurrence_id);
    if (inserted) it->second = state.labels(fv.occurrence_id);
    const auto& labels = it->second;
    if (auto l = labels.find(fv.candidate_id); l != labels.end()) {
      fv.label = l->second;
      continue;
    }
    const bool has_true = std::any_of(labels.begin(), labels.end(), [](const auto& kv) { return kv.second; });
    if (has_true || reviewed) fv.label = false;
  }
}

// ---- steps -------------------------------------------------------------------

// Steps that write hold the store's WriterLock for their whole run.

inline StepResult run_extract(const RunConfig& cfg, const std::filesystem::path& input) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  const auto docs = load_corpus(input);
  const auto results = parallel_map(docs, cfg.threads, [&](const Document& d) {
    return extract_occurrences(d, cfg.extract);
  });
  std::vector<Occurrence> occurrences;
  std::vector<Candidate> candidates;
  std::size_t issues = 0;
  std::size_t dropped = 0;
  std::string warnings;
  for (const auto& r : results) {
    for (const auto& o : r.occurrences) {
      occurrences.push_back(o);
      for (auto& c : generate_candidates(o, cfg.candgen)) candidates.push_back(std::move(c));
    }
    issues += r.issues.size();
    dropped += r.dropped_no_context;
    for (const auto& i : r.issues) {
      warnings += "warning: " + i.doc_id + " byte " + std::to_string(i.position) + ": " + i.message + "\n";
    }
  }
  store.write(files::kOccurrences, to_jsonl(occurrences));
  store.write(files::kCandidates, to_jsonl(candidates));

  std::string corpus;
  for (const auto& d : docs) corpus += d.doc_id + '\0' + d.text + '\0';
  detail::write_manifest(store, "extract", cfg, {}, {files::kOccurrences, files::kCandidates},
                         {{"corpus", sha256_hex(corpus)}});

  StepResult r;
  r.summary = {{"documents", docs.size()},
               {"occurrences", occurrences.size()},
               {"candidates", candidates.size()},
               {"issues", issues},
               {"dropped_no_context", dropped}};
  r.text = warnings + "extracted " + std::to_string(occurrences.size()) + " occurrences, " +
           std::to_string(candidates.size()) + " candidates from " + std::to_string(docs.size()) +
           " documents\n";
  return r;
}

inline StepResult run_features(const RunConfig& cfg) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  const auto occurrences = store.occurrences();
  std::map<std::string, std::vector<Candidate>> by_occ;
  for (auto& c : store.candidates()) by_occ[c.occurrence_id].push_back(std::move(c));
  for (const auto& [occ, cands] : by_occ) {
    if (std::none_of(occurrences.begin(), occurrences.end(),
                     [&](const Occurrence& o) { return o.occurrence_id == occ; })) {
      throw Error(ErrorCode::kDanglingReference, "candidate for unknown occurrence " + occ);
    }
  }

  ProviderSet providers = make_providers(cfg.providers);
  const auto groups = parallel_map(occurrences, cfg.threads, [&](const Occurrence& o) {
    auto it = by_occ.find(o.occurrence_id);
    if (it == by_occ.end()) return std::vector<FeatureVector>{};
    return compute_features(o, it->second, providers, cfg.candgen.profile);
  });
  std::vector<FeatureVector> rows;
  for (const auto& g : groups) rows.insert(rows.end(), g.begin(), g.end());

  // A configured external provider that failed on every row is a provider
  // failure, not a partial lookup miss.
  const std::pair<const ProviderSource*, std::uint8_t> external[] = {
      {&cfg.providers.embedder, kMissingSemantic}, {&cfg.providers.translator, kMissingTransLex},
      {&cfg.providers.transliterator, kMissingTranslitLex}, {&cfg.providers.ner, kMissingEntity},
      {&cfg.providers.pos, kMissingPos}};
  for (const auto& [src, bit] : external) {
    if (src->kind != "process" || rows.empty()) continue;
    if (std::all_of(rows.begin(), rows.end(), [bit = bit](const auto& fv) { return (fv.missing & bit) != 0; })) {
      throw Error(ErrorCode::kProviderUnavailable, "provider '" + src->str() + "' failed for every candidate");
    }
  }

  apply_labels(rows, store.annotation_state(), LabelSource::kAll);
  store.write(files::kFeatures, features_to_csv(rows));
  detail::write_manifest(store, "features", cfg, {files::kOccurrences, files::kCandidates, files::kAnnotations},
                         {files::kFeatures});
  std::size_t incomplete = 0;
  for (const auto& fv : rows) incomplete += fv.missing != 0 ? 1 : 0;
  StepResult r;
  r.summary = {{"rows", rows.size()}, {"incomplete", incomplete}};
  r.text = "wrote " + std::to_string(rows.size()) + " feature rows (" + std::to_string(incomplete) +
           " with fallback values)\n";
  return r;
}

/// Per-candidate heuristic scores plus draft labels: True for each
/// occurrence's argmax, False for the rest. Unchanged drafts are not
/// re-appended, so reruns leave the log as is.
inline StepResult run_score_heuristic(const RunConfig& cfg) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  const auto rows = store.features();
  std::vector<HeuristicScore> scores;
  scores.reserve(rows.size());
  for (const auto& fv : rows) scores.push_back(heuristic_score(fv));

  AnnotationState state = store.annotation_state();
  std::vector<AnnotationRecord> appended;
  const std::int64_t ts = detail::draft_timestamp_ms();
  std::size_t occurrences = 0;
  for (const auto& group : group_by_occurrence(scores)) {
    ++occurrences;
    const auto& best = select_by_heuristic(group);
    auto post = [&](const HeuristicScore& s, bool label) {
      AnnotationRecord want{s.candidate_id, s.occurrence_id, label, Provenance::kHeuristicDraft, cfg.reviewer, ts, {}};
      for (auto& rec : state.plan(want)) {
        state.apply(rec);
        appended.push_back(std::move(rec));
      }
    };
    post(best, true);
    for (const auto& s : group) {
      if (s.candidate_id != best.candidate_id) post(s, false);
    }
  }
  store.write(files::kScores, to_jsonl(scores));
  store.append_annotations_locked(appended);
  detail::write_manifest(store, "score-heuristic", cfg, {files::kFeatures}, {files::kScores, files::kAnnotations});
  StepResult r;
  r.summary = {{"scored", scores.size()}, {"occurrences", occurrences}, {"drafts_appended", appended.size()}};
  r.text = "scored " + std::to_string(scores.size()) + " candidates in " + std::to_string(occurrences) +
           " occurrences; appended " + std::to_string(appended.size()) + " draft labels\n";
  return r;
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    auto item = collapse_whitespace(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

struct TrainOptions {
  /// Empty means every labeled book.
  std::set<std::string> train_books;
  LabelSource labels = LabelSource::kAll;
};

inline StepResult run_train(const RunConfig& cfg, const TrainOptions& opt = {}) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  auto rows = store.features();
  apply_labels(rows, store.annotation_state(), opt.labels);
  std::vector<EncodedInstance> data;
  for (const auto& fv : rows) {
    if (!fv.label) continue;
    if (!opt.train_books.empty() && opt.train_books.count(fv.book_id) == 0) continue;
    data.push_back(encode(fv));
  }
  ForestParams params;
  params.n_trees = cfg.trees;
  params.seed = cfg.seed;
  params.threads = cfg.threads;
  TrainingDiagnostics diag;
  const Forest forest = train_forest(data, params, &diag);
  store.write(files::kModel, forest_to_json(forest).dump() + "\n");

  std::vector<bool> labels;
  std::vector<bool> inbag;
  std::vector<bool> oob_pred;
  std::vector<bool> oob_labels;
  for (std::size_t i = 0; i < data.size(); ++i) {
    labels.push_back(*data[i].label);
    inbag.push_back(classify(diag.inbag_score[i], cfg.threshold));
    if (!std::isnan(diag.oob_score[i])) {
      oob_pred.push_back(classify(diag.oob_score[i], cfg.threshold));
      oob_labels.push_back(*data[i].label);
    }
  }
  const Prf inbag_prf = prf(inbag, labels);
  json report = {{"instances", data.size()}, {"in_bag", to_json(inbag_prf)}};
  if (!oob_pred.empty()) report["out_of_bag"] = to_json(prf(oob_pred, oob_labels));
  store.write("train_report.json", report.dump(2) + "\n");
  detail::write_manifest(store, "train", cfg, {files::kFeatures, files::kAnnotations},
                         {files::kModel, "train_report.json"});

  StepResult r;
  r.summary = report;
  char buf[160];
  std::snprintf(buf, sizeof buf, "trained %zu trees on %zu instances; in-bag F1=%.3f", forest.trees.size(),
                data.size(), inbag_prf.f1);
  r.text = buf;
  if (report.contains("out_of_bag")) {
    std::snprintf(buf, sizeof buf, ", out-of-bag F1=%.3f", report["out_of_bag"]["f1"].get<double>());
    r.text += buf;
  }
  r.text += "\n";
  return r;
}

inline Forest load_model(const Store& store) {
  try {
    return forest_from_json(json::parse(store.read(files::kModel)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model file: ") + e.what());
  }
}

inline std::vector<Prediction> predict_rows(const Forest& forest, const std::vector<FeatureVector>& rows,
                                            std::size_t threads) {
  const auto groups = group_by_occurrence(rows);
  const auto ranked = parallel_map(groups, threads, [&](const std::vector<FeatureVector>& g) {
    return rank_occurrence(forest, encode_all(g));
  });
  std::vector<Prediction> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t k = 0; k < ranked[i].size(); ++k) {
      const auto& rc = ranked[i][k];
      out.push_back({rc.candidate_id, groups[i].front().occurrence_id, rc.word_count, rc.score, k + 1, k == 0});
    }
  }
  return out;
}

inline StepResult run_predict(const RunConfig& cfg) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  const Forest forest = load_model(store);
  const auto predictions = predict_rows(forest, store.features(), cfg.threads);
  store.write(files::kPredictions, to_jsonl(predictions));
  detail::write_manifest(store, "predict", cfg, {files::kFeatures, files::kModel}, {files::kPredictions});
  std::size_t heads = 0;
  for (const auto& p : predictions) heads += p.selected ? 1 : 0;
  StepResult r;
  r.summary = {{"scored", predictions.size()}, {"selections", heads}};
  r.text = "scored " + std::to_string(predictions.size()) + " candidates; selected " + std::to_string(heads) +
           " targets\n";
  return r;
}

// ---- selections shared by eval, export and the review service ------------------

/// Per-candidate scores from the active scorer, with the head flagged.
struct ScoredCandidate {
  std::string candidate_id;
  std::string occurrence_id;
  std::size_t word_count = 0;
  double score = 0.0;
  bool selected = false;
};

inline Scorer resolve_scorer(const Store& store, Scorer s) {
  if (s != Scorer::kAuto) return s;
  if (store.has(files::kPredictions)) return Scorer::kModel;
  if (store.has(files::kScores)) return Scorer::kHeuristic;
  throw Error(ErrorCode::kIoFailure, "no scores yet: run score-heuristic or predict first");
}

inline std::vector<ScoredCandidate> scored_candidates(const Store& store, Scorer scorer) {
  std::vector<ScoredCandidate> out;
  if (resolve_scorer(store, scorer) == Scorer::kModel) {
    for (const auto& p : store.predictions()) {
      out.push_back({p.candidate_id, p.occurrence_id, p.word_count, p.score, p.selected});
    }
    return out;
  }
  const auto scores = store.heuristic_scores();
  for (const auto& group : group_by_occurrence(scores)) {
    const auto& best = select_by_heuristic(group);
    for (const auto& s : group) {
      out.push_back({s.candidate_id, s.occurrence_id, s.word_count, s.total, s.candidate_id == best.candidate_id});
    }
  }
  return out;
}

inline std::vector<OccurrenceSelection> selections(const std::vector<ScoredCandidate>& scored) {
  std::vector<OccurrenceSelection> out;
  for (const auto& s : scored) {
    if (s.selected) out.push_back({s.occurrence_id, s.candidate_id, s.score});
  }
  return out;
}

struct EvalOptions {
  Scorer scorer = Scorer::kAuto;
  EvalMode mode = EvalMode::kSelection;
  /// Empty means all books.
  std::set<std::string> books;
  LabelSource labels = LabelSource::kExpert;
};

inline StepResult run_eval(const RunConfig& cfg, const EvalOptions& opt) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  const Scorer scorer = resolve_scorer(store, opt.scorer);
  if (scorer == Scorer::kHeuristic && opt.mode == EvalMode::kClassification) {
    throw Error(ErrorCode::kUsage, "the heuristic scorer only supports selection mode");
  }
  auto rows = store.features();
  apply_labels(rows, store.annotation_state(), opt.labels);
  std::map<std::string, const ScoredCandidate*> by_id;
  const auto scored = scored_candidates(store, scorer);
  for (const auto& s : scored) by_id[s.candidate_id] = &s;

  std::vector<bool> preds;
  std::vector<bool> labels;
  std::vector<std::string> books;
  for (const auto& fv : rows) {
    if (!fv.label) continue;
    if (!opt.books.empty() && opt.books.count(fv.book_id) == 0) continue;
    auto it = by_id.find(fv.candidate_id);
    if (it == by_id.end()) throw Error(ErrorCode::kDanglingReference, "no score for " + fv.candidate_id);
    const bool pred = opt.mode == EvalMode::kSelection ? it->second->selected
                                                       : classify(it->second->score, cfg.threshold);
    preds.push_back(pred);
    labels.push_back(*fv.label);
    books.push_back(fv.book_id);
  }
  const auto report = evaluate(preds, labels, books, opt.mode);
  json j = to_json(report);
  j["scorer"] = scorer == Scorer::kModel ? "model" : "heuristic";
  store.write("eval_report.json", j.dump(2) + "\n");
  detail::write_manifest(store, "eval", cfg,
                         {files::kFeatures, files::kAnnotations, files::kScores, files::kPredictions},
                         {"eval_report.json"});
  return {j, render_report(report)};
}

/// Per foreign term (glossary match key), every candidate of every
/// occurrence aggregated by Arabic surface. Heuristic totals are floored at
/// 0 so negative scores cannot cancel positive evidence.
inline std::map<std::string, std::vector<Suggestion>> term_suggestions(const Store& store, Scorer scorer) {
  const auto occurrences = store.occurrences();
  std::map<std::string, const Occurrence*> occ_by_id;
  for (const auto& o : occurrences) occ_by_id[o.occurrence_id] = &o;
  std::map<std::string, std::string> surface;
  for (const auto& c : store.candidates()) surface[c.candidate_id] = c.surface;

  std::map<std::string, std::map<std::string, OccurrenceRanking>> by_term;
  for (const auto& s : scored_candidates(store, scorer)) {
    auto o = occ_by_id.find(s.occurrence_id);
    auto c = surface.find(s.candidate_id);
    if (o == occ_by_id.end() || c == surface.end()) {
      throw Error(ErrorCode::kDanglingReference, "score for unknown candidate " + s.candidate_id);
    }
    auto& ranking = by_term[foreign_match_key(o->second->foreign_term)][s.occurrence_id];
    ranking.occurrence_id = s.occurrence_id;
    ranking.candidates.emplace_back(c->second, std::max(0.0, s.score));
  }
  std::map<std::string, std::vector<Suggestion>> out;
  for (const auto& [term, rankings] : by_term) {
    std::vector<OccurrenceRanking> list;
    for (const auto& [id, r] : rankings) list.push_back(r);
    out[term] = aggregate_suggestions(list);
  }
  return out;
}

inline StepResult run_eval_glossary(const RunConfig& cfg, const std::filesystem::path& glossary_path,
                                    std::size_t k, Scorer scorer = Scorer::kAuto) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  const auto glossary = parse_glossary_csv(read_file(glossary_path));
  const auto suggestions = term_suggestions(store, scorer);
  StepResult r;
  r.summary = {{"concepts", glossary.size()}, {"top_k", json::array()}};
  for (std::size_t i = 1; i <= k; ++i) {
    const auto t = topk_accuracy(glossary, suggestions, i);
    r.summary["matched"] = t.matched;
    r.summary["top_k"].push_back({{"k", i}, {"hits", t.hits}, {"accuracy", t.accuracy}});
    char buf[96];
    std::snprintf(buf, sizeof buf, "top-%zu accuracy: %.1f%% (%zu of %zu matched concepts)\n", i,
                  t.accuracy * 100.0, t.hits, t.matched);
    r.text += buf;
  }
  r.text = "glossary concepts: " + std::to_string(glossary.size()) + ", matched: " +
           std::to_string(r.summary["matched"].get<std::size_t>()) + "\n" + r.text;
  detail::write_manifest(store, "eval-glossary", cfg, {files::kOccurrences, files::kCandidates, files::kScores, files::kPredictions},
                         {}, {{"glossary", sha256_hex(read_file(glossary_path))}});
  return r;
}

inline StepResult run_stats(const RunConfig& cfg) {
  const Store store(cfg.store_root);
  const auto s = corpus_stats(store.occurrences(), store.candidates());
  StepResult r;
  r.summary = to_json(s);
  r.text = "books\tunique_terms\toccurrences\tcandidates\tavg_candidates\n" + std::to_string(s.books) + "\t" +
           std::to_string(s.unique_foreign_terms) + "\t" + std::to_string(s.occurrences) + "\t" +
           std::to_string(s.candidates) + "\t" + format_average(s.average_candidates) + "\n";
  return r;
}

inline std::vector<TermbaseEntry> current_termbase(const Store& store, Scorer scorer) {
  return build_termbase(store.occurrences(), store.candidates(), selections(scored_candidates(store, scorer)),
                        store.annotation_state());
}

enum class ExportFormat { kTsv, kJsonl };

inline ExportFormat parse_export_format(std::string_view s) {
  if (s == "tsv") return ExportFormat::kTsv;
  if (s == "jsonl") return ExportFormat::kJsonl;
  throw Error(ErrorCode::kUsage, "format must be tsv or jsonl");
}

/// Rebuilds the termbase, stores termbase.tsv and returns the requested
/// rendering.
inline StepResult run_export(const RunConfig& cfg, ExportFormat format, Scorer scorer = Scorer::kAuto) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  const auto entries = current_termbase(store, scorer);
  const std::string tsv = export_tsv(entries);
  store.write(files::kTermbase, tsv);
  detail::write_manifest(store, "export", cfg,
                         {files::kOccurrences, files::kCandidates, files::kScores, files::kPredictions,
                          files::kAnnotations},
                         {files::kTermbase});
  StepResult r;
  r.summary = {{"entries", entries.size()}};
  r.text = format == ExportFormat::kTsv ? tsv : export_jsonl(entries);
  return r;
}

enum class ReportFormat { kText, kJson, kTsv };

inline StepResult run_consistency(const RunConfig& cfg, ReportFormat format, Scorer scorer = Scorer::kAuto) {
  const Store store(cfg.store_root);
  const auto report = consistency_report(current_termbase(store, scorer));
  StepResult r;
  r.summary = to_json(report);
  switch (format) {
    case ReportFormat::kJson:
      r.text = r.summary.dump(2) + "\n";
      break;
    case ReportFormat::kTsv:
      r.text = consistency_tsv(report);
      break;
    case ReportFormat::kText:
      r.text = std::to_string(report.size()) + " inconsistent term(s)\n";
      for (const auto& t : report) {
        r.text += t.foreign_term + "\n";
        for (const auto& [term, ids] : t.translations) {
          r.text += "  " + term + "  x" + std::to_string(ids.size()) + "  ";
          for (std::size_t i = 0; i < ids.size(); ++i) r.text += (i ? ", " : "") + ids[i];
          r.text += "\n";
        }
      }
      break;
  }
  return r;
}

inline StepResult run_compact(const RunConfig& cfg) {
  const Store store(cfg.store_root);
  const WriterLock lock(cfg.store_root);
  store.check_integrity();
  const std::size_t dropped = store.compact_annotations_locked();
  StepResult r;
  r.summary = {{"dropped", dropped}};
  r.text = "compacted annotation log; dropped " + std::to_string(dropped) + " superseded records\n";
  return r;
}

}  // namespace masrad
