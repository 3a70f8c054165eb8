#pragma once

// Directory-backed store. Artifacts are replaced with write-then-rename;
// the annotation log is append-only.
//
//   occurrences.jsonl  candidates.jsonl  features.csv  scores.jsonl
//   predictions.jsonl  model.json  annotations.log.jsonl  termbase.tsv
//   manifests/<command>.json

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "masrad/error.hpp"
#include "masrad/extract.hpp"
#include "masrad/features.hpp"
#include "masrad/heuristic.hpp"
#include "masrad/json_io.hpp"
#include "masrad/termbase.hpp"

namespace masrad {

namespace files {
inline constexpr std::string_view kOccurrences = "occurrences.jsonl";
inline constexpr std::string_view kCandidates = "candidates.jsonl";
inline constexpr std::string_view kFeatures = "features.csv";
inline constexpr std::string_view kScores = "scores.jsonl";
inline constexpr std::string_view kPredictions = "predictions.jsonl";
inline constexpr std::string_view kModel = "model.json";
inline constexpr std::string_view kAnnotations = "annotations.log.jsonl";
inline constexpr std::string_view kTermbase = "termbase.tsv";
inline constexpr std::string_view kManifests = "manifests";
}  // namespace files

/// One model score with its place in the occurrence ranking.
struct Prediction {
  std::string candidate_id;
  std::string occurrence_id;
  std::size_t word_count = 0;
  double score = 0.0;
  std::size_t rank = 0;  // 1 = head
  bool selected = false;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

inline json to_json(const Prediction& p) {
  return {{"candidate_id", p.candidate_id}, {"occurrence_id", p.occurrence_id},
          {"word_count", p.word_count},     {"score", p.score},
          {"rank", p.rank},                 {"selected", p.selected}};
}

inline Prediction prediction_from_json(const json& j) {
  Prediction p;
  p.candidate_id = j.at("candidate_id").get<std::string>();
  p.occurrence_id = j.at("occurrence_id").get<std::string>();
  p.word_count = j.at("word_count").get<std::size_t>();
  p.score = j.at("score").get<double>();
  p.rank = j.at("rank").get<std::size_t>();
  p.selected = j.at("selected").get<bool>();
  return p;
}

inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoFailure, "cannot replace " + path.string());
  }
}

/// Exclusive, non-blocking advisory lock on <store>/.writer.lock.
class WriterLock {
 public:
  explicit WriterLock(const std::filesystem::path& root) {
    std::filesystem::create_directories(root);
    fd_ = ::open((root / ".writer.lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw Error(ErrorCode::kIoFailure, "cannot open writer lock in " + root.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::kStoreBusy, "another writer holds " + root.string());
    }
  }
  WriterLock(const WriterLock&) = delete;
  WriterLock& operator=(const WriterLock&) = delete;
  ~WriterLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  int fd_ = -1;
};

class Store {
 public:
  explicit Store(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(std::string_view name) const { return root_ / std::string(name); }
  bool has(std::string_view name) const { return std::filesystem::exists(path(name)); }

  std::string read(std::string_view name) const {
    if (!has(name)) throw Error(ErrorCode::kIoFailure, "store has no " + std::string(name) + " at " + root_.string());
    return read_file(path(name));
  }

  void write(std::string_view name, std::string_view content) const { write_file_atomic(path(name), content); }

  // ---- typed access --------------------------------------------------------

  std::vector<Occurrence> occurrences() const {
    return from_jsonl(read(files::kOccurrences), occurrence_from_json);
  }
  std::vector<Candidate> candidates() const {
    return from_jsonl(read(files::kCandidates), candidate_from_json);
  }
  std::vector<FeatureVector> features() const { return features_from_csv(read(files::kFeatures)); }
  std::vector<HeuristicScore> heuristic_scores() const {
    return from_jsonl(read(files::kScores), heuristic_score_from_json);
  }
  std::vector<Prediction> predictions() const {
    return from_jsonl(read(files::kPredictions), prediction_from_json);
  }

  std::vector<AnnotationRecord> annotations() const {
    if (!has(files::kAnnotations)) return {};
    return from_jsonl(read(files::kAnnotations), annotation_from_json);
  }
  AnnotationState annotation_state() const { return AnnotationState(annotations()); }

  /// Appends and flushes to disk before returning.
  void append_annotations(const std::vector<AnnotationRecord>& records) const {
    if (records.empty()) return;
    const WriterLock lock(root_);
    append_annotations_locked(records);
  }

  /// For a caller that already holds the WriterLock.
  void append_annotations_locked(const std::vector<AnnotationRecord>& records) const {
    if (records.empty()) return;
    const std::string text = to_jsonl(records);
    const int fd = ::open(path(files::kAnnotations).c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw Error(ErrorCode::kIoFailure, "cannot open annotation log");
    std::size_t done = 0;
    while (done < text.size()) {
      const ssize_t n = ::write(fd, text.data() + done, text.size() - done);
      if (n <= 0) {
        ::close(fd);
        throw Error(ErrorCode::kIoFailure, "annotation log write failed");
      }
      done += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
  }

  /// Rewrites the log keeping only records that still determine the view.
  /// Returns the number of records dropped.
  std::size_t compact_annotations() const {
    const WriterLock lock(root_);
    return compact_annotations_locked();
  }

  std::size_t compact_annotations_locked() const {
    const auto log = annotations();
    const auto kept = AnnotationState(log).compacted();
    write(files::kAnnotations, to_jsonl(kept));
    return log.size() - kept.size();
  }

  /// Every annotation must name a stored occurrence and candidate (or one of
  /// its own custom candidates).
  void check_integrity() const {
    std::set<std::string> occ_ids;
    for (const auto& o : occurrences()) occ_ids.insert(o.occurrence_id);
    std::set<std::string> cand_ids;
    for (const auto& c : candidates()) cand_ids.insert(c.candidate_id);
    const auto log = annotations();
    const AnnotationState state(log);
    for (const auto& r : log) {
      if (occ_ids.count(r.occurrence_id) == 0) {
        throw Error(ErrorCode::kDanglingReference, "annotation for unknown occurrence " + r.occurrence_id);
      }
      if (cand_ids.count(r.candidate_id) != 0) continue;
      const auto customs = state.custom_candidates(r.occurrence_id);
      const bool custom = std::any_of(customs.begin(), customs.end(),
                                      [&](const auto& c) { return c.candidate_id == r.candidate_id; });
      if (!custom) throw Error(ErrorCode::kDanglingReference, "annotation for unknown candidate " + r.candidate_id);
    }
  }

 private:
  std::filesystem::path root_;
};

}  // namespace masrad
