#pragma once

// HTTP review API over a store. Reads work on immutable snapshots; label
// writes go through one writer thread that owns the store's writer lock.

#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "masrad/csv.hpp"
#include "masrad/json_io.hpp"
#include "masrad/pipeline.hpp"
#include "masrad/store.hpp"
#include "masrad/termbase.hpp"

namespace masrad {

struct ServiceOptions {
  /// Required in X-Review-Token when nonempty.
  std::string token;
  /// Static UI bundle served at "/" when nonempty.
  std::string ui_dir;
  Scorer scorer = Scorer::kAuto;
  std::string default_reviewer = "expert";
  /// Pending writes beyond this answer 409.
  std::size_t max_queue = 64;
};

class ReviewService {
 public:
  ReviewService(std::filesystem::path store_root, ServiceOptions opt = {})
      : store_(std::move(store_root)), opt_(std::move(opt)), lock_(store_.root()) {
    load();
    writer_ = std::thread([this] { writer_loop(); });
  }

  ReviewService(const ReviewService&) = delete;
  ReviewService& operator=(const ReviewService&) = delete;

  ~ReviewService() {
    stop();
    {
      std::lock_guard lock(queue_mu_);
      closing_ = true;
    }
    queue_cv_.notify_all();
    if (writer_.joinable()) writer_.join();
  }

  /// Binds to an ephemeral port on `host` and serves in a background
  /// thread. Returns the port.
  int start(const std::string& host = "127.0.0.1", int port = 0) {
    routes();
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::kIoFailure, "cannot bind " + host + ":" + std::to_string(port));
    listener_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  /// Blocks serving on host:port.
  void serve(const std::string& host, int port) {
    routes();
    if (!server_.listen(host, port)) throw Error(ErrorCode::kIoFailure, "cannot listen on " + host + ":" + std::to_string(port));
  }

  void stop() {
    server_.stop();
    if (listener_.joinable()) listener_.join();
  }

  // ---- operations (also used directly by tests) ------------------------------

  struct LabelRequest {
    std::optional<std::string> candidate_id;
    std::optional<std::string> custom_arabic_term;
    bool label = true;
    std::string reviewer;
  };

  json list(const std::string& status, const std::string& book, std::size_t page, std::size_t page_size) const {
    const auto state = snapshot();
    json items = json::array();
    std::size_t total = 0;
    const std::size_t first = (page - 1) * page_size;
    for (const auto& o : occurrences_) {
      const bool reviewed = state->reviewed(o.occurrence_id);
      if (status == "reviewed" && !reviewed) continue;
      if (status == "unreviewed" && reviewed) continue;
      if (!book.empty() && o.book_id != book) continue;
      if (total >= first && total < first + page_size) {
        const auto chosen = state->true_candidate(o.occurrence_id);
        items.push_back({{"occurrence_id", o.occurrence_id},
                         {"book_id", o.book_id},
                         {"doc_id", o.doc_id},
                         {"foreign_term", o.foreign_term},
                         {"status", reviewed ? "reviewed" : "unreviewed"},
                         {"selected_candidate_id", chosen ? json(*chosen) : json(nullptr)}});
      }
      ++total;
    }
    return {{"items", std::move(items)}, {"page", page}, {"page_size", page_size}, {"total", total}};
  }

  /// Throws Error(kDanglingReference) for an unknown id.
  json item(const std::string& occurrence_id) const { return render_item(occurrence_id, *snapshot()); }

  /// Queues an expert label and waits for it to be written.
  json post_label(const std::string& occurrence_id, const LabelRequest& req) {
    if (occ_index_.count(occurrence_id) == 0) {
      throw Error(ErrorCode::kDanglingReference, "unknown occurrence " + occurrence_id);
    }
    if (req.candidate_id.has_value() == req.custom_arabic_term.has_value()) {
      throw Error(ErrorCode::kUsage, "give exactly one of candidate_id or custom_arabic_term");
    }
    auto job = std::make_shared<std::packaged_task<json()>>([this, occurrence_id, req] {
      return write_label(occurrence_id, req);
    });
    auto result = job->get_future();
    {
      std::lock_guard lock(queue_mu_);
      if (queue_.size() >= opt_.max_queue) throw Error(ErrorCode::kStoreBusy, "write queue is full");
      queue_.push_back([job] { (*job)(); });
    }
    queue_cv_.notify_one();
    return result.get();
  }

  json stats() const {
    const auto state = snapshot();
    std::size_t reviewed = 0;
    std::size_t labeled = 0;
    json books = json::object();
    for (const auto& o : occurrences_) {
      const bool r = state->reviewed(o.occurrence_id);
      const bool l = state->true_candidate(o.occurrence_id).has_value();
      reviewed += r ? 1 : 0;
      labeled += l ? 1 : 0;
      auto& b = books[o.book_id];
      if (b.is_null()) b = {{"occurrences", 0}, {"reviewed", 0}};
      b["occurrences"] = b["occurrences"].get<std::size_t>() + 1;
      b["reviewed"] = b["reviewed"].get<std::size_t>() + (r ? 1 : 0);
    }
    return {{"occurrences", occurrences_.size()},
            {"reviewed", reviewed},
            {"unreviewed", occurrences_.size() - reviewed},
            {"with_true_label", labeled},
            {"annotation_records", state->size()},
            {"books", std::move(books)}};
  }

  /// Current label view, one row per labeled candidate.
  std::string export_annotations() const {
    const auto state = snapshot();
    std::string out = csv::row({"occurrence_id", "candidate_id", "arabic_term", "label", "provenance", "reviewer", "timestamp"});
    for (const auto& o : occurrences_) {
      for (const auto& [cand, label] : state->labels(o.occurrence_id)) {
        const auto rec = state->deciding_record(o.occurrence_id, cand);
        out += csv::row({o.occurrence_id, cand, surface_of(o.occurrence_id, cand, *state), label ? "true" : "false",
                         std::string(provenance_name(rec->provenance)), rec->reviewer,
                         format_timestamp(rec->timestamp_ms)});
      }
    }
    return out;
  }

  std::string export_termbase(ExportFormat format) const {
    const auto state = snapshot();
    const auto entries = build_termbase(occurrences_, candidates_, selections(scored_), *state);
    return format == ExportFormat::kTsv ? export_tsv(entries) : export_jsonl(entries);
  }

 private:
  void load() {
    occurrences_ = store_.occurrences();
    candidates_ = store_.candidates();
    for (std::size_t i = 0; i < occurrences_.size(); ++i) occ_index_[occurrences_[i].occurrence_id] = i;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      cand_index_[candidates_[i].candidate_id] = i;
      cands_by_occ_[candidates_[i].occurrence_id].push_back(i);
    }
    try {
      const Scorer scorer = resolve_scorer(store_, opt_.scorer);
      scorer_name_ = scorer == Scorer::kModel ? "model" : "heuristic";
      scored_ = scored_candidates(store_, scorer);
      if (scorer == Scorer::kHeuristic) {
        for (const auto& s : store_.heuristic_scores()) components_[s.candidate_id] = s;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIoFailure) throw;
      scorer_name_ = "none";
    }
    for (std::size_t i = 0; i < scored_.size(); ++i) score_index_[scored_[i].candidate_id] = i;
    state_ = std::make_shared<const AnnotationState>(store_.annotations());
  }

  std::shared_ptr<const AnnotationState> snapshot() const {
    std::lock_guard lock(state_mu_);
    return state_;
  }

  std::string surface_of(const std::string& occ, const std::string& cand, const AnnotationState& state) const {
    if (auto it = cand_index_.find(cand); it != cand_index_.end()) return candidates_[it->second].surface;
    for (const auto& c : state.custom_candidates(occ)) {
      if (c.candidate_id == cand) return c.surface;
    }
    return {};
  }

  json render_item(const std::string& occurrence_id, const AnnotationState& state) const {
    auto it = occ_index_.find(occurrence_id);
    if (it == occ_index_.end()) throw Error(ErrorCode::kDanglingReference, "unknown occurrence " + occurrence_id);
    const Occurrence& o = occurrences_[it->second];

    std::vector<const Candidate*> ordered;
    if (auto c = cands_by_occ_.find(occurrence_id); c != cands_by_occ_.end()) {
      for (std::size_t i : c->second) ordered.push_back(&candidates_[i]);
    }
    auto score = [&](const Candidate* c) -> std::optional<double> {
      auto s = score_index_.find(c->candidate_id);
      if (s == score_index_.end()) return std::nullopt;
      return scored_[s->second].score;
    };
    std::stable_sort(ordered.begin(), ordered.end(), [&](const Candidate* a, const Candidate* b) {
      const auto sa = score(a);
      const auto sb = score(b);
      if (!sa || !sb) return sa.has_value() && !sb.has_value();
      return better_candidate(*sa, a->word_count, a->candidate_id, *sb, b->word_count, b->candidate_id);
    });

    const auto labels = state.labels(occurrence_id);
    auto label_json = [&](const std::string& id) {
      auto l = labels.find(id);
      return l == labels.end() ? json(nullptr) : json(l->second);
    };
    auto provenance_json = [&](const std::string& id) {
      auto p = state.provenance(occurrence_id, id);
      return p ? json(std::string(provenance_name(*p))) : json(nullptr);
    };

    json cands = json::array();
    for (const Candidate* c : ordered) {
      json entry = {{"candidate_id", c->candidate_id},
                    {"surface", c->surface},
                    {"word_count", c->word_count},
                    {"span", {c->span.start, c->span.end}},
                    {"score", score(c) ? json(*score(c)) : json(nullptr)},
                    {"components", nullptr},
                    {"label", label_json(c->candidate_id)},
                    {"provenance", provenance_json(c->candidate_id)},
                    {"custom", false}};
      if (auto comp = components_.find(c->candidate_id); comp != components_.end()) {
        const auto& s = comp->second;
        entry["components"] = {{"s_l", s.s_l}, {"s_s", s.s_s}, {"s_e", s.s_e}, {"s_p", s.s_p}, {"s_pos", s.s_pos}};
      }
      cands.push_back(std::move(entry));
    }
    for (const auto& c : state.custom_candidates(occurrence_id)) {
      cands.push_back({{"candidate_id", c.candidate_id},
                       {"surface", c.surface},
                       {"word_count", foreign_word_count(c.surface)},
                       {"span", nullptr},
                       {"score", nullptr},
                       {"components", nullptr},
                       {"label", label_json(c.candidate_id)},
                       {"provenance", provenance_json(c.candidate_id)},
                       {"custom", true}});
    }
    return {{"occurrence_id", o.occurrence_id},
            {"doc_id", o.doc_id},
            {"book_id", o.book_id},
            {"foreign_term", o.foreign_term},
            {"foreign_char_span", {o.foreign_char_span.start, o.foreign_char_span.end}},
            {"context_text", o.context_text},
            {"context_offset", o.context_offset},
            {"status", state.reviewed(occurrence_id) ? "reviewed" : "unreviewed"},
            {"scorer", scorer_name_},
            {"candidates", std::move(cands)}};
  }

  /// Runs on the writer thread only.
  json write_label(const std::string& occurrence_id, const LabelRequest& req) {
    AnnotationState next = *snapshot();
    AnnotationRecord want;
    want.occurrence_id = occurrence_id;
    want.label = req.label;
    want.provenance = Provenance::kExpert;
    want.reviewer = req.reviewer.empty() ? opt_.default_reviewer : req.reviewer;
    want.timestamp_ms = now_ms();

    if (req.candidate_id) {
      const auto& id = *req.candidate_id;
      const auto c = cand_index_.find(id);
      const auto customs = next.custom_candidates(occurrence_id);
      const bool generated = c != cand_index_.end() && candidates_[c->second].occurrence_id == occurrence_id;
      auto custom = std::find_if(customs.begin(), customs.end(), [&](const auto& cc) { return cc.candidate_id == id; });
      if (!generated && custom == customs.end()) {
        throw Error(ErrorCode::kUsage, "candidate " + id + " does not belong to " + occurrence_id);
      }
      want.candidate_id = id;
      if (custom != customs.end()) want.custom_term = custom->surface;
    } else {
      const std::string term = collapse_whitespace(*req.custom_arabic_term);
      if (!contains_arabic_letter(term)) throw Error(ErrorCode::kUsage, "custom_arabic_term has no Arabic letters");
      const std::string key = arabic_term_key(term);
      // Reuse a candidate that already spells this term.
      if (auto c = cands_by_occ_.find(occurrence_id); c != cands_by_occ_.end()) {
        for (std::size_t i : c->second) {
          if (arabic_term_key(candidates_[i].surface) == key) want.candidate_id = candidates_[i].candidate_id;
        }
      }
      const auto customs = next.custom_candidates(occurrence_id);
      if (want.candidate_id.empty()) {
        for (const auto& cc : customs) {
          if (arabic_term_key(cc.surface) == key) {
            want.candidate_id = cc.candidate_id;
            want.custom_term = cc.surface;
          }
        }
      }
      if (want.candidate_id.empty()) {
        want.candidate_id = occurrence_id + "#x" + std::to_string(customs.size() + 1);
        want.custom_term = term;
      }
    }

    const auto records = next.plan(want);
    store_.append_annotations_locked(records);
    for (const auto& r : records) next.apply(r);
    auto published = std::make_shared<const AnnotationState>(std::move(next));
    {
      std::lock_guard lock(state_mu_);
      state_ = published;
    }
    json out = render_item(occurrence_id, *published);
    out["recorded"] = records.size();
    out["candidate_id"] = want.candidate_id;
    return out;
  }

  void writer_loop() {
    for (;;) {
      std::function<void()> job;
      {
        std::unique_lock lock(queue_mu_);
        queue_cv_.wait(lock, [&] { return closing_ || !queue_.empty(); });
        if (queue_.empty()) return;
        job = std::move(queue_.front());
        queue_.pop_front();
      }
      job();
    }
  }

  // ---- HTTP ----------------------------------------------------------------

  static void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
  }

  static void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
    send_json(res, {{"error", code}, {"message", message}}, status);
  }

  static int status_for(ErrorCode code) {
    switch (code) {
      case ErrorCode::kDanglingReference: return 404;
      case ErrorCode::kStoreBusy: return 409;
      case ErrorCode::kUsage:
      case ErrorCode::kParse: return 422;
      default: return 500;
    }
  }

  template <typename Fn>
  static void guarded(httplib::Response& res, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), error_code_name(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 422, "InvalidBody", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  }

  static std::size_t positive_param(const httplib::Request& req, const char* name, std::size_t fallback,
                                    std::size_t max) {
    if (!req.has_param(name)) return fallback;
    const auto v = parse_int(req.get_param_value(name));
    if (v < 1 || static_cast<std::size_t>(v) > max) {
      throw Error(ErrorCode::kUsage, std::string(name) + " must be in 1.." + std::to_string(max));
    }
    return static_cast<std::size_t>(v);
  }

  void routes() {
    if (routed_) return;
    routed_ = true;
    if (!opt_.token.empty()) {
      server_.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        if (req.path.rfind("/api/", 0) == 0 && req.get_header_value("X-Review-Token") != opt_.token) {
          send_error(res, 401, "Unauthorized", "missing or wrong X-Review-Token");
          return httplib::Server::HandlerResponse::Handled;
        }
        return httplib::Server::HandlerResponse::Unhandled;
      });
    }
    server_.Get("/api/occurrences", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string status = req.has_param("status") ? req.get_param_value("status") : "";
        if (!status.empty() && status != "reviewed" && status != "unreviewed") {
          throw Error(ErrorCode::kUsage, "status must be reviewed or unreviewed");
        }
        const std::string book = req.has_param("book") ? req.get_param_value("book") : "";
        send_json(res, list(status, book, positive_param(req, "page", 1, 1u << 30),
                            positive_param(req, "page_size", 20, 500)));
      });
    });
    server_.Post(R"(/api/occurrences/(.+)/label)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const json body = json::parse(req.body);
        if (!body.is_object()) throw Error(ErrorCode::kUsage, "body must be a JSON object");
        LabelRequest lr;
        if (body.contains("candidate_id")) lr.candidate_id = body.at("candidate_id").get<std::string>();
        if (body.contains("custom_arabic_term")) lr.custom_arabic_term = body.at("custom_arabic_term").get<std::string>();
        lr.label = body.value("label", true);
        lr.reviewer = body.value("reviewer", std::string());
        send_json(res, post_label(req.matches[1], lr));
      });
    });
    server_.Get(R"(/api/occurrences/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send_json(res, item(req.matches[1])); });
    });
    server_.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] { send_json(res, stats()); });
    });
    server_.Get("/api/export/annotations", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] { res.set_content(export_annotations(), "text/csv; charset=utf-8"); });
    });
    server_.Get("/api/export/termbase", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto format = parse_export_format(req.has_param("format") ? req.get_param_value("format") : "tsv");
        res.set_content(export_termbase(format), format == ExportFormat::kTsv ? "text/tab-separated-values; charset=utf-8"
                                                                               : "application/x-ndjson; charset=utf-8");
      });
    });
    if (!opt_.ui_dir.empty() && !server_.set_mount_point("/", opt_.ui_dir)) {
      throw Error(ErrorCode::kIoFailure, "UI directory not found: " + opt_.ui_dir);
    }
  }

  Store store_;
  ServiceOptions opt_;
  WriterLock lock_;

  std::vector<Occurrence> occurrences_;
  std::vector<Candidate> candidates_;
  std::map<std::string, std::size_t> occ_index_;
  std::map<std::string, std::size_t> cand_index_;
  std::map<std::string, std::vector<std::size_t>> cands_by_occ_;
  std::vector<ScoredCandidate> scored_;
  std::map<std::string, std::size_t> score_index_;
  std::map<std::string, HeuristicScore> components_;
  std::string scorer_name_;

  mutable std::mutex state_mu_;
  std::shared_ptr<const AnnotationState> state_;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<std::function<void()>> queue_;
  bool closing_ = false;
  std::thread writer_;

  httplib::Server server_;
  std::thread listener_;
  bool routed_ = false;
};

}  // namespace masrad
