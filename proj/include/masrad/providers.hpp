#pragma once

// External NLP capabilities (embeddings, MT, transliteration, NER, POS)
// behind small interfaces. Offline defaults are lookup tables and simple
// rules; model-backed providers attach as child processes speaking
// line-delimited JSON.

#include <fcntl.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "masrad/error.hpp"
#include "masrad/extract.hpp"
#include "masrad/soundex.hpp"
#include "masrad/textnorm.hpp"

namespace masrad {

enum class Entity { kPER, kLOC, kORG, kMISC, kNone };

inline constexpr std::array<Entity, 5> kAllEntities = {Entity::kPER, Entity::kLOC, Entity::kORG,
                                                       Entity::kMISC, Entity::kNone};

inline std::string_view entity_name(Entity e) {
  switch (e) {
    case Entity::kPER: return "PER";
    case Entity::kLOC: return "LOC";
    case Entity::kORG: return "ORG";
    case Entity::kMISC: return "MISC";
    case Entity::kNone: return "None";
  }
  return "None";
}

inline Entity parse_entity(std::string_view s) {
  for (Entity e : kAllEntities) {
    if (entity_name(e) == s) return e;
  }
  if (s.empty() || s == "O" || s == "none") return Entity::kNone;
  throw Error(ErrorCode::kUnknownCategory, "entity '" + std::string(s) + "'");
}

enum class Pos { kAdj, kAdv, kConj, kMisc, kNoun, kNounProp, kPart, kPrep, kPron, kVerb };

inline constexpr std::array<Pos, 10> kAllPos = {Pos::kAdj,  Pos::kAdv,      Pos::kConj, Pos::kMisc,
                                                Pos::kNoun, Pos::kNounProp, Pos::kPart, Pos::kPrep,
                                                Pos::kPron, Pos::kVerb};

inline std::string_view pos_name(Pos p) {
  switch (p) {
    case Pos::kAdj: return "adj";
    case Pos::kAdv: return "adv";
    case Pos::kConj: return "conj";
    case Pos::kMisc: return "misc";
    case Pos::kNoun: return "noun";
    case Pos::kNounProp: return "noun_prop";
    case Pos::kPart: return "part";
    case Pos::kPrep: return "prep";
    case Pos::kPron: return "pron";
    case Pos::kVerb: return "verb";
  }
  return "misc";
}

inline Pos parse_pos(std::string_view s) {
  for (Pos p : kAllPos) {
    if (pos_name(p) == s) return p;
  }
  throw Error(ErrorCode::kUnknownCategory, "pos '" + std::string(s) + "'");
}

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<double> embed(std::string_view text) = 0;
};

/// Translator and transliterator share this shape: foreign text in, Arabic out.
class TextMapper {
 public:
  virtual ~TextMapper() = default;
  virtual std::string map(std::string_view text) = 0;
};

class EntityTagger {
 public:
  virtual ~EntityTagger() = default;
  virtual Entity tag(std::string_view text, std::string_view context) = 0;
};

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual Pos tag(std::string_view word, std::string_view context) = 0;
};

/// Key under which table entries are stored and looked up.
inline std::string lookup_key(std::string_view text) {
  return arabic_term_key(foreign_term_key(text));
}

/// Two-column UTF-8 TSV (input, output). Blank lines and lines starting
/// with '#' are skipped.
class LookupTable {
 public:
  LookupTable() = default;

  static LookupTable from_tsv(std::string_view content) {
    LookupTable t;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < content.size()) {
      std::size_t nl = content.find('\n', start);
      if (nl == std::string_view::npos) nl = content.size();
      auto line = content.substr(start, nl - start);
      start = nl + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        throw Error(ErrorCode::kParse, "table line " + std::to_string(line_no) + " has no tab");
      }
      t.insert(line.substr(0, tab), line.substr(tab + 1));
    }
    return t;
  }

  static LookupTable load(const std::filesystem::path& path) {
    return from_tsv(read_file(path));
  }

  void insert(std::string_view input, std::string_view output) {
    entries_[lookup_key(input)] = std::string(output);
  }

  std::optional<std::string> find(std::string_view input) const {
    auto it = entries_.find(lookup_key(input));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::string> entries_;
};

class TableMapper : public TextMapper {
 public:
  explicit TableMapper(LookupTable table, std::shared_ptr<TextMapper> fallback = nullptr)
      : table_(std::move(table)), fallback_(std::move(fallback)) {}

  std::string map(std::string_view text) override {
    if (auto hit = table_.find(text)) return *hit;
    if (fallback_) return fallback_->map(text);
    throw Error(ErrorCode::kProviderUnavailable, "no table entry for '" + std::string(text) + "'");
  }

 private:
  LookupTable table_;
  std::shared_ptr<TextMapper> fallback_;
};

/// Character-level Latin -> Arabic transliteration. Crude but deterministic;
/// used when no transliteration table entry exists.
class RuleTransliterator : public TextMapper {
 public:
  std::string map(std::string_view text) override {
    std::string out;
    std::string ascii;
    std::size_t pos = 0;
    auto flush = [&]() {
      out += transliterate_word(ascii);
      ascii.clear();
    };
    while (pos < text.size()) {
      const char32_t c = utf8::next(text, pos);
      if (chars::is_space(c) || chars::is_dash(c)) {
        flush();
        if (!out.empty() && out.back() != ' ') out.push_back(' ');
        continue;
      }
      if (const char a = fold_latin_to_ascii(c); a != 0) ascii.push_back(a);
    }
    flush();
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
  }

 private:
  static std::string transliterate_word(const std::string& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0 && w[i] == w[i - 1] && w[i] != 'e' && w[i] != 'o') continue;
      const char c = w[i];
      const char next = i + 1 < w.size() ? w[i + 1] : '\0';
      const bool first = i == 0;
      auto digraph = [&](const char* ar) {
        out += ar;
        ++i;
      };
      if (c == 's' && next == 'h') { digraph("ش"); continue; }
      if (c == 't' && next == 'h') { digraph("ث"); continue; }
      if (c == 'k' && next == 'h') { digraph("خ"); continue; }
      if (c == 'g' && next == 'h') { digraph("غ"); continue; }
      if (c == 'c' && next == 'h') { digraph("تش"); continue; }
      if (c == 'p' && next == 'h') { digraph("ف"); continue; }
      if (c == 'e' && next == 'e') { digraph("ي"); continue; }
      if (c == 'o' && next == 'o') { digraph("و"); continue; }
      switch (c) {
        case 'a': out += "ا"; break;
        case 'e': out += first ? "إي" : (i + 1 == w.size() ? "" : "ي"); break;
        case 'i': out += first ? "إي" : "ي"; break;
        case 'o': out += first ? "أو" : "و"; break;
        case 'u': out += first ? "أو" : "و"; break;
        case 'y': out += "ي"; break;
        case 'b': out += "ب"; break;
        case 'c': out += (next == 'e' || next == 'i') ? "س" : "ك"; break;
        case 'd': out += "د"; break;
        case 'f': out += "ف"; break;
        case 'g': out += "غ"; break;
        case 'h': out += "ه"; break;
        case 'j': out += "ج"; break;
        case 'k': out += "ك"; break;
        case 'l': out += "ل"; break;
        case 'm': out += "م"; break;
        case 'n': out += "ن"; break;
        case 'p': out += "ب"; break;
        case 'q': out += "ك"; break;
        case 'r': out += "ر"; break;
        case 's': out += "س"; break;
        case 't': out += "ت"; break;
        case 'v': out += "ف"; break;
        case 'w': out += "و"; break;
        case 'x': out += "كس"; break;
        case 'z': out += "ز"; break;
        default: break;
      }
    }
    return out;
  }
};

/// Character n-gram hashing embedder over the romanized text. NOT a
/// semantic model: it exists so the pipeline runs without downloads, and
/// gives high cosine only to strings that share sound-alike n-grams.
class HashingEmbedder : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {}

  std::vector<double> embed(std::string_view text) override {
    std::vector<double> v(dim_, 0.0);
    const std::string r = "^" + romanize(text) + "$";
    for (std::size_t n = 2; n <= 3; ++n) {
      for (std::size_t i = 0; i + n <= r.size(); ++i) {
        const std::uint64_t h = fnv1a(std::string_view(r).substr(i, n));
        v[h % dim_] += ((h >> 63) != 0U) ? -1.0 : 1.0;
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    return v;
  }

 private:
  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  }

  std::size_t dim_;
};

class TableEntityTagger : public EntityTagger {
 public:
  explicit TableEntityTagger(LookupTable table = {}) : table_(std::move(table)) {}

  Entity tag(std::string_view text, std::string_view /*context*/) override {
    if (auto hit = table_.find(text)) return parse_entity(*hit);
    return Entity::kNone;
  }

 private:
  LookupTable table_;
};

class TablePosTagger : public PosTagger {
 public:
  explicit TablePosTagger(LookupTable table = {}) : table_(std::move(table)) {}

  Pos tag(std::string_view word, std::string_view /*context*/) override {
    if (auto hit = table_.find(word)) return parse_pos(*hit);
    return Pos::kMisc;
  }

 private:
  LookupTable table_;
};

/// Closed-class Arabic function words, used by the builtin POS tagger.
inline LookupTable builtin_pos_lexicon() {
  LookupTable t;
  for (const char* w : {"في", "من", "إلى", "الى", "على", "عن", "مع", "حتى", "منذ", "بين",
                        "عند", "لدى", "نحو", "خلال", "ضد", "دون", "عبر", "حول", "مثل"}) {
    t.insert(w, "prep");
  }
  for (const char* w : {"و", "ف", "ثم", "أو", "او", "أم", "لكن", "بل", "إذ", "حيث", "إن", "أن",
                        "ولا", "كما"}) {
    t.insert(w, "conj");
  }
  for (const char* w : {"هو", "هي", "هم", "هن", "نحن", "أنا", "أنت", "التي", "الذي", "الذين",
                        "هذا", "هذه", "ذلك", "تلك", "هؤلاء"}) {
    t.insert(w, "pron");
  }
  for (const char* w : {"لا", "لم", "لن", "قد", "لقد", "سوف", "ما", "إلا", "هل"}) {
    t.insert(w, "part");
  }
  for (const char* w : {"كان", "كانت", "يكون", "تكون", "قال", "يقول", "انتقد", "يتحول",
                        "أصبح", "يرى", "يمكن", "يجب"}) {
    t.insert(w, "verb");
  }
  for (const char* w : {"كثيرا", "جدا", "أيضا", "هنا", "هناك", "فقط", "دائما"}) {
    t.insert(w, "adv");
  }
  return t;
}

/// Lexicon lookup; any other Arabic word is tagged noun, the most frequent
/// open class. Non-Arabic tokens are misc.
class BuiltinPosTagger : public PosTagger {
 public:
  BuiltinPosTagger() : table_(builtin_pos_lexicon()) {}

  Pos tag(std::string_view word, std::string_view /*context*/) override {
    if (auto hit = table_.find(word)) return parse_pos(*hit);
    return classify_script(word) == Script::kArabic ? Pos::kNoun : Pos::kMisc;
  }

 private:
  LookupTable table_;
};

/// A child process answering one JSON request per line on stdin with one
/// JSON response per line on stdout:
///   request  {"op": "embed"|"translate"|"transliterate"|"ner"|"pos", "text": ..., "context": ...}
///   response {"ok": true, "value": ...}  or  {"ok": false, "error": ...}
/// Calls are serialized; the process is started lazily and restarted after
/// a broken pipe.
class ProcessClient {
 public:
  explicit ProcessClient(std::string command) : command_(std::move(command)) {}
  ProcessClient(const ProcessClient&) = delete;
  ProcessClient& operator=(const ProcessClient&) = delete;
  ~ProcessClient() { stop(); }

  nlohmann::json request(std::string_view op, std::string_view text,
                         std::string_view context = {}) {
    std::lock_guard<std::mutex> lock(mu_);
    nlohmann::json req = {{"op", op}, {"text", text}};
    if (!context.empty()) req["context"] = context;
    const std::string line = req.dump() + "\n";
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (pid_ <= 0) start();
      if (write_all(line)) {
        if (auto resp = read_line()) {
          nlohmann::json j;
          try {
            j = nlohmann::json::parse(*resp);
          } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::kProviderUnavailable, std::string("bad provider reply: ") + e.what());
          }
          if (!j.value("ok", false) || !j.contains("value")) {
            throw Error(ErrorCode::kProviderUnavailable,
                        "provider refused " + std::string(op) + ": " + j.value("error", std::string("unknown")));
          }
          return j["value"];
        }
      }
      stop();
    }
    throw Error(ErrorCode::kProviderUnavailable, "provider process '" + command_ + "' not responding");
  }

 private:
  void start() {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw Error(ErrorCode::kProviderUnavailable, "pipe failed");
    }
    const pid_t pid = fork();
    if (pid < 0) throw Error(ErrorCode::kProviderUnavailable, "fork failed");
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    signal(SIGPIPE, SIG_IGN);
    pid_ = pid;
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
    buffer_.clear();
  }

  void stop() {
    if (in_fd_ >= 0) close(in_fd_);
    if (out_fd_ >= 0) close(out_fd_);
    in_fd_ = out_fd_ = -1;
    if (pid_ > 0) {
      int status = 0;
      waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }

  bool write_all(const std::string& data) {
    std::size_t done = 0;
    while (done < data.size()) {
      const ssize_t n = write(in_fd_, data.data() + done, data.size() - done);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      done += static_cast<std::size_t>(n);
    }
    return true;
  }

  std::optional<std::string> read_line() {
    for (;;) {
      const std::size_t nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      const ssize_t n = read(out_fd_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return std::nullopt;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::string command_;
  std::mutex mu_;
  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
};

class ProcessEmbedder : public Embedder {
 public:
  explicit ProcessEmbedder(std::shared_ptr<ProcessClient> client) : client_(std::move(client)) {}
  std::vector<double> embed(std::string_view text) override {
    const auto v = client_->request("embed", text);
    if (!v.is_array()) throw Error(ErrorCode::kProviderUnavailable, "embedding is not an array");
    return v.get<std::vector<double>>();
  }

 private:
  std::shared_ptr<ProcessClient> client_;
};

class ProcessMapper : public TextMapper {
 public:
  ProcessMapper(std::shared_ptr<ProcessClient> client, std::string op)
      : client_(std::move(client)), op_(std::move(op)) {}
  std::string map(std::string_view text) override {
    const auto v = client_->request(op_, text);
    if (!v.is_string()) throw Error(ErrorCode::kProviderUnavailable, op_ + " value is not a string");
    return v.get<std::string>();
  }

 private:
  std::shared_ptr<ProcessClient> client_;
  std::string op_;
};

class ProcessEntityTagger : public EntityTagger {
 public:
  explicit ProcessEntityTagger(std::shared_ptr<ProcessClient> client) : client_(std::move(client)) {}
  Entity tag(std::string_view text, std::string_view context) override {
    const auto v = client_->request("ner", text, context);
    return v.is_null() ? Entity::kNone : parse_entity(v.get<std::string>());
  }

 private:
  std::shared_ptr<ProcessClient> client_;
};

class ProcessPosTagger : public PosTagger {
 public:
  explicit ProcessPosTagger(std::shared_ptr<ProcessClient> client) : client_(std::move(client)) {}
  Pos tag(std::string_view word, std::string_view context) override {
    return parse_pos(client_->request("pos", word, context).get<std::string>());
  }

 private:
  std::shared_ptr<ProcessClient> client_;
};

namespace detail {

/// Thread-safe memo of a provider call. Failures are memoized too, so a
/// provider is asked at most once per distinct input within a run.
template <typename Value>
class Memo {
 public:
  template <typename Fn>
  Value get(const std::string& key, Fn&& compute) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) {
        if (it->second.error) throw Error(ErrorCode::kProviderUnavailable, *it->second.error);
        return it->second.value;
      }
    }
    Entry e;
    try {
      e.value = compute();
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kProviderUnavailable) throw;
      e.error = err.what();
    }
    std::lock_guard<std::mutex> lock(mu_);
    const auto& stored = cache_.emplace(key, std::move(e)).first->second;
    if (stored.error) throw Error(ErrorCode::kProviderUnavailable, *stored.error);
    return stored.value;
  }

 private:
  struct Entry {
    Value value{};
    std::optional<std::string> error;
  };
  std::mutex mu_;
  std::unordered_map<std::string, Entry> cache_;
};

}  // namespace detail

/// The five providers, each memoized for the lifetime of the set.
class ProviderSet {
 public:
  ProviderSet(std::shared_ptr<Embedder> embedder, std::shared_ptr<TextMapper> translator,
              std::shared_ptr<TextMapper> transliterator, std::shared_ptr<EntityTagger> ner,
              std::shared_ptr<PosTagger> pos_tagger)
      : embedder_(std::move(embedder)),
        translator_(std::move(translator)),
        transliterator_(std::move(transliterator)),
        ner_(std::move(ner)),
        pos_tagger_(std::move(pos_tagger)) {}

  /// Offline defaults: hashing embedder, no translator, rule transliterator,
  /// empty NER table, builtin closed-class POS lexicon.
  static ProviderSet builtin() {
    return ProviderSet(std::make_shared<HashingEmbedder>(), nullptr,
                       std::make_shared<RuleTransliterator>(),
                       std::make_shared<TableEntityTagger>(), std::make_shared<BuiltinPosTagger>());
  }

  std::vector<double> embed(std::string_view text) {
    if (!embedder_) throw Error(ErrorCode::kProviderUnavailable, "no embedder configured");
    return embed_memo_.get(std::string(text), [&] { return embedder_->embed(text); });
  }
  std::string translate(std::string_view text) {
    if (!translator_) throw Error(ErrorCode::kProviderUnavailable, "no translator configured");
    return translate_memo_.get(std::string(text), [&] { return translator_->map(text); });
  }
  std::string transliterate(std::string_view text) {
    if (!transliterator_) throw Error(ErrorCode::kProviderUnavailable, "no transliterator configured");
    return translit_memo_.get(std::string(text), [&] { return transliterator_->map(text); });
  }
  Entity ner(std::string_view text, std::string_view context) {
    if (!ner_) throw Error(ErrorCode::kProviderUnavailable, "no NER configured");
    std::string key(text);
    key.push_back('\x1f');
    key.append(context);
    return ner_memo_.get(key, [&] { return ner_->tag(text, context); });
  }
  Pos pos(std::string_view word, std::string_view context) {
    if (!pos_tagger_) throw Error(ErrorCode::kProviderUnavailable, "no POS tagger configured");
    std::string key(word);
    key.push_back('\x1f');
    key.append(context);
    return pos_memo_.get(key, [&] { return pos_tagger_->tag(word, context); });
  }

 private:
  std::shared_ptr<Embedder> embedder_;
  std::shared_ptr<TextMapper> translator_;
  std::shared_ptr<TextMapper> transliterator_;
  std::shared_ptr<EntityTagger> ner_;
  std::shared_ptr<PosTagger> pos_tagger_;
  detail::Memo<std::vector<double>> embed_memo_;
  detail::Memo<std::string> translate_memo_;
  detail::Memo<std::string> translit_memo_;
  detail::Memo<Entity> ner_memo_;
  detail::Memo<Pos> pos_memo_;
};

/// Where one provider comes from: "builtin", "none", "table:PATH" or
/// "process:CMD".
struct ProviderSource {
  std::string kind = "builtin";
  std::string arg;

  static ProviderSource parse(std::string_view spec) {
    if (spec == "builtin" || spec.empty()) return {"builtin", ""};
    if (spec == "none") return {"none", ""};
    if (spec.rfind("table:", 0) == 0) return {"table", std::string(spec.substr(6))};
    if (spec.rfind("process:", 0) == 0) return {"process", std::string(spec.substr(8))};
    throw Error(ErrorCode::kUsage, "bad provider source '" + std::string(spec) + "'");
  }

  std::string str() const { return arg.empty() ? kind : kind + ":" + arg; }
};

struct ProviderConfig {
  ProviderSource embedder;
  ProviderSource translator;
  ProviderSource transliterator;
  ProviderSource ner;
  ProviderSource pos;
};

/// Builds a ProviderSet. Process providers with the same command share one
/// child process.
inline ProviderSet make_providers(const ProviderConfig& cfg) {
  std::map<std::string, std::shared_ptr<ProcessClient>> clients;
  auto client = [&](const std::string& cmd) {
    auto& c = clients[cmd];
    if (!c) c = std::make_shared<ProcessClient>(cmd);
    return c;
  };
  auto table = [](const ProviderSource& s) { return LookupTable::load(s.arg); };

  std::shared_ptr<Embedder> embedder;
  if (cfg.embedder.kind == "builtin") embedder = std::make_shared<HashingEmbedder>();
  else if (cfg.embedder.kind == "process") embedder = std::make_shared<ProcessEmbedder>(client(cfg.embedder.arg));
  else if (cfg.embedder.kind == "table") throw Error(ErrorCode::kUsage, "embedder cannot be a table");

  std::shared_ptr<TextMapper> translator;
  if (cfg.translator.kind == "table") translator = std::make_shared<TableMapper>(table(cfg.translator));
  else if (cfg.translator.kind == "process") translator = std::make_shared<ProcessMapper>(client(cfg.translator.arg), "translate");

  std::shared_ptr<TextMapper> transliterator;
  auto rules = std::make_shared<RuleTransliterator>();
  if (cfg.transliterator.kind == "builtin") transliterator = rules;
  else if (cfg.transliterator.kind == "table") transliterator = std::make_shared<TableMapper>(table(cfg.transliterator), rules);
  else if (cfg.transliterator.kind == "process") transliterator = std::make_shared<ProcessMapper>(client(cfg.transliterator.arg), "transliterate");

  std::shared_ptr<EntityTagger> ner;
  if (cfg.ner.kind == "builtin") ner = std::make_shared<TableEntityTagger>();
  else if (cfg.ner.kind == "table") ner = std::make_shared<TableEntityTagger>(table(cfg.ner));
  else if (cfg.ner.kind == "process") ner = std::make_shared<ProcessEntityTagger>(client(cfg.ner.arg));

  std::shared_ptr<PosTagger> pos;
  if (cfg.pos.kind == "builtin") pos = std::make_shared<BuiltinPosTagger>();
  else if (cfg.pos.kind == "table") pos = std::make_shared<TablePosTagger>(table(cfg.pos));
  else if (cfg.pos.kind == "process") pos = std::make_shared<ProcessPosTagger>(client(cfg.pos.arg));

  return ProviderSet(std::move(embedder), std::move(translator), std::move(transliterator),
                     std::move(ner), std::move(pos));
}

}  // namespace masrad
