// masrad: command-line front end over the pipeline steps.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 provider failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "masrad/pipeline.hpp"
#include "masrad/review_service.hpp"

namespace {

using masrad::Error;
using masrad::ErrorCode;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return 1;
    case ErrorCode::kProviderUnavailable: return 3;
    default: return 2;
  }
}

std::set<std::string> book_set(const std::string& list) {
  const auto items = masrad::split_list(list);
  return {items.begin(), items.end()};
}

masrad::LabelSource parse_labels(const std::string& s) {
  if (s == "expert") return masrad::LabelSource::kExpert;
  if (s == "all") return masrad::LabelSource::kAll;
  throw Error(ErrorCode::kUsage, "labels must be expert or all");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Foreign-term / Arabic-term extraction, scoring and curation"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string config_path;
  std::string store;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  std::string embedder, translator, transliterator, ner, pos;
  std::size_t alpha = 0, beta = 0, max_window = 0, trees = 0;
  std::string normalization;
  bool clitic_variants = false;
  double threshold = 0.5;
  bool as_json = false;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* o_store = app.add_option("--store", store, "Store directory (default: $MASRAD_STORE)");
  auto* o_threads = app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  auto* o_seed = app.add_option("--seed", seed, "Random seed");
  auto* o_emb = app.add_option("--embedder", embedder, "builtin | none | process:CMD");
  auto* o_tr = app.add_option("--translator", translator, "none | table:PATH | process:CMD");
  auto* o_tl = app.add_option("--transliterator", transliterator, "builtin | none | table:PATH | process:CMD");
  auto* o_ner = app.add_option("--ner", ner, "builtin | none | table:PATH | process:CMD");
  auto* o_pos = app.add_option("--pos", pos, "builtin | none | table:PATH | process:CMD");
  auto* o_alpha = app.add_option("--alpha", alpha, "Candidate words per foreign word");
  auto* o_beta = app.add_option("--beta", beta, "Extra candidate words");
  auto* o_window = app.add_option("--max-window", max_window, "Context words kept left of the parenthesis");
  auto* o_norm = app.add_option("--normalization", normalization, "matching | comparison");
  auto* o_clitic = app.add_flag("--clitic-variants", clitic_variants, "Also emit proclitic-stripped candidates");
  auto* o_trees = app.add_option("--trees", trees, "Forest size");
  auto* o_thr = app.add_option("--threshold", threshold, "Classification threshold");
  app.add_flag("--json", as_json, "Print the step summary as JSON");

  std::string input;
  auto* extract = app.add_subcommand("extract", "Extract occurrences and candidates from a corpus");
  extract->add_option("input", input, "Corpus directory or text file")->required()->check(CLI::ExistingPath);

  auto* features = app.add_subcommand("features", "Compute features.csv");
  auto* score = app.add_subcommand("score-heuristic", "Heuristic scores and draft labels");

  std::string train_books;
  std::string train_labels = "all";
  auto* train = app.add_subcommand("train", "Train the forest");
  train->add_option("--train-books", train_books, "Comma-separated books to train on (default: all)");
  train->add_option("--labels", train_labels, "expert | all")->check(CLI::IsMember({"expert", "all"}));

  auto* predict = app.add_subcommand("predict", "Score candidates with the trained forest");

  std::string scorer = "auto";
  std::string mode = "selection";
  std::string eval_books;
  std::string eval_labels = "expert";
  auto* eval = app.add_subcommand("eval", "Precision/recall/F1 against labels");
  eval->add_option("--scorer", scorer, "auto | heuristic | model")->check(CLI::IsMember({"auto", "heuristic", "model"}));
  eval->add_option("--mode", mode, "selection | classification")->check(CLI::IsMember({"selection", "classification"}));
  eval->add_option("--books", eval_books, "Comma-separated books to evaluate (default: all)");
  eval->add_option("--labels", eval_labels, "expert | all")->check(CLI::IsMember({"expert", "all"}));

  std::string glossary;
  std::size_t k = 3;
  auto* eval_glossary = app.add_subcommand("eval-glossary", "Top-k accuracy against a glossary CSV");
  eval_glossary->add_option("glossary", glossary, "CSV with header english,french,arabic")->required()->check(CLI::ExistingFile);
  eval_glossary->add_option("--k", k, "Largest k")->check(CLI::PositiveNumber);
  eval_glossary->add_option("--scorer", scorer, "auto | heuristic | model")->check(CLI::IsMember({"auto", "heuristic", "model"}));

  auto* stats = app.add_subcommand("stats", "Corpus statistics");

  std::string format = "tsv";
  std::string out_path;
  auto* exp = app.add_subcommand("export", "Build and export the termbase");
  exp->add_option("--format", format, "tsv | jsonl")->check(CLI::IsMember({"tsv", "jsonl"}));
  exp->add_option("--out", out_path, "Write here instead of stdout");
  exp->add_option("--scorer", scorer, "auto | heuristic | model")->check(CLI::IsMember({"auto", "heuristic", "model"}));

  std::string report_format = "text";
  auto* consistency = app.add_subcommand("consistency", "Terms with more than one Arabic translation");
  consistency->add_option("--format", report_format, "text | json | tsv")->check(CLI::IsMember({"text", "json", "tsv"}));
  consistency->add_option("--scorer", scorer, "auto | heuristic | model")->check(CLI::IsMember({"auto", "heuristic", "model"}));

  auto* compact = app.add_subcommand("compact", "Drop superseded annotation records");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::string token;
  std::string ui_dir;
  auto* serve = app.add_subcommand("serve", "Run the review service");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--token", token, "Require this X-Review-Token");
  serve->add_option("--ui-dir", ui_dir, "Static review UI bundle")->check(CLI::ExistingDirectory);
  serve->add_option("--scorer", scorer, "auto | heuristic | model")->check(CLI::IsMember({"auto", "heuristic", "model"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    masrad::RunConfig cfg;
    if (const char* env = std::getenv("MASRAD_STORE")) cfg.store_root = env;
    if (!config_path.empty()) {
      const std::filesystem::path p(config_path);
      masrad::json j;
      try {
        j = masrad::json::parse(masrad::read_file(p));
      } catch (const masrad::json::exception& e) {
        throw Error(ErrorCode::kUsage, "config " + config_path + ": " + e.what());
      }
      auto from_file = masrad::RunConfig::from_json(j, p.parent_path());
      if (from_file.store_root.empty()) from_file.store_root = cfg.store_root;
      cfg = std::move(from_file);
    }
    if (o_store->count()) cfg.store_root = store;
    if (o_threads->count()) cfg.threads = threads;
    if (o_seed->count()) cfg.seed = seed;
    if (o_emb->count()) cfg.providers.embedder = masrad::ProviderSource::parse(embedder);
    if (o_tr->count()) cfg.providers.translator = masrad::ProviderSource::parse(translator);
    if (o_tl->count()) cfg.providers.transliterator = masrad::ProviderSource::parse(transliterator);
    if (o_ner->count()) cfg.providers.ner = masrad::ProviderSource::parse(ner);
    if (o_pos->count()) cfg.providers.pos = masrad::ProviderSource::parse(pos);
    if (o_alpha->count()) cfg.candgen.alpha = alpha;
    if (o_beta->count()) cfg.candgen.beta = beta;
    if (o_window->count()) cfg.extract.max_window = max_window;
    if (o_norm->count()) cfg.set_normalization(normalization);
    if (o_clitic->count()) cfg.candgen.clitic_variants = clitic_variants;
    if (o_trees->count()) cfg.trees = trees;
    if (o_thr->count()) cfg.threshold = threshold;
    cfg.validate();

    masrad::StepResult result;
    if (*extract) {
      result = masrad::run_extract(cfg, input);
    } else if (*features) {
      result = masrad::run_features(cfg);
    } else if (*score) {
      result = masrad::run_score_heuristic(cfg);
    } else if (*train) {
      result = masrad::run_train(cfg, {book_set(train_books), parse_labels(train_labels)});
    } else if (*predict) {
      result = masrad::run_predict(cfg);
    } else if (*eval) {
      masrad::EvalOptions opt;
      opt.scorer = masrad::parse_scorer(scorer);
      opt.mode = mode == "classification" ? masrad::EvalMode::kClassification : masrad::EvalMode::kSelection;
      opt.books = book_set(eval_books);
      opt.labels = parse_labels(eval_labels);
      result = masrad::run_eval(cfg, opt);
    } else if (*eval_glossary) {
      result = masrad::run_eval_glossary(cfg, glossary, k, masrad::parse_scorer(scorer));
    } else if (*stats) {
      result = masrad::run_stats(cfg);
    } else if (*exp) {
      result = masrad::run_export(cfg, masrad::parse_export_format(format), masrad::parse_scorer(scorer));
      if (!out_path.empty()) {
        masrad::write_file_atomic(out_path, result.text);
        result.text.clear();
      }
    } else if (*consistency) {
      const auto f = report_format == "json" ? masrad::ReportFormat::kJson
                     : report_format == "tsv" ? masrad::ReportFormat::kTsv
                                              : masrad::ReportFormat::kText;
      result = masrad::run_consistency(cfg, f, masrad::parse_scorer(scorer));
    } else if (*compact) {
      result = masrad::run_compact(cfg);
    } else if (*serve) {
      masrad::ServiceOptions opt;
      opt.token = token;
      opt.ui_dir = ui_dir;
      opt.scorer = masrad::parse_scorer(scorer);
      masrad::ReviewService service(cfg.store_root, opt);
      std::cerr << "serving " << cfg.store_root.string() << " on http://" << host << ":" << port << "\n";
      service.serve(host, port);
      return 0;
    }
    if (as_json) {
      std::cout << result.summary.dump(2) << "\n";
    } else {
      std::cout << result.text;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "masrad: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "masrad: " << e.what() << "\n";
    return 2;
  }
}
