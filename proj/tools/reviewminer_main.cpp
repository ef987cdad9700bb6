#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reviewminer/corpus_ingest.hpp"
#include "reviewminer/errors.hpp"
#include "reviewminer/pipeline.hpp"
#include "reviewminer/report.hpp"
#include "reviewminer/sentiment.hpp"
#include "reviewminer/term_stats.hpp"
#include "reviewminer/text_prep.hpp"
#include "reviewminer/topic_model.hpp"

namespace fs = std::filesystem;
namespace rm = reviewminer;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kFailed = 2 };

fs::path default_data_dir() {
  if (const char* env = std::getenv("REVIEWMINER_DATA_DIR"); env && *env) return env;
  if (fs::is_directory(REVIEWMINER_DEFAULT_DATA_DIR)) return REVIEWMINER_DEFAULT_DATA_DIR;
  return REVIEWMINER_INSTALLED_DATA_DIR;
}

// Flags that map onto config-file keys. They are applied after --config, so
// anything given on the command line wins.
class ConfigFlags {
 public:
  void add(CLI::App* app, const std::string& flag, std::string key, const std::string& help) {
    auto& slot = slots_.emplace_back(std::move(key), std::nullopt);
    app->add_option(flag, slot.second, help);
  }

  void apply(rm::PipelineConfig& cfg) const {
    for (const auto& [key, value] : slots_)
      if (value) rm::apply_config_entry(cfg, key, *value);
  }

 private:
  std::deque<std::pair<std::string, std::optional<std::string>>> slots_;
};

struct Common {
  std::optional<fs::path> config;
  std::optional<fs::path> data_dir;
  ConfigFlags flags;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key = value config file, applied before other flags")->check(CLI::ExistingFile);
  app->add_option("--data-dir", c.data_dir, "directory holding the default word lists and lexicon");
  c.flags.add(app, "-i,--input", "input", "review file");
  c.flags.add(app, "--format", "format", "csv or jsonl");
  c.flags.add(app, "--stopwords", "stopwords", "stop-word list");
  c.flags.add(app, "--extensions", "extensions", "domain stop-word extensions");
  c.flags.add(app, "--language-threshold", "language_threshold", "minimum stop-word ratio for untagged reviews");
  c.flags.add(app, "--threads", "threads", "worker threads");
}

rm::PipelineConfig resolve(const Common& c) {
  rm::PipelineConfig cfg;
  if (c.config) rm::apply_config_file(cfg, *c.config);
  c.flags.apply(cfg);
  cfg.fill_default_data_paths(c.data_dir ? *c.data_dir : default_data_dir());
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw rm::ValidationError("cannot write '" + p.string() + "'");
  return out;
}

fs::path output_dir(const rm::PipelineConfig& cfg) {
  if (!cfg.output.empty()) fs::create_directories(cfg.output);
  return cfg.output;
}

// ---- ingest ----------------------------------------------------------------

struct IngestArgs {
  Common common;
  std::optional<fs::path> errors;
  std::optional<fs::path> tokens;
  std::optional<fs::path> write;
  int ngram = 1;
};

int run_ingest(const IngestArgs& a) {
  const auto cfg = resolve(a.common);
  const auto loaded = rm::load_corpus(cfg);
  const auto& in = loaded.ingested;
  std::cout << "rows\t" << in.row_count << "\nwell_formed\t" << in.corpus.reviews.size() << "\nmalformed\t"
            << in.errors.size() << "\nremoved_non_english\t" << loaded.removed_non_english << "\nkept\t"
            << loaded.kept.reviews.size() << '\n';
  if (a.errors) {
    auto out = open_out(*a.errors);
    rm::write_error_report(in.errors, out);
  } else {
    for (const auto& e : in.errors) std::cerr << "line " << e.line << " [" << e.field << "]: " << e.message << '\n';
  }
  if (a.write) {
    auto out = open_out(*a.write);
    if (cfg.format == rm::InputFormat::jsonl) {
      rm::write_jsonl(loaded.kept, out);
    } else {
      rm::write_csv(loaded.kept, out);
    }
  }
  if (a.tokens) {
    const auto corpus = rm::build_corpus(loaded.kept, loaded.stop, rm::NGramConfig{a.ngram}, cfg.threads);
    auto out = open_out(*a.tokens);
    rm::write_token_dump(corpus, out);
  }
  return kOk;
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
  Common common;
  int ngram = 1;
  std::size_t top = 20;
  std::string by = "count";
  std::optional<fs::path> out;
};

int run_stats(const StatsArgs& a) {
  const auto cfg = resolve(a.common);
  const auto loaded = rm::load_corpus(cfg);
  if (loaded.kept.reviews.empty()) throw rm::DataError("no reviews left after language filtering");
  const auto corpus = rm::build_corpus(loaded.kept, loaded.stop, rm::NGramConfig{a.ngram}, cfg.threads);
  const auto stats = rm::tfidf(corpus);
  const auto by = a.by == "tfidf" ? rm::RankBy::tfidf : rm::RankBy::count;
  if (a.out) {
    auto out = open_out(*a.out);
    out.precision(10);
    rm::write_stats_tsv(stats, corpus.vocab, a.top, by, out);
  } else {
    std::cout.precision(10);
    rm::write_stats_tsv(stats, corpus.vocab, a.top, by, std::cout);
  }
  return kOk;
}

// ---- topics ----------------------------------------------------------------

int run_topics(const Common& common) {
  const auto cfg = resolve(common);
  const auto loaded = rm::load_corpus(cfg);
  if (loaded.kept.reviews.empty()) throw rm::DataError("no reviews left after language filtering");

  std::map<int, rm::TokenizedCorpus> corpora;
  for (const int o : cfg.orders) {
    auto c = rm::build_corpus(loaded.kept, loaded.stop, rm::NGramConfig{o}, cfg.threads);
    if (c.non_empty_docs() == 0) {
      std::cerr << "warning: no non-empty documents at n-gram order " << o << "; order skipped\n";
      continue;
    }
    corpora.emplace(o, std::move(c));
  }
  if (corpora.empty()) throw rm::DataError("no n-gram order has a non-empty document");

  rm::LdaModel best;
  const auto section = rm::sweep_section(corpora, cfg, "global", loaded.kept.reviews.size(), &best);
  std::cout.precision(10);
  rm::write_sweep_tsv(section, std::cout);

  if (!cfg.output.empty()) {
    const auto dir = output_dir(cfg);
    auto sweep = open_out(dir / "sweep.tsv");
    sweep.precision(10);
    rm::write_sweep_tsv(section, sweep);
    auto topics = open_out(dir / "topics.tsv");
    topics.precision(10);
    rm::write_topics_tsv(section.topics, topics);
    const int order = section.entries[*section.best].order;
    auto model = open_out(dir / "model.json");
    model << rm::model_to_json(best, corpora.at(order).vocab).dump() << '\n';
  }
  return kOk;
}

// ---- sentiment -------------------------------------------------------------

int run_sentiment(const Common& common) {
  const auto cfg = resolve(common);
  const auto loaded = rm::load_corpus(cfg);
  const auto& raw = loaded.kept;
  const auto stats = rm::rating_stats(raw);
  if (stats.sd == 0.0) std::cerr << "warning: rating standard deviation is 0; every review is auto-labeled neutral\n";
  const auto unigrams = rm::build_corpus(raw, loaded.stop, rm::NGramConfig{1}, cfg.threads);
  const auto outcome = rm::classify_reviews(raw, unigrams, stats, cfg);

  rm::Report partial;
  partial.sentiment = outcome.section;
  const auto evaluation = rm::report_to_json(partial).at("sentiment").dump(2);

  if (cfg.output.empty()) {
    rm::write_labels_csv(outcome.rows, std::cout);
    if (cfg.sentiment_method != rm::SentimentMethod::automatic) std::cerr << evaluation << '\n';
    return kOk;
  }
  const auto dir = output_dir(cfg);
  auto labels = open_out(dir / "labels.csv");
  rm::write_labels_csv(outcome.rows, labels);
  auto eval = open_out(dir / "evaluation.json");
  eval << evaluation << '\n';
  if (cfg.sentiment_method != rm::SentimentMethod::automatic) std::cout << evaluation << '\n';
  return kOk;
}

// ---- pipeline / report -----------------------------------------------------

int run_pipeline_cmd(const Common& common) {
  const auto cfg = resolve(common);
  if (cfg.output.empty()) throw rm::ValidationError("pipeline needs an output directory (--out)");
  try {
    const auto report = rm::run_pipeline(cfg);
    rm::emit_report(report, cfg.output);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "report written to " << (cfg.output / "report.json").string() << '\n';
    return kOk;
  } catch (const rm::StageError& e) {
    rm::emit_report(e.partial(), cfg.output);
    std::cerr << "error: " << e.what() << "\npartial report written to " << cfg.output.string() << '\n';
    return e.invalid_input() ? kInvalid : kFailed;
  }
}

int run_report(const fs::path& from, const fs::path& out) {
  std::ifstream in(from, std::ios::binary);
  if (!in) throw rm::ValidationError("cannot read '" + from.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw rm::ValidationError(from.string() + ": " + e.what());
  }
  const auto report = rm::report_from_json(j);
  rm::emit_report(report, out);
  std::cout << "report files written to " << out.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"App-review analytics: term statistics, LDA topic sweeps and sentiment labeling"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "parse and validate a review file");
  add_common(ingest, ingest_args.common);
  ingest->add_option("--errors", ingest_args.errors, "write the row-error report (JSONL) here");
  ingest->add_option("--tokens", ingest_args.tokens, "write a token dump (JSONL) here");
  ingest->add_option("--ngram", ingest_args.ngram, "n-gram order for the token dump")->check(CLI::Range(1, 3));
  ingest->add_option("--write", ingest_args.write, "write the kept reviews here, in the input format");

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "word counts and TF-IDF totals");
  add_common(stats, stats_args.common);
  stats->add_option("--ngram", stats_args.ngram, "n-gram order")->check(CLI::Range(1, 3));
  stats->add_option("--top", stats_args.top, "number of terms")->check(CLI::PositiveNumber);
  stats->add_option("--by", stats_args.by, "ranking: count or tfidf")->check(CLI::IsMember({"count", "tfidf"}));
  stats->add_option("-o,--out", stats_args.out, "TSV output file (default stdout)");

  Common topics_common;
  auto* topics = app.add_subcommand("topics", "LDA sweep over n-gram orders and topic counts");
  add_common(topics, topics_common);
  topics_common.flags.add(topics, "--ngram", "orders", "1, 2, 3, a comma list, or all");
  topics_common.flags.add(topics, "--topics-min", "topics_min", "smallest K");
  topics_common.flags.add(topics, "--topics-max", "topics_max", "largest K");
  topics_common.flags.add(topics, "--alpha", "alpha", "document-topic prior (default 50/K)");
  topics_common.flags.add(topics, "--beta", "beta", "topic-word prior");
  topics_common.flags.add(topics, "--iters", "iterations", "Gibbs sweeps per fit");
  topics_common.flags.add(topics, "--seed", "seed", "run seed");
  topics_common.flags.add(topics, "--top-n", "top_n", "top words per topic (also the coherence window)");
  topics_common.flags.add(topics, "-o,--out", "output", "directory for sweep.tsv, topics.tsv, model.json");

  Common sentiment_common;
  auto* sentiment = app.add_subcommand("sentiment", "label reviews and evaluate classifiers");
  add_common(sentiment, sentiment_common);
  sentiment_common.flags.add(sentiment, "--method", "method", "auto, polarity, compound, nb or all");
  sentiment_common.flags.add(sentiment, "--threshold", "compound_threshold", "compound-score threshold");
  sentiment_common.flags.add(sentiment, "--split", "split", "training fraction");
  sentiment_common.flags.add(sentiment, "--seed", "seed", "run seed");
  sentiment_common.flags.add(sentiment, "--nb-alpha", "nb_alpha", "Naive Bayes smoothing");
  sentiment_common.flags.add(sentiment, "--lexicon", "lexicon", "valence lexicon TSV");
  sentiment_common.flags.add(sentiment, "--negators", "negators", "negator list");
  sentiment_common.flags.add(sentiment, "--boosters", "boosters", "booster TSV");
  sentiment_common.flags.add(sentiment, "-o,--out", "output", "directory for labels.csv and evaluation.json");

  Common pipeline_common;
  auto* pipeline = app.add_subcommand("pipeline", "run every stage and write a report");
  add_common(pipeline, pipeline_common);
  pipeline_common.flags.add(pipeline, "--ngram", "orders", "1, 2, 3, a comma list, or all");
  pipeline_common.flags.add(pipeline, "--topics-min", "topics_min", "smallest K");
  pipeline_common.flags.add(pipeline, "--topics-max", "topics_max", "largest K");
  pipeline_common.flags.add(pipeline, "--alpha", "alpha", "document-topic prior (default 50/K)");
  pipeline_common.flags.add(pipeline, "--beta", "beta", "topic-word prior");
  pipeline_common.flags.add(pipeline, "--iters", "iterations", "Gibbs sweeps per fit");
  pipeline_common.flags.add(pipeline, "--top-n", "top_n", "top words per topic");
  pipeline_common.flags.add(pipeline, "--top-terms", "top_terms", "rows in the top-terms tables");
  pipeline_common.flags.add(pipeline, "--method", "method", "auto, polarity, compound, nb or all");
  pipeline_common.flags.add(pipeline, "--threshold", "compound_threshold", "compound-score threshold");
  pipeline_common.flags.add(pipeline, "--split", "split", "training fraction");
  pipeline_common.flags.add(pipeline, "--nb-alpha", "nb_alpha", "Naive Bayes smoothing");
  pipeline_common.flags.add(pipeline, "--lexicon", "lexicon", "valence lexicon TSV");
  pipeline_common.flags.add(pipeline, "--negators", "negators", "negator list");
  pipeline_common.flags.add(pipeline, "--boosters", "boosters", "booster TSV");
  pipeline_common.flags.add(pipeline, "--seed", "seed", "run seed");
  pipeline_common.flags.add(pipeline, "-o,--out", "output", "report directory");

  fs::path report_from, report_out;
  auto* report = app.add_subcommand("report", "re-emit report tables from a report.json");
  report->add_option("--from", report_from, "report.json to read")->required()->check(CLI::ExistingFile);
  report->add_option("-o,--out", report_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (ingest->parsed()) return run_ingest(ingest_args);
    if (stats->parsed()) return run_stats(stats_args);
    if (topics->parsed()) return run_topics(topics_common);
    if (sentiment->parsed()) return run_sentiment(sentiment_common);
    if (pipeline->parsed()) return run_pipeline_cmd(pipeline_common);
    if (report->parsed()) return run_report(report_from, report_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kInvalid;
}
