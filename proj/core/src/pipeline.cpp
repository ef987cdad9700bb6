#include "reviewminer/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "reviewminer/diagnostics.hpp"
#include "reviewminer/errors.hpp"
#include "reviewminer/rng.hpp"
#include "reviewminer/sentiment.hpp"
#include "reviewminer/stop_list.hpp"
#include "reviewminer/term_stats.hpp"
#include "reviewminer/text_prep.hpp"
#include "reviewminer/topic_model.hpp"

namespace reviewminer {
namespace {

namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty())
    throw ValidationError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) + "'");
  return out;
}

std::vector<int> parse_orders(std::string_view value) {
  value = trim(value);
  if (value == "all") return {1, 2, 3};
  std::vector<int> orders;
  while (!value.empty()) {
    const auto comma = value.find(',');
    orders.push_back(parse_number<int>("orders", value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return orders;
}

void require_file(const fs::path& p, std::string_view what) {
  if (p.empty()) throw ValidationError(std::string(what) + " path is not set");
  if (!fs::is_regular_file(p)) throw ValidationError(std::string(what) + " file '" + p.string() + "' does not exist");
}

bool needs_lexicon(SentimentMethod m) {
  return m == SentimentMethod::polarity || m == SentimentMethod::compound || m == SentimentMethod::all;
}

ReportConfigEcho echo(const PipelineConfig& cfg) {
  ReportConfigEcho e;
  e.input = cfg.input.string();
  e.format = std::string(to_string(cfg.format));
  e.orders = cfg.orders;
  e.k_min = cfg.k_min;
  e.k_max = cfg.k_max;
  e.alpha = cfg.alpha;
  e.beta = cfg.beta;
  e.iterations = cfg.iterations;
  e.top_n = cfg.top_n;
  e.sentiment_method = std::string(to_string(cfg.sentiment_method));
  e.compound_threshold = cfg.compound_threshold;
  e.split = cfg.split;
  e.nb_alpha = cfg.nb_alpha;
  e.language_threshold = cfg.language_threshold;
  e.seed = cfg.seed;
  return e;
}

SweepOptions sweep_options(const PipelineConfig& cfg, std::string_view subset) {
  SweepOptions o;
  o.k_min = cfg.k_min;
  o.k_max = cfg.k_max;
  o.alpha = cfg.alpha;
  o.beta = cfg.beta;
  o.iterations = cfg.iterations;
  o.top_n = cfg.top_n;
  o.threads = cfg.threads;
  o.seed = derive_seed(cfg.seed, "sweep/" + std::string(subset));
  return o;
}

std::vector<TopTermRow> term_rows(const TermStats& stats, const Vocabulary& vocab, std::size_t k, RankBy by) {
  std::vector<TopTermRow> rows;
  for (const auto& t : top_k(stats, vocab, k, by)) {
    const auto id = *vocab.find(t.token);
    rows.push_back({t.token, stats.count_of[id], stats.tfidf_total_of[id]});
  }
  return rows;
}

}  // namespace

std::string_view to_string(SentimentMethod m) {
  switch (m) {
    case SentimentMethod::automatic: return "auto";
    case SentimentMethod::polarity: return "polarity";
    case SentimentMethod::compound: return "compound";
    case SentimentMethod::nb: return "nb";
    case SentimentMethod::all: return "all";
  }
  return "all";
}

std::optional<SentimentMethod> parse_method(std::string_view s) {
  if (s == "auto") return SentimentMethod::automatic;
  if (s == "polarity") return SentimentMethod::polarity;
  if (s == "compound") return SentimentMethod::compound;
  if (s == "nb") return SentimentMethod::nb;
  if (s == "all") return SentimentMethod::all;
  return std::nullopt;
}

void PipelineConfig::validate() const {
  require_file(input, "input");
  require_file(stopwords, "stop-word");
  if (!extensions.empty()) require_file(extensions, "stop-word extension");
  if (needs_lexicon(sentiment_method)) {
    require_file(lexicon, "valence lexicon");
    if (!negators.empty()) require_file(negators, "negator");
    if (!boosters.empty()) require_file(boosters, "booster");
  }
  if (orders.empty()) throw ValidationError("no n-gram orders configured");
  std::set<int> seen;
  for (const int o : orders) {
    (void)NGramConfig{o};
    if (!seen.insert(o).second) throw ValidationError("n-gram order " + std::to_string(o) + " listed twice");
  }
  if (k_min < 2) throw ValidationError("topics-min must be at least 2");
  if (k_max < k_min) throw ValidationError("topic range is empty");
  if (alpha && !(*alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  if (iterations < 1) throw ValidationError("iterations must be positive");
  if (top_n < 2) throw ValidationError("top-n must be at least 2");
  if (top_terms < 1) throw ValidationError("top-terms must be at least 1");
  if (!(compound_threshold >= 0.0 && compound_threshold < 1.0))
    throw ValidationError("compound threshold must lie in [0, 1)");
  if (!(split > 0.0 && split < 1.0)) throw ValidationError("split must lie strictly between 0 and 1");
  if (!(nb_alpha > 0.0)) throw ValidationError("nb-alpha must be positive");
  if (!(language_threshold >= 0.0 && language_threshold <= 1.0))
    throw ValidationError("language threshold must lie in [0, 1]");
  if (threads < 1) throw ValidationError("threads must be at least 1");
}

void PipelineConfig::fill_default_data_paths(const fs::path& data_dir) {
  if (stopwords.empty()) stopwords = data_dir / "stopwords_en.txt";
  if (extensions.empty()) extensions = data_dir / "domain_extensions.txt";
  if (lexicon.empty()) lexicon = data_dir / "valence_lexicon.tsv";
  if (negators.empty()) negators = data_dir / "negators.txt";
  if (boosters.empty()) boosters = data_dir / "boosters.tsv";
}

void apply_config_entry(PipelineConfig& cfg, std::string_view raw_key, std::string_view raw_value,
                        const fs::path& base_dir) {
  std::string key(trim(raw_key));
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string_view value = trim(raw_value);
  const auto path = [&] {
    fs::path p{std::string(value)};
    return (p.is_relative() && !base_dir.empty()) ? base_dir / p : p;
  };

  if (key == "input") {
    cfg.input = path();
  } else if (key == "format") {
    const auto f = parse_format(value);
    if (!f) throw ValidationError("config key 'format': expected csv or jsonl");
    cfg.format = *f;
  } else if (key == "stopwords") {
    cfg.stopwords = path();
  } else if (key == "extensions") {
    cfg.extensions = path();
  } else if (key == "lexicon") {
    cfg.lexicon = path();
  } else if (key == "negators") {
    cfg.negators = path();
  } else if (key == "boosters") {
    cfg.boosters = path();
  } else if (key == "orders" || key == "ngram") {
    cfg.orders = parse_orders(value);
  } else if (key == "topics_min") {
    cfg.k_min = parse_number<int>(key, value);
  } else if (key == "topics_max") {
    cfg.k_max = parse_number<int>(key, value);
  } else if (key == "alpha") {
    if (value == "auto") {
      cfg.alpha.reset();
    } else {
      cfg.alpha = parse_number<double>(key, value);
    }
  } else if (key == "beta") {
    cfg.beta = parse_number<double>(key, value);
  } else if (key == "iters" || key == "iterations") {
    cfg.iterations = parse_number<int>(key, value);
  } else if (key == "top_n") {
    cfg.top_n = parse_number<int>(key, value);
  } else if (key == "top_terms") {
    cfg.top_terms = parse_number<std::size_t>(key, value);
  } else if (key == "method" || key == "sentiment_method") {
    const auto m = parse_method(value);
    if (!m) throw ValidationError("config key 'method': expected auto, polarity, compound, nb or all");
    cfg.sentiment_method = *m;
  } else if (key == "threshold" || key == "compound_threshold") {
    cfg.compound_threshold = parse_number<double>(key, value);
  } else if (key == "split") {
    cfg.split = parse_number<double>(key, value);
  } else if (key == "nb_alpha") {
    cfg.nb_alpha = parse_number<double>(key, value);
  } else if (key == "language_threshold") {
    cfg.language_threshold = parse_number<double>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "output" || key == "out") {
    cfg.output = path();
  } else if (key == "threads") {
    cfg.threads = parse_number<unsigned>(key, value);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

void apply_config_file(PipelineConfig& cfg, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  const auto base = path.parent_path();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      apply_config_entry(cfg, view.substr(0, eq), view.substr(eq + 1), base);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

StageError::StageError(std::string stage, const std::string& cause, Report partial, bool invalid_input)
    : std::runtime_error("stage '" + stage + "' failed: " + cause),
      stage_(std::move(stage)),
      invalid_input_(invalid_input),
      partial_(std::move(partial)) {
  partial_.status = "failed";
  partial_.failed_stage = stage_;
  partial_.failure = cause;
}

LoadedCorpus load_corpus(const PipelineConfig& cfg) {
  LoadedCorpus out;
  out.stop = StopList::load(cfg.stopwords, cfg.extensions);
  out.ingested = ingest(cfg.input, cfg.format);
  const auto& errors = out.ingested.errors;
  if (!errors.empty())
    warn(std::to_string(errors.size()) + " malformed input rows skipped (first at line " +
         std::to_string(errors.front().line) + ": " + errors.front().message + ")");
  auto filtered = filter_language(out.ingested.corpus, out.stop, cfg.language_threshold);
  out.kept = std::move(filtered.kept);
  out.removed_non_english = filtered.removed_count;
  return out;
}

SweepSection sweep_section(const std::map<int, TokenizedCorpus>& corpora, const PipelineConfig& cfg,
                           std::string_view subset, std::size_t documents, LdaModel* best_model) {
  SweepSection section;
  section.subset = std::string(subset);
  section.documents = documents;
  section.excluded_from_interpretation = subset == "neutral";
  auto result = sweep(corpora, sweep_options(cfg, subset));
  section.entries = result.entries;
  section.best = result.best;
  const int order = result.entries[result.best].order;
  section.topics = top_words(result.best_model, corpora.at(order).vocab, cfg.top_n);
  if (best_model) *best_model = std::move(result.best_model);
  return section;
}

SentimentOutcome classify_reviews(const RawCorpus& raw, const TokenizedCorpus& unigrams, const RatingStats& stats,
                                  const PipelineConfig& cfg) {
  const std::size_t n = raw.reviews.size();
  if (unigrams.docs.size() != n || unigrams.ngram.order() != 1)
    throw ValidationError("classify_reviews needs the unigram corpus of the same reviews");

  SentimentOutcome out;
  auto& sent = out.section;
  out.auto_labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.auto_labels[i] = auto_label(raw.reviews[i].rating, stats);
  sent.requested_method = std::string(to_string(cfg.sentiment_method));
  sent.auto_counts = count_labels(out.auto_labels);
  out.labels = out.auto_labels;

  if (cfg.sentiment_method == SentimentMethod::automatic) {
    sent.applied_method = "auto";
  } else {
    TokenizedCorpus labeled = unigrams;
    for (std::size_t i = 0; i < n; ++i) labeled.doc_meta[i].label = out.auto_labels[i];

    ValenceLexicon lex;
    if (needs_lexicon(cfg.sentiment_method)) lex = ValenceLexicon::load(cfg.lexicon, cfg.negators, cfg.boosters);
    const auto split = split_train_test(labeled, cfg.split, derive_seed(cfg.seed, "split"));
    sent.train_size = split.train_index.size();
    sent.test_size = split.test_index.size();
    sent.train_counts = split.train_counts;
    sent.test_counts = split.test_counts;

    std::vector<SentimentLabel> actual;
    for (const auto i : split.test_index) actual.push_back(out.auto_labels[i]);

    std::optional<NbModel> nb;
    const auto label_with = [&](SentimentMethod m, std::size_t i) {
      if (m == SentimentMethod::nb) return nb_predict(*nb, unigrams.docs[i]).label;
      const auto tokens = surface_tokens(raw.reviews[i]);
      return m == SentimentMethod::polarity ? polarity_to_label(polarity_score(tokens, lex))
                                            : compound_to_label(compound_score(tokens, lex), cfg.compound_threshold);
    };

    std::vector<SentimentMethod> candidates;
    if (cfg.sentiment_method == SentimentMethod::all) {
      candidates = {SentimentMethod::polarity, SentimentMethod::compound, SentimentMethod::nb};
    } else {
      candidates = {cfg.sentiment_method};
    }
    SentimentMethod chosen = candidates.front();
    double chosen_accuracy = -1.0;
    for (const auto m : candidates) {
      if (m == SentimentMethod::nb) nb = nb_fit(split.train, cfg.nb_alpha);
      std::vector<SentimentLabel> predicted;
      for (const auto i : split.test_index) predicted.push_back(label_with(m, i));
      const auto ev = evaluate(predicted, actual);
      sent.evaluations.push_back({std::string(to_string(m)), ev});
      // Later candidates win ties, so NB is preferred on equal accuracy.
      if (ev.accuracy >= chosen_accuracy) {
        chosen = m;
        chosen_accuracy = ev.accuracy;
      }
    }
    sent.applied_method = std::string(to_string(chosen));
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = label_with(chosen, i);
  }

  sent.label_counts = count_labels(out.labels);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.labels[i] != out.auto_labels[i]) ++sent.auto_label_disagreements;
    out.rows.push_back({raw.reviews[i].id, raw.reviews[i].rating, out.auto_labels[i], out.labels[i]});
  }
  return out;
}

Report run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();

  Report report;
  report.config = echo(cfg);
  std::vector<std::string> warnings;
  ScopedWarningSink sink([&](std::string_view w) { warnings.emplace_back(w); });
  // Worker threads may warn in any order; the report lists them sorted.
  const auto finish_warnings = [&] {
    std::sort(warnings.begin(), warnings.end());
    warnings.erase(std::unique(warnings.begin(), warnings.end()), warnings.end());
    report.warnings = warnings;
  };

  std::string stage = "ingest";
  try {
    auto loaded = load_corpus(cfg);
    report.corpus.ingested_rows = loaded.ingested.row_count;
    report.corpus.malformed = loaded.ingested.errors.size();

    stage = "filter";
    const RawCorpus& raw = loaded.kept;
    report.corpus.kept = raw.reviews.size();
    report.corpus.removed_non_english = loaded.removed_non_english;
    if (raw.reviews.empty()) throw DataError("no reviews left after language filtering");

    stage = "rating_stats";
    const auto stats = rating_stats(raw);
    report.corpus.rating_mean = stats.mean;
    report.corpus.rating_sd = stats.sd;
    if (stats.sd == 0.0) warn("rating standard deviation is 0; every review is auto-labeled neutral");

    stage = "tokenize";
    std::set<int> orders(cfg.orders.begin(), cfg.orders.end());
    orders.insert(1);
    std::map<int, TokenizedCorpus> corpora;
    for (const int o : orders) {
      corpora.emplace(o, build_corpus(raw, loaded.stop, NGramConfig{o}, cfg.threads));
      const auto& c = corpora.at(o);
      report.corpus.orders.push_back({o, c.num_docs(), c.non_empty_docs(), c.vocab.size(), c.token_count()});
    }
    std::map<int, TokenizedCorpus> sweep_corpora;
    for (const int o : cfg.orders) {
      if (corpora.at(o).non_empty_docs() == 0) {
        warn("no non-empty documents at n-gram order " + std::to_string(o) + "; order skipped");
        continue;
      }
      sweep_corpora.emplace(o, corpora.at(o));
    }
    if (sweep_corpora.empty()) throw DataError("no n-gram order has a non-empty document");

    stage = "term_stats";
    const auto& unigrams = corpora.at(1);
    const auto term_stats = tfidf(unigrams);
    report.top_terms.by_count = term_rows(term_stats, unigrams.vocab, cfg.top_terms, RankBy::count);
    report.top_terms.by_tfidf = term_rows(term_stats, unigrams.vocab, cfg.top_terms, RankBy::tfidf);

    stage = "global_sweep";
    report.sweeps.push_back(sweep_section(sweep_corpora, cfg, "global", raw.reviews.size()));

    stage = "sentiment";
    auto outcome = classify_reviews(raw, unigrams, stats, cfg);
    report.sentiment = outcome.section;
    report.labels = std::move(outcome.rows);

    stage = "sentiment_sweeps";
    std::map<int, SentimentSplit> parts;
    for (const auto& [order, corpus] : sweep_corpora) parts.emplace(order, split_by_sentiment(corpus, outcome.labels));
    for (const auto label : {SentimentLabel::negative, SentimentLabel::positive, SentimentLabel::neutral}) {
      const std::string subset(to_string(label));
      const std::size_t docs = report.sentiment.label_counts[label_index(label)];
      std::map<int, TokenizedCorpus> subset_corpora;
      for (const auto& [order, part] : parts) {
        if (part.get(label).non_empty_docs() > 0) {
          subset_corpora.emplace(order, part.get(label));
        } else if (docs > 0) {
          warn(subset + " subset has no non-empty documents at n-gram order " + std::to_string(order) +
               "; order skipped");
        }
      }

      if (subset_corpora.empty()) {
        SweepSection skipped;
        skipped.subset = subset;
        skipped.documents = docs;
        skipped.excluded_from_interpretation = label == SentimentLabel::neutral;
        skipped.skipped_reason = docs == 0 ? "no documents" : "no non-empty documents";
        report.sweeps.push_back(std::move(skipped));
        continue;
      }
      report.sweeps.push_back(sweep_section(subset_corpora, cfg, subset, docs));
    }
  } catch (const ValidationError& e) {
    finish_warnings();
    throw StageError(stage, e.what(), report, true);
  } catch (const std::exception& e) {
    finish_warnings();
    throw StageError(stage, e.what(), report);
  }

  finish_warnings();
  return report;
}

}  // namespace reviewminer
