#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reviewminer/corpus_ingest.hpp"
#include "reviewminer/report.hpp"
#include "reviewminer/stop_list.hpp"

namespace reviewminer {

enum class SentimentMethod { automatic, polarity, compound, nb, all };

std::string_view to_string(SentimentMethod m);
std::optional<SentimentMethod> parse_method(std::string_view s);

struct PipelineConfig {
  std::filesystem::path input;
  InputFormat format = InputFormat::csv;
  std::filesystem::path stopwords;
  std::filesystem::path extensions;
  std::filesystem::path lexicon;
  std::filesystem::path negators;
  std::filesystem::path boosters;
  std::vector<int> orders{1, 2, 3};
  int k_min = 5;
  int k_max = 15;
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  int top_n = 10;
  std::size_t top_terms = 20;
  SentimentMethod sentiment_method = SentimentMethod::all;
  double compound_threshold = 0.05;
  double split = 0.8;
  double nb_alpha = 1.0;
  double language_threshold = 0.15;
  std::uint64_t seed = 42;
  std::filesystem::path output;
  unsigned threads = 1;

  /// Throws ValidationError naming the first problem found.
  void validate() const;

  /// Points every unset data path at the files shipped in `data_dir`.
  void fill_default_data_paths(const std::filesystem::path& data_dir);
};

/// Applies a declarative `key = value` file on top of `cfg`. Lines starting
/// with '#' and blank lines are ignored; unknown keys and malformed values
/// throw ValidationError. Relative paths resolve against the file's directory.
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);
void apply_config_entry(PipelineConfig& cfg, std::string_view key, std::string_view value,
                        const std::filesystem::path& base_dir = {});

/// Raised when a pipeline stage fails; carries whatever was produced before
/// the failure, with status "failed".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause, Report partial, bool invalid_input = false);
  const std::string& stage() const { return stage_; }
  const Report& partial() const { return partial_; }
  /// True when the cause was a ValidationError (bad input rather than a
  /// processing failure).
  bool invalid_input() const { return invalid_input_; }

 private:
  std::string stage_;
  bool invalid_input_;
  Report partial_;
};

// Stages shared by run_pipeline and the individual CLI subcommands.

struct LoadedCorpus {
  StopList stop;
  IngestResult ingested;  // everything read from disk, including row errors
  RawCorpus kept;         // after language filtering
  std::size_t removed_non_english = 0;
};

/// Ingests cfg.input and applies the language filter. Warns about malformed
/// rows.
LoadedCorpus load_corpus(const PipelineConfig& cfg);

/// Sweeps cfg's K range over `corpora`, seeded from (cfg.seed, "sweep/<subset>"),
/// and summarizes the chosen model's topics.
SweepSection sweep_section(const std::map<int, TokenizedCorpus>& corpora, const PipelineConfig& cfg,
                           std::string_view subset, std::size_t documents, LdaModel* best_model = nullptr);

struct SentimentOutcome {
  SentimentSection section;
  std::vector<SentimentLabel> auto_labels;
  std::vector<SentimentLabel> labels;  // from the applied method
  std::vector<LabelRow> rows;
};

/// Auto-labels every review, then (unless the method is auto) evaluates the
/// candidate methods on a seeded train/test split and labels every review with
/// the most accurate one. `unigrams` must be the order-1 corpus of `raw`.
SentimentOutcome classify_reviews(const RawCorpus& raw, const TokenizedCorpus& unigrams, const RatingStats& stats,
                                  const PipelineConfig& cfg);

/// ingest, filter, corpora for each order, term statistics, global sweep,
/// auto-labels, classifier evaluation, labeling, per-sentiment sweeps.
Report run_pipeline(const PipelineConfig& cfg);

}  // namespace reviewminer
