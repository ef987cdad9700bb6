#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reviewminer/sentiment.hpp"
#include "reviewminer/term_stats.hpp"
#include "reviewminer/topic_model.hpp"

namespace reviewminer {

inline constexpr const char* kReportSchema = "reviewminer.report/1";

struct OrderSummary {
  int order = 1;
  std::size_t documents = 0;
  std::size_t non_empty = 0;
  std::size_t vocab_size = 0;
  std::size_t tokens = 0;
};

struct CorpusSummary {
  std::size_t ingested_rows = 0;
  std::size_t malformed = 0;
  std::size_t kept = 0;
  std::size_t removed_non_english = 0;
  double rating_mean = 0.0;
  double rating_sd = 0.0;
  std::vector<OrderSummary> orders;
};

struct TopTermRow {
  std::string token;
  std::uint64_t count = 0;
  double tfidf_total = 0.0;
};

struct TopTerms {
  std::vector<TopTermRow> by_count;
  std::vector<TopTermRow> by_tfidf;
};

// One sweep table and the topics of its chosen model.
struct SweepSection {
  std::string subset;  // global, negative, positive, neutral
  std::size_t documents = 0;
  bool excluded_from_interpretation = false;
  std::optional<std::string> skipped_reason;
  std::vector<SweepEntry> entries;
  std::optional<std::size_t> best;
  TopicSummary topics;
};

struct MethodEvaluation {
  std::string method;
  Evaluation evaluation;
};

struct SentimentSection {
  std::string requested_method;
  std::string applied_method;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  LabelCounts train_counts{};
  LabelCounts test_counts{};
  std::vector<MethodEvaluation> evaluations;
  LabelCounts auto_counts{};
  LabelCounts label_counts{};
  std::size_t auto_label_disagreements = 0;
};

struct LabelRow {
  std::string id;
  int rating = 0;
  SentimentLabel auto_label = SentimentLabel::neutral;
  SentimentLabel method_label = SentimentLabel::neutral;
};

struct ReportConfigEcho {
  std::string input;
  std::string format;
  std::vector<int> orders;
  int k_min = 5;
  int k_max = 15;
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  int top_n = 10;
  std::string sentiment_method;
  double compound_threshold = 0.05;
  double split = 0.8;
  double nb_alpha = 1.0;
  double language_threshold = 0.15;
  std::uint64_t seed = 42;
};

struct Report {
  std::string schema = kReportSchema;
  std::string status = "ok";  // "ok" or "failed"
  std::optional<std::string> failed_stage;
  std::optional<std::string> failure;
  ReportConfigEcho config;
  CorpusSummary corpus;
  TopTerms top_terms;
  std::vector<SweepSection> sweeps;
  SentimentSection sentiment;
  std::vector<LabelRow> labels;
  std::vector<std::string> warnings;
};

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string dump_report(const Report& report);

/// Writes report.json, top_terms.tsv, sweep_{global,neg,pos,neu}.tsv,
/// topics_{global,neg,pos,neu}.tsv and labels.csv into `dir`, creating it if
/// needed. A failed report additionally gets a FAILED marker file.
void emit_report(const Report& report, const std::filesystem::path& dir);

// Shared table writers (also used by the CLI subcommands).
void write_sweep_tsv(const SweepSection& section, std::ostream& out);
void write_topics_tsv(const TopicSummary& topics, std::ostream& out);
void write_labels_csv(const std::vector<LabelRow>& labels, std::ostream& out);

}  // namespace reviewminer
