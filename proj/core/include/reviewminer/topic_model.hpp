#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reviewminer/text_prep.hpp"

namespace reviewminer {

struct LdaConfig {
  int num_topics = 10;
  double alpha = 5.0;  // symmetric document-topic prior
  double beta = 0.01;  // symmetric topic-word prior
  int iterations = 1000;
  std::uint64_t seed = 42;
  int coherence_top_n = 10;

  static constexpr double kDefaultBeta = 0.01;
  static constexpr int kDefaultIterations = 1000;

  /// alpha = 50/K, beta = 0.01, 1000 iterations.
  static LdaConfig defaults(int num_topics, std::uint64_t seed = 42);

  void validate() const;
  bool operator==(const LdaConfig&) const = default;
};

/// Collapsed-Gibbs sampler state. Matrices are row-major:
/// topic_word_counts is K x V, doc_topic_counts is D x K.
struct LdaModel {
  LdaConfig config;
  std::size_t vocab_size = 0;
  std::size_t num_docs = 0;
  std::vector<std::int32_t> topic_word_counts;
  std::vector<std::int32_t> doc_topic_counts;
  std::vector<std::int64_t> topic_totals;
  std::vector<std::vector<std::int32_t>> assignments;  // per doc, per token

  int num_topics() const { return config.num_topics; }

  std::int32_t topic_word(std::size_t k, std::size_t w) const { return topic_word_counts[k * vocab_size + w]; }
  std::int32_t doc_topic(std::size_t d, std::size_t k) const {
    return doc_topic_counts[d * static_cast<std::size_t>(config.num_topics) + k];
  }
  std::int64_t doc_length(std::size_t d) const;

  /// (count + beta) / (total + V*beta)
  double phi(std::size_t k, std::size_t w) const;
  /// (count + alpha) / (len + K*alpha)
  double theta(std::size_t d, std::size_t k) const;

  /// Zero-count model of the given shape (every phi/theta row uniform).
  static LdaModel empty(const LdaConfig& cfg, std::size_t num_docs, std::size_t vocab_size);

  /// Checks count bookkeeping; throws std::logic_error on mismatch. With a
  /// corpus, also checks assignments against document contents.
  void check_invariants(const TokenizedCorpus* corpus = nullptr) const;

  bool operator==(const LdaModel&) const = default;
};

/// Seeded collapsed Gibbs sampling for cfg.iterations full sweeps. Output is
/// a pure function of (corpus, cfg). Throws ValidationError for K < 2 or bad
/// priors, DataError when no document is non-empty.
LdaModel lda_fit(const TokenizedCorpus& corpus, const LdaConfig& cfg);

/// exp(-(1/N) * sum log P(w|d)) over every token of the non-empty documents,
/// with P(w|d) = sum_k theta[d][k] * phi[k][w]. `corpus` must be the corpus the
/// model was fit on (same document count and vocabulary).
double perplexity(const LdaModel& model, const TokenizedCorpus& corpus);

/// UMass coherence averaged over every topic and every pair of its top_n
/// words: log((D(wi, wj) + 1) / D(wj)) with wj the higher-ranked word.
double coherence(const LdaModel& model, const TokenizedCorpus& corpus, int top_n);

/// 0.5 * (1 - p) + 0.5 * c
constexpr double combined_score(double perplexity, double coherence) {
  return 0.5 * (1.0 - perplexity) + 0.5 * coherence;
}

struct TopicWord {
  std::string token;
  double probability = 0.0;
  bool operator==(const TopicWord&) const = default;
};

/// Per topic, the top-n words by phi, descending, ties by ascending token.
using TopicSummary = std::vector<std::vector<TopicWord>>;

TopicSummary top_words(const LdaModel& model, const Vocabulary& vocab, int n);

/// Word ids of the top-n words of topic k, same ordering as top_words.
std::vector<TokenId> top_word_ids(const LdaModel& model, const Vocabulary& vocab, std::size_t k, int n);

struct SweepEntry {
  int order = 1;
  int num_topics = 0;
  double perplexity = 0.0;
  double coherence = 0.0;
  double score = 0.0;
  bool operator==(const SweepEntry&) const = default;
};

struct SweepOptions {
  int k_min = 5;
  int k_max = 15;
  std::optional<double> alpha;  // default 50/K per grid point
  double beta = LdaConfig::kDefaultBeta;
  int iterations = LdaConfig::kDefaultIterations;
  std::uint64_t seed = 42;
  int top_n = 10;
  unsigned threads = 1;

  LdaConfig config_for(int order, int num_topics) const;
  void validate() const;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // grid order: order ascending, then K ascending
  std::size_t best = 0;
  LdaModel best_model;
};

/// Index of the highest score; ties go to smaller K, then lower order. NaN
/// scores never win over finite ones. Throws ValidationError on empty input.
std::size_t select_best(std::span<const SweepEntry> entries);

/// Fits one model per (order, K) pair and scores it. Each fit is seeded with
/// derive_seed(seed, "lda", {order, K}); fits run on `threads` workers but the
/// result does not depend on the worker count. A failing fit aborts the sweep
/// with a DataError naming the configuration.
SweepResult sweep(const std::map<int, TokenizedCorpus>& corpora, const SweepOptions& options);

/// Versioned JSON dump: counts, config, seed and vocabulary.
nlohmann::json model_to_json(const LdaModel& model, const Vocabulary& vocab);
/// Inverse of model_to_json; validates shape and count invariants.
LdaModel model_from_json(const nlohmann::json& j, Vocabulary* vocab_out = nullptr);

inline constexpr const char* kModelSchema = "reviewminer.lda/1";

}  // namespace reviewminer
