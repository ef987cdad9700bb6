#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "reviewminer/corpus_ingest.hpp"
#include "reviewminer/sentiment_label.hpp"
#include "reviewminer/text_prep.hpp"

namespace reviewminer {

struct RatingStats {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
};

/// Throws ValidationError for fewer than two ratings.
RatingStats rating_stats(std::span<const int> ratings);
RatingStats rating_stats(const RawCorpus& corpus);

/// positive if rating >= mean + sd, negative if rating <= mean - sd,
/// neutral otherwise.
SentimentLabel auto_label(int rating, const RatingStats& stats);

struct ValenceLexicon {
  std::map<std::string, double, std::less<>> valence_of;  // [-4, 4]
  std::set<std::string, std::less<>> negators;
  std::map<std::string, double, std::less<>> boosters;

  /// Lexicon TSV `token<TAB>valence`; negators one per line; boosters
  /// `token<TAB>increment`. Empty paths are skipped.
  static ValenceLexicon load(const std::filesystem::path& lexicon, const std::filesystem::path& negators = {},
                             const std::filesystem::path& boosters = {});
};

/// Valences of the sentiment-bearing tokens after modifier handling, on the
/// lexicon's [-4, 4] scale. A negator flips the sign of the next
/// sentiment-bearing token; a booster's increment is added to the magnitude
/// of the next one. Adjusted values are clamped to [-4, 4].
std::vector<double> adjusted_valences(std::span<const std::string> tokens, const ValenceLexicon& lex);

/// Mean adjusted valence divided by 4; 0 without lexicon hits.
double polarity_score(std::span<const std::string> tokens, const ValenceLexicon& lex);

/// s / sqrt(s^2 + 15) for s the sum of adjusted valences; 0 without hits.
double compound_score(std::span<const std::string> tokens, const ValenceLexicon& lex);

inline constexpr double kCompoundNormalization = 15.0;
inline constexpr double kDefaultCompoundThreshold = 0.05;

/// negative at or below -1/3, positive at or above 1/3.
SentimentLabel polarity_to_label(double score);

/// negative strictly below -threshold, positive strictly above threshold.
SentimentLabel compound_to_label(double compound, double threshold = kDefaultCompoundThreshold);

/// Normalized, unstemmed tokens of a review (lexicons key on surface forms).
std::vector<std::string> surface_tokens(const Review& review);

struct TrainTestSplit {
  TokenizedCorpus train;
  TokenizedCorpus test;
  std::vector<std::size_t> train_index;  // positions in the source corpus
  std::vector<std::size_t> test_index;
  LabelCounts train_counts{};  // docs carrying each label
  LabelCounts test_counts{};
};

/// Seeded Fisher-Yates shuffle, then the first floor(n * fraction) documents
/// train. Both halves share the source vocabulary. Throws ValidationError if
/// fraction is outside (0, 1) or either side would be empty.
TrainTestSplit split_train_test(const TokenizedCorpus& corpus, double fraction, std::uint64_t seed);

struct NbModel {
  std::array<bool, 3> present{};
  std::array<double, 3> class_log_prior{};
  // Per label, log-likelihood of each feature; features are the corpus tokens
  // seen in training.
  std::array<std::vector<double>, 3> token_log_likelihood;
  std::vector<std::int32_t> feature_of;  // corpus TokenId -> feature index or -1
  double smoothing = 1.0;

  std::size_t num_features() const { return token_log_likelihood[0].size(); }
};

/// Multinomial Naive Bayes over unigram counts. Labels come from
/// doc_meta[i].label, which must be set for every document. Classes missing
/// from training are omitted with a warning.
NbModel nb_fit(const TokenizedCorpus& train, double smoothing = 1.0);

struct NbPrediction {
  SentimentLabel label = SentimentLabel::neutral;
  std::array<double, 3> log_posterior{};  // normalized; -inf for absent classes
};

/// Tokens the model never saw are ignored. Ties go to the earlier label in
/// negative < neutral < positive order.
NbPrediction nb_predict(const NbModel& model, std::span<const TokenId> doc);

struct Evaluation {
  double accuracy = 0.0;
  std::array<std::array<std::size_t, 3>, 3> confusion{};  // [actual][predicted]
  std::size_t total() const;
};

Evaluation evaluate(std::span<const SentimentLabel> predicted, std::span<const SentimentLabel> actual);

struct SentimentSplit {
  TokenizedCorpus negative;
  TokenizedCorpus neutral;
  TokenizedCorpus positive;

  const TokenizedCorpus& get(SentimentLabel l) const;
};

/// Partitions documents by label, preserving order. Each part gets a compact
/// vocabulary over its own documents.
SentimentSplit split_by_sentiment(const TokenizedCorpus& corpus, std::span<const SentimentLabel> labels);

LabelCounts count_labels(std::span<const SentimentLabel> labels);

}  // namespace reviewminer
