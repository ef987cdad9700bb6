#include "reviewminer/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "reviewminer/errors.hpp"
#include "reviewminer/rng.hpp"

namespace reviewminer {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, const std::filesystem::path& path, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError(path.string() + ":" + std::to_string(line) + ": '" + std::string(s) + "' is not a number");
  return v;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Reads `token<TAB>number` lines; '#' comments and blank lines skipped.
std::map<std::string, double, std::less<>> read_weight_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::map<std::string, double, std::less<>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected token<TAB>value");
    const auto token = lowercase(trim(view.substr(0, tab)));
    if (token.empty()) throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": empty token");
    out[token] = parse_double(view.substr(tab + 1), path, lineno);
  }
  return out;
}

}  // namespace

std::optional<SentimentLabel> parse_label(std::string_view s) {
  if (s == "negative" || s == "neg") return SentimentLabel::negative;
  if (s == "neutral" || s == "neu") return SentimentLabel::neutral;
  if (s == "positive" || s == "pos") return SentimentLabel::positive;
  return std::nullopt;
}

RatingStats rating_stats(std::span<const int> ratings) {
  if (ratings.size() < 2) throw ValidationError("rating statistics need at least two reviews");
  const double n = static_cast<double>(ratings.size());
  const double mean = std::accumulate(ratings.begin(), ratings.end(), 0.0) / n;
  double ss = 0.0;
  for (const int r : ratings) ss += (r - mean) * (r - mean);
  return {mean, std::sqrt(ss / n)};
}

RatingStats rating_stats(const RawCorpus& corpus) {
  std::vector<int> ratings;
  ratings.reserve(corpus.reviews.size());
  for (const auto& r : corpus.reviews) ratings.push_back(r.rating);
  return rating_stats(ratings);
}

SentimentLabel auto_label(int rating, const RatingStats& stats) {
  // sd == 0 collapses both inclusive bounds onto the mean; a constant-rating
  // corpus is labeled neutral throughout.
  if (stats.sd == 0.0) return SentimentLabel::neutral;
  if (rating >= stats.mean + stats.sd) return SentimentLabel::positive;
  if (rating <= stats.mean - stats.sd) return SentimentLabel::negative;
  return SentimentLabel::neutral;
}

ValenceLexicon ValenceLexicon::load(const std::filesystem::path& lexicon, const std::filesystem::path& negators,
                                    const std::filesystem::path& boosters) {
  ValenceLexicon lex;
  lex.valence_of = read_weight_file(lexicon);
  for (const auto& [token, v] : lex.valence_of) {
    if (v < -4.0 || v > 4.0)
      throw ValidationError(lexicon.string() + ": valence of '" + token + "' outside [-4, 4]");
  }
  if (!negators.empty()) lex.negators = StopList::read_word_file(negators);
  if (!boosters.empty()) lex.boosters = read_weight_file(boosters);
  return lex;
}

std::vector<double> adjusted_valences(std::span<const std::string> tokens, const ValenceLexicon& lex) {
  std::vector<double> out;
  bool negate = false;
  double boost = 0.0;
  for (const auto& t : tokens) {
    if (const auto it = lex.valence_of.find(t); it != lex.valence_of.end()) {
      double v = it->second;
      if (v > 0.0) {
        v += boost;
      } else if (v < 0.0) {
        v -= boost;
      }
      if (negate) v = -v;
      out.push_back(std::clamp(v, -4.0, 4.0));
      negate = false;
      boost = 0.0;
    } else if (lex.negators.contains(t)) {
      negate = !negate;
    } else if (const auto b = lex.boosters.find(t); b != lex.boosters.end()) {
      boost += b->second;
    }
  }
  return out;
}

double polarity_score(std::span<const std::string> tokens, const ValenceLexicon& lex) {
  const auto v = adjusted_valences(tokens, lex);
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()) / 4.0;
}

double compound_score(std::span<const std::string> tokens, const ValenceLexicon& lex) {
  const auto v = adjusted_valences(tokens, lex);
  if (v.empty()) return 0.0;
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  return s / std::sqrt(s * s + kCompoundNormalization);
}

SentimentLabel polarity_to_label(double score) {
  if (score <= -1.0 / 3.0) return SentimentLabel::negative;
  if (score >= 1.0 / 3.0) return SentimentLabel::positive;
  return SentimentLabel::neutral;
}

SentimentLabel compound_to_label(double compound, double threshold) {
  if (compound < -threshold) return SentimentLabel::negative;
  if (compound > threshold) return SentimentLabel::positive;
  return SentimentLabel::neutral;
}

std::vector<std::string> surface_tokens(const Review& review) { return tokenize_words(normalize(review.text())); }

TrainTestSplit split_train_test(const TokenizedCorpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ValidationError("split fraction must lie strictly between 0 and 1");
  const std::size_t n = corpus.docs.size();
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
  if (n_train == 0 || n_train == n)
    throw ValidationError("a " + std::to_string(fraction) + " split of " + std::to_string(n) +
                          " documents leaves one side empty");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  TrainTestSplit split;
  split.train_index.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test_index.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  split.train = subset(corpus, split.train_index, false);
  split.test = subset(corpus, split.test_index, false);
  for (const auto& m : split.train.doc_meta)
    if (m.label) ++split.train_counts[label_index(*m.label)];
  for (const auto& m : split.test.doc_meta)
    if (m.label) ++split.test_counts[label_index(*m.label)];
  return split;
}

std::size_t Evaluation::total() const {
  std::size_t n = 0;
  for (const auto& row : confusion)
    for (const auto c : row) n += c;
  return n;
}

Evaluation evaluate(std::span<const SentimentLabel> predicted, std::span<const SentimentLabel> actual) {
  if (predicted.size() != actual.size())
    throw ValidationError("evaluate: " + std::to_string(predicted.size()) + " predictions for " +
                          std::to_string(actual.size()) + " labels");
  Evaluation e;
  for (std::size_t i = 0; i < actual.size(); ++i) ++e.confusion[label_index(actual[i])][label_index(predicted[i])];
  std::size_t correct = 0;
  for (std::size_t i = 0; i < 3; ++i) correct += e.confusion[i][i];
  e.accuracy = actual.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(actual.size());
  return e;
}

const TokenizedCorpus& SentimentSplit::get(SentimentLabel l) const {
  switch (l) {
    case SentimentLabel::negative: return negative;
    case SentimentLabel::neutral: return neutral;
    case SentimentLabel::positive: return positive;
  }
  return neutral;
}

SentimentSplit split_by_sentiment(const TokenizedCorpus& corpus, std::span<const SentimentLabel> labels) {
  if (labels.size() != corpus.docs.size()) throw ValidationError("label count does not match document count");
  std::array<std::vector<std::size_t>, 3> idx;
  for (std::size_t i = 0; i < labels.size(); ++i) idx[label_index(labels[i])].push_back(i);
  SentimentSplit out;
  out.negative = subset(corpus, idx[0], true);
  out.neutral = subset(corpus, idx[1], true);
  out.positive = subset(corpus, idx[2], true);
  for (std::size_t l = 0; l < 3; ++l) {
    auto& part = l == 0 ? out.negative : (l == 1 ? out.neutral : out.positive);
    for (auto& m : part.doc_meta) m.label = kAllLabels[l];
  }
  return out;
}

LabelCounts count_labels(std::span<const SentimentLabel> labels) {
  LabelCounts c{};
  for (const auto l : labels) ++c[label_index(l)];
  return c;
}

}  // namespace reviewminer
