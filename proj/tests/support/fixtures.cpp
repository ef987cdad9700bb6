#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "reviewminer/rng.hpp"

namespace rmtest {
namespace {

using reviewminer::Rng;

double normal(Rng& rng) {
  // Box-Muller; one value per call is plenty here.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Marsaglia-Tsang, with the shape < 1 boost.
double gamma(Rng& rng, double shape) {
  if (shape < 1.0) return gamma(rng, shape + 1.0) * std::pow(1.0 - rng.uniform(), 1.0 / shape);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

std::vector<double> dirichlet(Rng& rng, std::size_t n, double a) {
  std::vector<double> out(n);
  double sum = 0.0;
  for (auto& x : out) sum += (x = gamma(rng, a));
  for (auto& x : out) x /= sum;
  return out;
}

std::size_t draw(Rng& rng, const std::vector<double>& p) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

std::string pad2(int i) { return (i < 10 ? "0" : "") + std::to_string(i); }

}  // namespace

TopicFixture make_topic_fixture(std::uint64_t seed, int topics, int vocab, int docs, int doc_len, double doc_alpha) {
  Rng rng(seed);
  TopicFixture f;
  for (int w = 0; w < vocab; ++w) f.words.push_back("w" + pad2(w));
  const int block = vocab / topics;
  for (int k = 0; k < topics; ++k) {
    std::vector<double> row(static_cast<std::size_t>(vocab));
    double sum = 0.0;
    for (int w = 0; w < vocab; ++w) {
      const bool own = w / block == k;
      // Own words decay gently so the in-topic ranking is well defined.
      const double weight = own ? 1.0 / (1.0 + 0.15 * (w % block)) : 0.01;
      row[static_cast<std::size_t>(w)] = weight;
      sum += weight;
    }
    for (auto& x : row) x /= sum;
    f.phi.push_back(row);

    std::vector<int> ids(static_cast<std::size_t>(vocab));
    std::iota(ids.begin(), ids.end(), 0);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return row[a] > row[b]; });
    std::vector<std::string> top;
    for (int i = 0; i < 10 && i < vocab; ++i) top.push_back(f.words[static_cast<std::size_t>(ids[i])]);
    f.top10.push_back(top);
  }
  for (int d = 0; d < docs; ++d) {
    const auto theta = dirichlet(rng, static_cast<std::size_t>(topics), doc_alpha);
    std::vector<std::string> doc;
    for (int i = 0; i < doc_len; ++i) {
      const auto k = draw(rng, theta);
      doc.push_back(f.words[draw(rng, f.phi[k])]);
    }
    f.docs.push_back(std::move(doc));
  }
  return f;
}

LabeledFixture make_labeled_fixture(std::uint64_t seed, int docs_per_class, double noise, int class_vocab,
                                    int doc_len) {
  Rng rng(seed);
  std::vector<std::vector<std::string>> docs;
  std::vector<reviewminer::DocMeta> meta;
  const auto pooled = static_cast<std::uint64_t>(3 * class_vocab);
  for (int i = 0; i < docs_per_class; ++i) {
    for (int c = 0; c < 3; ++c) {
      std::vector<std::string> doc;
      for (int t = 0; t < doc_len; ++t) {
        std::uint64_t w;
        if (rng.uniform() < noise) {
          w = rng.below(pooled);
        } else {
          w = static_cast<std::uint64_t>(c * class_vocab) + rng.below(static_cast<std::uint64_t>(class_vocab));
        }
        doc.push_back("c" + std::to_string(w / static_cast<std::uint64_t>(class_vocab)) + "w" +
                      std::to_string(w % static_cast<std::uint64_t>(class_vocab)));
      }
      docs.push_back(std::move(doc));
      meta.push_back({"d" + std::to_string(docs.size() - 1), c == 0 ? 1 : (c == 1 ? 3 : 5),
                      reviewminer::kAllLabels[static_cast<std::size_t>(c)]});
    }
  }
  return {reviewminer::corpus_from_tokens(docs, reviewminer::NGramConfig{1}, meta)};
}

reviewminer::RawCorpus make_review_fixture(std::uint64_t seed, int reviews) {
  static const std::vector<std::string> negative = {
      "crash",   "error",  "slow",   "broken",  "login", "fail",    "bug",  "freeze", "lost",
      "refund",  "hate",   "worst",  "waste",   "stuck", "password", "lock", "delay",  "charge"};
  static const std::vector<std::string> positive = {
      "great",   "love",  "fast",   "simple",  "best",   "smooth", "quick", "nice",  "deposit",
      "transfer", "clean", "secure", "helpful", "design", "budget", "card",  "cheque", "perfect"};
  static const std::vector<std::string> neutral = {
      "account", "balance", "update", "screen", "phone", "version", "option", "menu", "branch",
      "statement", "notification", "setting", "message", "support", "time", "month", "money", "service"};
  static const std::vector<std::string> filler = {"the", "it", "is", "and", "my", "to", "this", "i", "a", "of"};

  Rng rng(seed);
  reviewminer::RawCorpus corpus;
  corpus.source_meta["generator"] = "review_fixture";
  const auto pick = [&](const std::vector<std::string>& pool) { return pool[rng.below(pool.size())]; };
  for (int i = 0; i < reviews; ++i) {
    reviewminer::Review r;
    r.id = "r" + std::to_string(i);
    r.app = i % 2 == 0 ? "alpha" : "beta";
    r.platform = i % 3 == 0 ? reviewminer::Platform::google : reviewminer::Platform::ios;
    const int mood = static_cast<int>(rng.below(3));  // 0 neg, 1 neu, 2 pos
    r.rating = mood == 0 ? 1 + static_cast<int>(rng.below(2)) : (mood == 1 ? 3 : 4 + static_cast<int>(rng.below(2)));
    const auto& own = mood == 0 ? negative : (mood == 1 ? neutral : positive);
    std::string body;
    const int len = 6 + static_cast<int>(rng.below(10));
    for (int t = 0; t < len; ++t) {
      const double u = rng.uniform();
      const auto& w = u < 0.55 ? pick(own) : (u < 0.75 ? pick(neutral) : pick(filler));
      if (!body.empty()) body += ' ';
      body += w;
    }
    r.body = body;
    if (i % 4 == 0) r.title = pick(own);
    if (i % 5 == 0) r.language = "en";
    if (i % 7 == 0) r.date = "2023-0" + std::to_string(1 + i % 9) + "-1" + std::to_string(i % 10);
    corpus.reviews.push_back(std::move(r));
  }
  return corpus;
}

std::vector<std::vector<std::string>> make_random_streams(std::uint64_t seed, int docs, int vocab, int max_len) {
  Rng rng(seed);
  std::vector<std::vector<std::string>> out(static_cast<std::size_t>(docs));
  for (auto& d : out) {
    const auto len = rng.below(static_cast<std::uint64_t>(max_len) + 1);
    for (std::uint64_t i = 0; i < len; ++i) d.push_back("t" + std::to_string(rng.below(static_cast<std::uint64_t>(vocab))));
  }
  return out;
}

}  // namespace rmtest
