#include <algorithm>
#include <cmath>

#include "reviewminer/errors.hpp"
#include "reviewminer/topic_model.hpp"

namespace reviewminer {
namespace {

void require_matching(const LdaModel& model, const TokenizedCorpus& corpus) {
  if (corpus.docs.size() != model.num_docs)
    throw ValidationError("corpus has " + std::to_string(corpus.docs.size()) + " documents but the model was fit on " +
                          std::to_string(model.num_docs));
  if (corpus.vocab.size() != model.vocab_size)
    throw ValidationError("corpus vocabulary size differs from the model's");
}

// Sorted ids of the documents containing each requested word.
std::vector<std::vector<std::uint32_t>> postings_for(const TokenizedCorpus& corpus, std::span<const TokenId> words) {
  std::vector<std::int32_t> slot(corpus.vocab.size(), -1);
  for (std::size_t i = 0; i < words.size(); ++i) slot[words[i]] = static_cast<std::int32_t>(i);
  std::vector<std::vector<std::uint32_t>> postings(words.size());
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    for (const auto w : corpus.docs[d]) {
      const auto s = slot[w];
      if (s < 0) continue;
      auto& list = postings[static_cast<std::size_t>(s)];
      if (list.empty() || list.back() != d) list.push_back(static_cast<std::uint32_t>(d));
    }
  }
  return postings;
}

std::size_t intersection_size(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

double perplexity(const LdaModel& model, const TokenizedCorpus& corpus) {
  require_matching(model, corpus);
  const std::size_t k = static_cast<std::size_t>(model.num_topics());
  const std::size_t v = model.vocab_size;

  std::vector<double> phi(k * v);
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t w = 0; w < v; ++w) phi[t * v + w] = model.phi(t, w);

  double log_likelihood = 0.0;
  std::size_t n = 0;
  std::vector<double> theta(k);
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    const auto& doc = corpus.docs[d];
    if (doc.empty()) continue;
    for (std::size_t t = 0; t < k; ++t) theta[t] = model.theta(d, t);
    for (const auto w : doc) {
      if (w >= v) throw ValidationError("token id outside the model vocabulary");
      double p = 0.0;
      for (std::size_t t = 0; t < k; ++t) p += theta[t] * phi[t * v + w];
      log_likelihood += std::log(p);
    }
    n += doc.size();
  }
  if (n == 0) throw DataError("perplexity needs at least one token");
  return std::exp(-log_likelihood / static_cast<double>(n));
}

std::vector<TokenId> top_word_ids(const LdaModel& model, const Vocabulary& vocab, std::size_t k, int n) {
  if (n < 1) throw ValidationError("top-n must be at least 1");
  if (vocab.size() != model.vocab_size) throw ValidationError("vocabulary does not match the model");
  const std::size_t v = model.vocab_size;
  std::vector<TokenId> ids(v);
  for (std::size_t w = 0; w < v; ++w) ids[w] = static_cast<TokenId>(w);
  // phi is monotone in the raw count within a topic, so rank by count.
  const auto cmp = [&](TokenId a, TokenId b) {
    const auto ca = model.topic_word(k, a), cb = model.topic_word(k, b);
    if (ca != cb) return ca > cb;
    return vocab.token(a) < vocab.token(b);
  };
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(n), v);
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(), cmp);
  ids.resize(take);
  return ids;
}

TopicSummary top_words(const LdaModel& model, const Vocabulary& vocab, int n) {
  TopicSummary summary;
  for (std::size_t t = 0; t < static_cast<std::size_t>(model.num_topics()); ++t) {
    std::vector<TopicWord> words;
    for (const auto id : top_word_ids(model, vocab, t, n)) words.push_back({vocab.token(id), model.phi(t, id)});
    summary.push_back(std::move(words));
  }
  return summary;
}

double coherence(const LdaModel& model, const TokenizedCorpus& corpus, int top_n) {
  if (top_n < 2) throw ValidationError("coherence needs top-n >= 2");
  require_matching(model, corpus);
  const std::size_t k = static_cast<std::size_t>(model.num_topics());

  double total = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const auto words = top_word_ids(model, corpus.vocab, t, top_n);
    if (words.size() < 2) continue;  // a one-word vocabulary has no pairs
    const auto postings = postings_for(corpus, words);
    double topic_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t hi = 0; hi < words.size(); ++hi) {
      const auto df_hi = postings[hi].size();
      if (df_hi == 0)
        throw DataError("top word '" + corpus.vocab.token(words[hi]) + "' occurs in no document");
      for (std::size_t lo = hi + 1; lo < words.size(); ++lo) {
        const auto co = intersection_size(postings[hi], postings[lo]);
        topic_sum += std::log((static_cast<double>(co) + 1.0) / static_cast<double>(df_hi));
        ++pairs;
      }
    }
    total += topic_sum / static_cast<double>(pairs);
  }
  return total / static_cast<double>(k);
}

}  // namespace reviewminer
