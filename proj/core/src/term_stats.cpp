#include "reviewminer/term_stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "reviewminer/errors.hpp"

namespace reviewminer {

TermStats word_counts(const TokenizedCorpus& corpus) {
  const std::size_t v = corpus.vocab.size();
  TermStats stats;
  stats.count_of.assign(v, 0);
  stats.df_of.assign(v, 0);
  stats.tfidf_total_of.assign(v, 0.0);

  // last_doc[t] marks the most recent document that already counted t.
  std::vector<std::size_t> last_doc(v, static_cast<std::size_t>(-1));
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    for (const auto t : corpus.docs[d]) {
      ++stats.count_of[t];
      if (last_doc[t] != d) {
        last_doc[t] = d;
        ++stats.df_of[t];
      }
    }
  }
  return stats;
}

TermStats tfidf(const TokenizedCorpus& corpus) {
  auto stats = word_counts(corpus);
  const std::size_t n = corpus.non_empty_docs();
  if (n == 0) throw DataError("TF-IDF needs at least one non-empty document");

  std::vector<double> idf(stats.df_of.size(), 0.0);
  for (std::size_t t = 0; t < idf.size(); ++t) {
    if (stats.df_of[t] > 0) idf[t] = std::log(static_cast<double>(n) / static_cast<double>(stats.df_of[t]));
  }

  std::vector<std::uint32_t> in_doc(idf.size(), 0);
  std::vector<TokenId> distinct;
  for (const auto& doc : corpus.docs) {
    if (doc.empty()) continue;
    distinct.clear();
    for (const auto t : doc) {
      if (in_doc[t]++ == 0) distinct.push_back(t);
    }
    const double len = static_cast<double>(doc.size());
    for (const auto t : distinct) {
      stats.tfidf_total_of[t] += (static_cast<double>(in_doc[t]) / len) * idf[t];
      in_doc[t] = 0;
    }
  }
  return stats;
}

std::vector<RankedTerm> top_k(const TermStats& stats, const Vocabulary& vocab, std::size_t k, RankBy by) {
  if (k == 0) throw ValidationError("top_k requires k >= 1");
  const std::size_t v = vocab.size();
  const auto value = [&](std::size_t t) {
    return by == RankBy::count ? static_cast<double>(stats.count_of.at(t)) : stats.tfidf_total_of.at(t);
  };
  std::vector<TokenId> ids(v);
  for (std::size_t t = 0; t < v; ++t) ids[t] = static_cast<TokenId>(t);
  const auto cmp = [&](TokenId a, TokenId b) {
    const double va = value(a), vb = value(b);
    if (va != vb) return va > vb;
    return vocab.token(a) < vocab.token(b);
  };
  k = std::min(k, v);
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(), cmp);

  std::vector<RankedTerm> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({vocab.token(ids[i]), value(ids[i])});
  return out;
}

void write_stats_tsv(const TermStats& stats, const Vocabulary& vocab, std::size_t k, RankBy by, std::ostream& out) {
  out << "rank\ttoken\tcount\ttfidf_total\n";
  const auto ranked = top_k(stats, vocab, k, by);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto id = *vocab.find(ranked[i].token);
    out << (i + 1) << '\t' << ranked[i].token << '\t' << stats.count_of[id] << '\t' << stats.tfidf_total_of[id]
        << '\n';
  }
}

}  // namespace reviewminer
