#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reviewminer/text_prep.hpp"

namespace reviewminer {

/// Corpus-level term statistics, indexed by TokenId.
struct TermStats {
  std::vector<std::uint64_t> count_of;  // total occurrences
  std::vector<std::uint64_t> df_of;     // documents containing the term
  std::vector<double> tfidf_total_of;   // sum over documents of TF-IDF(t, d)
};

TermStats word_counts(const TokenizedCorpus& corpus);

/// TF(t,d) = count(t,d)/|d|, IDF(t) = ln(N/df(t)) with N the number of
/// non-empty documents; tfidf_total_of[t] sums TF-IDF over documents. Also
/// fills count_of and df_of. Throws DataError if no document is non-empty.
TermStats tfidf(const TokenizedCorpus& corpus);

enum class RankBy { count, tfidf };

struct RankedTerm {
  std::string token;
  double value = 0.0;
  bool operator==(const RankedTerm&) const = default;
};

/// Highest-valued terms, ties by ascending token. k == 0 throws
/// ValidationError; k beyond the vocabulary returns every term.
std::vector<RankedTerm> top_k(const TermStats& stats, const Vocabulary& vocab, std::size_t k, RankBy by);

/// TSV with header: rank, token, count, tfidf_total.
void write_stats_tsv(const TermStats& stats, const Vocabulary& vocab, std::size_t k, RankBy by,
                     std::ostream& out);

}  // namespace reviewminer
