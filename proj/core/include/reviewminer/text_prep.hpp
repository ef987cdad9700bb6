#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reviewminer/corpus_ingest.hpp"
#include "reviewminer/sentiment_label.hpp"
#include "reviewminer/stop_list.hpp"

namespace reviewminer {

using TokenId = std::uint32_t;

class NGramConfig {
 public:
  /// Throws ValidationError unless order is 1, 2 or 3.
  explicit NGramConfig(int order);
  int order() const { return order_; }
  bool operator==(const NGramConfig&) const = default;

 private:
  int order_;
};

/// Dense, bijective token interning. Ids are handed out in first-seen order.
class Vocabulary {
 public:
  TokenId intern(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  std::span<const std::string> tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> ids_;
  std::vector<std::string> tokens_;
};

struct DocMeta {
  std::string review_id;
  int rating = 0;
  std::optional<SentimentLabel> label;

  bool operator==(const DocMeta&) const = default;
};

/// Documents as token-id sequences. Empty documents are kept in place so
/// that doc i always corresponds to review i; model fitting skips them.
struct TokenizedCorpus {
  std::vector<std::vector<TokenId>> docs;
  Vocabulary vocab;
  NGramConfig ngram{1};
  std::vector<DocMeta> doc_meta;

  std::size_t num_docs() const { return docs.size(); }
  std::size_t non_empty_docs() const;
  std::size_t token_count() const;

  bool operator==(const TokenizedCorpus&) const = default;
};

/// Lowercases, maps every character other than a letter, a digit or a
/// word-internal apostrophe to a space, then collapses whitespace. U+2019 is
/// treated as an apostrophe.
std::string normalize(std::string_view text);

/// Splits normalized text on spaces.
std::vector<std::string> tokenize_words(std::string_view normalized);

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopList& stop);

/// Porter (1980) suffix-stripping stemmer, reference-implementation variant.
std::string stem(std::string_view token);

/// Contiguous windows of `cfg.order()` tokens joined with '_'.
std::vector<std::string> build_ngrams(std::span<const std::string> tokens, NGramConfig cfg);

/// normalize, tokenize, drop stop words, stem. The unigram stream that
/// n-grams are built from.
std::vector<std::string> clean_tokens(std::string_view text, const StopList& stop);

/// Full preprocessing of every review (title + body). Vocabulary ids follow
/// first occurrence in document order regardless of `threads`. Throws
/// DataError when every document ends up empty.
TokenizedCorpus build_corpus(const RawCorpus& raw, const StopList& stop, NGramConfig cfg,
                             unsigned threads = 1);

/// Builds a corpus from already-cleaned unigram streams (one per document).
/// `meta` may be empty, in which case ids "0", "1", ... are assigned.
TokenizedCorpus corpus_from_tokens(std::span<const std::vector<std::string>> docs, NGramConfig cfg,
                                   std::span<const DocMeta> meta = {});

/// Selects documents by index. With `compact_vocab`, the vocabulary is
/// rebuilt over the selected documents only (first-occurrence order);
/// otherwise it is shared with the source corpus.
TokenizedCorpus subset(const TokenizedCorpus& corpus, std::span<const std::size_t> indices,
                       bool compact_vocab);

/// Debug dump: JSONL of {id, tokens:[...]}.
void write_token_dump(const TokenizedCorpus& corpus, std::ostream& out);

}  // namespace reviewminer
