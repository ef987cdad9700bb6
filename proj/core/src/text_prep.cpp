#include "reviewminer/text_prep.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "reviewminer/errors.hpp"

namespace reviewminer {
namespace {

enum class CharClass { word, apostrophe, other };

struct CodePoint {
  char32_t value;
  CharClass cls;
};

// Decodes one UTF-8 sequence starting at s[i]; invalid bytes decode to
// U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    if (i + k >= s.size() || (byte(i + k) & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (byte(i + k) & 0x3F);
  }
  i += static_cast<std::size_t>(extra) + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Simple case folding for ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic capitals. Other scripts pass through unchanged.
char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return 'i';
    if (c == 0x178) return 0xFF;
    const bool even_upper = (c >= 0x100 && c <= 0x12F) || (c >= 0x132 && c <= 0x137) || (c >= 0x14A && c <= 0x177);
    const bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    if (even_upper && c % 2 == 0) return c + 1;
    if (odd_upper && c % 2 == 1) return c + 1;
    return c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

CharClass classify(char32_t c) {
  if (c < 0x80) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return CharClass::word;
    return c == '\'' ? CharClass::apostrophe : CharClass::other;
  }
  if (c == 0x2019 || c == 0x02BC) return CharClass::apostrophe;
  if (c <= 0xBF) return (c == 0xAA || c == 0xB5 || c == 0xBA) ? CharClass::word : CharClass::other;
  if (c == 0xD7 || c == 0xF7) return CharClass::other;
  // Punctuation, symbols, emoji, variation selectors, private use, specials.
  if ((c >= 0x2000 && c <= 0x2BFF) || (c >= 0x3000 && c <= 0x303F) || (c >= 0xE000 && c <= 0xF8FF) ||
      (c >= 0xFE00 && c <= 0xFE0F) || (c >= 0xFE30 && c <= 0xFE4F) || (c >= 0xFF00 && c <= 0xFF0F) ||
      (c >= 0xFFF0 && c <= 0xFFFF) || (c >= 0x1F000 && c <= 0x1FAFF) || (c >= 0xE0000))
    return CharClass::other;
  return CharClass::word;
}

}  // namespace

NGramConfig::NGramConfig(int order) : order_(order) {
  if (order < 1 || order > 3) throw ValidationError("n-gram order must be 1, 2 or 3 (got " + std::to_string(order) + ")");
}

TokenId Vocabulary::intern(std::string_view token) {
  if (const auto it = ids_.find(token); it != ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  if (const auto it = ids_.find(token); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::size_t TokenizedCorpus::non_empty_docs() const {
  return static_cast<std::size_t>(std::count_if(docs.begin(), docs.end(), [](const auto& d) { return !d.empty(); }));
}

std::size_t TokenizedCorpus::token_count() const {
  return std::accumulate(docs.begin(), docs.end(), std::size_t{0},
                         [](std::size_t acc, const auto& d) { return acc + d.size(); });
}

std::string normalize(std::string_view text) {
  std::vector<CodePoint> cps;
  cps.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const char32_t cp = decode_utf8(text, i);
    cps.push_back({to_lower(cp), classify(cp)});
  }

  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    bool keep = cps[i].cls == CharClass::word;
    if (cps[i].cls == CharClass::apostrophe) {
      keep = i > 0 && i + 1 < cps.size() && cps[i - 1].cls == CharClass::word && cps[i + 1].cls == CharClass::word;
    }
    if (!keep) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    if (cps[i].cls == CharClass::apostrophe) {
      out.push_back('\'');
    } else {
      append_utf8(out, cps[i].value);
    }
  }
  return out;
}

std::vector<std::string> tokenize_words(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < normalized.size()) {
    auto end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) tokens.emplace_back(normalized.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopList& stop) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stop.contains(t)) kept.push_back(t);
  return kept;
}

std::vector<std::string> build_ngrams(std::span<const std::string> tokens, NGramConfig cfg) {
  const auto n = static_cast<std::size_t>(cfg.order());
  std::vector<std::string> grams;
  if (tokens.size() < n) return grams;
  grams.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string g = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      g.push_back('_');
      g += tokens[i + k];
    }
    grams.push_back(std::move(g));
  }
  return grams;
}

std::vector<std::string> clean_tokens(std::string_view text, const StopList& stop) {
  auto tokens = remove_stopwords(tokenize_words(normalize(text)), stop);
  for (auto& t : tokens) t = stem(t);
  return tokens;
}

TokenizedCorpus build_corpus(const RawCorpus& raw, const StopList& stop, NGramConfig cfg, unsigned threads) {
  const std::size_t n = raw.reviews.size();
  if (n == 0) throw ValidationError("cannot build a corpus from zero reviews");

  // Per-document work is independent; interning happens afterwards in
  // document order so ids never depend on the worker count.
  std::vector<std::vector<std::string>> grams(n);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) grams[i] = build_ngrams(clean_tokens(raw.reviews[i].text(), stop), cfg);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) pool.emplace_back(work, begin, std::min(n, begin + chunk));
  }

  TokenizedCorpus corpus;
  corpus.ngram = cfg;
  corpus.docs.resize(n);
  corpus.doc_meta.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& doc = corpus.docs[i];
    doc.reserve(grams[i].size());
    for (const auto& g : grams[i]) doc.push_back(corpus.vocab.intern(g));
    corpus.doc_meta.push_back({raw.reviews[i].id, raw.reviews[i].rating, std::nullopt});
  }
  if (corpus.vocab.size() == 0) {
    throw DataError("every document is empty after cleaning at n-gram order " + std::to_string(cfg.order()) + " (" +
                    std::to_string(n) + " reviews)");
  }
  return corpus;
}

TokenizedCorpus corpus_from_tokens(std::span<const std::vector<std::string>> docs, NGramConfig cfg,
                                   std::span<const DocMeta> meta) {
  if (!meta.empty() && meta.size() != docs.size()) throw ValidationError("document metadata length mismatch");
  TokenizedCorpus corpus;
  corpus.ngram = cfg;
  corpus.docs.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::vector<TokenId> ids;
    for (const auto& g : build_ngrams(docs[i], cfg)) ids.push_back(corpus.vocab.intern(g));
    corpus.docs.push_back(std::move(ids));
    corpus.doc_meta.push_back(meta.empty() ? DocMeta{std::to_string(i), 0, std::nullopt} : meta[i]);
  }
  return corpus;
}

TokenizedCorpus subset(const TokenizedCorpus& corpus, std::span<const std::size_t> indices, bool compact_vocab) {
  TokenizedCorpus out;
  out.ngram = corpus.ngram;
  if (!compact_vocab) out.vocab = corpus.vocab;
  out.docs.reserve(indices.size());
  out.doc_meta.reserve(indices.size());
  for (const auto i : indices) {
    if (i >= corpus.docs.size()) throw ValidationError("subset index out of range");
    if (compact_vocab) {
      std::vector<TokenId> doc;
      doc.reserve(corpus.docs[i].size());
      for (const auto id : corpus.docs[i]) doc.push_back(out.vocab.intern(corpus.vocab.token(id)));
      out.docs.push_back(std::move(doc));
    } else {
      out.docs.push_back(corpus.docs[i]);
    }
    out.doc_meta.push_back(corpus.doc_meta[i]);
  }
  return out;
}

void write_token_dump(const TokenizedCorpus& corpus, std::ostream& out) {
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    nlohmann::json tokens = nlohmann::json::array();
    for (const auto id : corpus.docs[d]) tokens.push_back(corpus.vocab.token(id));
    out << nlohmann::json{{"id", corpus.doc_meta[d].review_id}, {"tokens", std::move(tokens)}}.dump() << '\n';
  }
}

}  // namespace reviewminer
