#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "reviewminer/diagnostics.hpp"
#include "reviewminer/errors.hpp"
#include "reviewminer/rng.hpp"
#include "reviewminer/topic_model.hpp"

namespace reviewminer {

LdaConfig LdaConfig::defaults(int num_topics, std::uint64_t seed) {
  LdaConfig cfg;
  cfg.num_topics = num_topics;
  cfg.alpha = num_topics > 0 ? 50.0 / num_topics : 1.0;
  cfg.beta = kDefaultBeta;
  cfg.iterations = kDefaultIterations;
  cfg.seed = seed;
  return cfg;
}

void LdaConfig::validate() const {
  if (num_topics < 2) throw ValidationError("LDA needs at least 2 topics (got " + std::to_string(num_topics) + ")");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be a positive finite number");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be a positive finite number");
  if (iterations < 1) throw ValidationError("iterations must be positive");
  if (coherence_top_n < 2) throw ValidationError("coherence top-n must be at least 2");
}

std::int64_t LdaModel::doc_length(std::size_t d) const {
  const auto k = static_cast<std::size_t>(config.num_topics);
  std::int64_t len = 0;
  for (std::size_t t = 0; t < k; ++t) len += doc_topic_counts[d * k + t];
  return len;
}

double LdaModel::phi(std::size_t k, std::size_t w) const {
  const double v = static_cast<double>(vocab_size);
  return (topic_word(k, w) + config.beta) / (static_cast<double>(topic_totals[k]) + v * config.beta);
}

double LdaModel::theta(std::size_t d, std::size_t k) const {
  const double kk = config.num_topics;
  return (doc_topic(d, k) + config.alpha) / (static_cast<double>(doc_length(d)) + kk * config.alpha);
}

LdaModel LdaModel::empty(const LdaConfig& cfg, std::size_t num_docs, std::size_t vocab_size) {
  if (cfg.num_topics < 1) throw ValidationError("model needs at least one topic");
  const auto k = static_cast<std::size_t>(cfg.num_topics);
  LdaModel m;
  m.config = cfg;
  m.vocab_size = vocab_size;
  m.num_docs = num_docs;
  m.topic_word_counts.assign(k * vocab_size, 0);
  m.doc_topic_counts.assign(num_docs * k, 0);
  m.topic_totals.assign(k, 0);
  m.assignments.assign(num_docs, {});
  return m;
}

void LdaModel::check_invariants(const TokenizedCorpus* corpus) const {
  const auto k = static_cast<std::size_t>(config.num_topics);
  const auto fail = [](const std::string& what) { throw std::logic_error("LDA invariant violated: " + what); };
  if (topic_word_counts.size() != k * vocab_size) fail("topic-word matrix shape");
  if (doc_topic_counts.size() != num_docs * k) fail("doc-topic matrix shape");
  if (topic_totals.size() != k) fail("topic totals length");
  if (assignments.size() != num_docs) fail("assignment rows");

  std::vector<std::int64_t> totals(k, 0);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t w = 0; w < vocab_size; ++w) {
      const auto c = topic_word(t, w);
      if (c < 0) fail("negative topic-word count");
      totals[t] += c;
    }
    if (totals[t] != topic_totals[t]) fail("topic total of topic " + std::to_string(t));
  }

  std::vector<std::int32_t> recount(k);
  for (std::size_t d = 0; d < num_docs; ++d) {
    std::fill(recount.begin(), recount.end(), 0);
    for (const auto z : assignments[d]) {
      if (z < 0 || static_cast<std::size_t>(z) >= k) fail("assignment out of range");
      ++recount[static_cast<std::size_t>(z)];
    }
    for (std::size_t t = 0; t < k; ++t)
      if (doc_topic(d, t) != recount[t]) fail("doc-topic count of doc " + std::to_string(d));
    if (corpus && corpus->docs[d].size() != assignments[d].size()) fail("assignment length of doc " + std::to_string(d));
  }

  if (corpus) {
    std::vector<std::int32_t> tw(k * vocab_size, 0);
    for (std::size_t d = 0; d < num_docs; ++d)
      for (std::size_t i = 0; i < assignments[d].size(); ++i)
        ++tw[static_cast<std::size_t>(assignments[d][i]) * vocab_size + corpus->docs[d][i]];
    if (tw != topic_word_counts) fail("topic-word counts disagree with assignments");
  }
}

LdaModel lda_fit(const TokenizedCorpus& corpus, const LdaConfig& cfg) {
  cfg.validate();
  const std::size_t non_empty = corpus.non_empty_docs();
  if (non_empty == 0) throw DataError("cannot fit LDA on a corpus without non-empty documents");
  if (non_empty < static_cast<std::size_t>(cfg.num_topics)) {
    warn("fitting " + std::to_string(cfg.num_topics) + " topics to only " + std::to_string(non_empty) +
         " non-empty documents");
  }

  const std::size_t k = static_cast<std::size_t>(cfg.num_topics);
  const std::size_t v = corpus.vocab.size();
  LdaModel model = LdaModel::empty(cfg, corpus.docs.size(), v);
  Rng rng(cfg.seed);

  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    const auto& doc = corpus.docs[d];
    auto& z = model.assignments[d];
    z.resize(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (doc[i] >= v) throw ValidationError("token id outside the vocabulary");
      const auto topic = static_cast<std::size_t>(rng.below(k));
      z[i] = static_cast<std::int32_t>(topic);
      ++model.doc_topic_counts[d * k + topic];
      ++model.topic_word_counts[topic * v + doc[i]];
      ++model.topic_totals[topic];
    }
  }

  const double v_beta = static_cast<double>(v) * cfg.beta;
  std::vector<double> cumulative(k);
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
      const auto& doc = corpus.docs[d];
      auto& z = model.assignments[d];
      std::int32_t* doc_topic = model.doc_topic_counts.data() + d * k;
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::size_t w = doc[i];
        auto topic = static_cast<std::size_t>(z[i]);
        --doc_topic[topic];
        --model.topic_word_counts[topic * v + w];
        --model.topic_totals[topic];

        double total = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
          total += (doc_topic[t] + cfg.alpha) * (model.topic_word_counts[t * v + w] + cfg.beta) /
                   (static_cast<double>(model.topic_totals[t]) + v_beta);
          cumulative[t] = total;
        }
        const double u = rng.uniform() * total;
        topic = 0;
        while (topic + 1 < k && cumulative[topic] <= u) ++topic;

        z[i] = static_cast<std::int32_t>(topic);
        ++doc_topic[topic];
        ++model.topic_word_counts[topic * v + w];
        ++model.topic_totals[topic];
      }
    }
#ifndef NDEBUG
    model.check_invariants(&corpus);
#endif
  }
  return model;
}

nlohmann::json model_to_json(const LdaModel& model, const Vocabulary& vocab) {
  if (vocab.size() != model.vocab_size) throw ValidationError("vocabulary does not match the model");
  const auto& c = model.config;
  return {
      {"schema", kModelSchema},
      {"config",
       {{"num_topics", c.num_topics},
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"iterations", c.iterations},
        {"seed", c.seed},
        {"coherence_top_n", c.coherence_top_n}}},
      {"vocab_size", model.vocab_size},
      {"num_docs", model.num_docs},
      {"vocabulary", vocab.tokens()},
      {"topic_word_counts", model.topic_word_counts},
      {"doc_topic_counts", model.doc_topic_counts},
      {"topic_totals", model.topic_totals},
      {"assignments", model.assignments},
  };
}

LdaModel model_from_json(const nlohmann::json& j, Vocabulary* vocab_out) {
  try {
    if (j.at("schema").get<std::string>() != kModelSchema)
      throw ValidationError("unsupported model schema '" + j.at("schema").get<std::string>() + "'");
    LdaModel m;
    const auto& c = j.at("config");
    m.config.num_topics = c.at("num_topics").get<int>();
    m.config.alpha = c.at("alpha").get<double>();
    m.config.beta = c.at("beta").get<double>();
    m.config.iterations = c.at("iterations").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.coherence_top_n = c.at("coherence_top_n").get<int>();
    m.vocab_size = j.at("vocab_size").get<std::size_t>();
    m.num_docs = j.at("num_docs").get<std::size_t>();
    j.at("topic_word_counts").get_to(m.topic_word_counts);
    j.at("doc_topic_counts").get_to(m.doc_topic_counts);
    j.at("topic_totals").get_to(m.topic_totals);
    j.at("assignments").get_to(m.assignments);
    m.check_invariants();
    if (vocab_out) {
      *vocab_out = Vocabulary{};
      for (const auto& t : j.at("vocabulary")) vocab_out->intern(t.get<std::string>());
      if (vocab_out->size() != m.vocab_size) throw ValidationError("vocabulary size does not match the model");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ValidationError*>(&e)) throw;
    throw ValidationError(e.what());
  }
}

}  // namespace reviewminer
