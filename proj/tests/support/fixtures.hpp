#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reviewminer/corpus_ingest.hpp"
#include "reviewminer/text_prep.hpp"

namespace rmtest {

// Documents sampled from a known LDA generative process.
struct TopicFixture {
  std::vector<std::vector<std::string>> docs;   // cleaned unigram streams
  std::vector<std::vector<double>> phi;          // K x V, true topic-word distributions
  std::vector<std::string> words;                // the V word strings
  std::vector<std::vector<std::string>> top10;   // true top-10 words per topic
};

// K topics over V words; each topic puts most of its mass on its own block of
// V/K words. theta ~ Dirichlet(doc_alpha).
TopicFixture make_topic_fixture(std::uint64_t seed, int topics = 3, int vocab = 30, int docs = 500,
                                int doc_len = 50, double doc_alpha = 0.1);

// Labeled documents for classifier tests. Each class draws from its own
// vocabulary; with probability `noise` a token is drawn from the pooled
// vocabulary of all classes instead.
struct LabeledFixture {
  reviewminer::TokenizedCorpus corpus;  // unigrams, doc_meta labels set
};
LabeledFixture make_labeled_fixture(std::uint64_t seed, int docs_per_class, double noise, int class_vocab = 40,
                                    int doc_len = 20);

// Review-shaped raw corpus with ratings correlated to word choice. Word pools
// are chosen so that their stems are stable.
reviewminer::RawCorpus make_review_fixture(std::uint64_t seed, int reviews = 500);

// Random token streams over a small alphabet ("t0".."t{vocab-1}"), some empty.
std::vector<std::vector<std::string>> make_random_streams(std::uint64_t seed, int docs, int vocab, int max_len);

}  // namespace rmtest
