#include <benchmark/benchmark.h>

#include <map>

#include "fixtures.hpp"
#include "reviewminer/term_stats.hpp"
#include "reviewminer/text_prep.hpp"
#include "reviewminer/topic_model.hpp"

using namespace reviewminer;

namespace {

const rmtest::TopicFixture& topic_fixture() {
  static const auto f = rmtest::make_topic_fixture(2024, 3, 30, 500, 50);
  return f;
}

const RawCorpus& reviews() {
  static const auto r = rmtest::make_review_fixture(7, 2000);
  return r;
}

const StopList& stops() {
  static const auto s = StopList::load(RM_BENCH_DATA_DIR "/stopwords_en.txt", RM_BENCH_DATA_DIR "/domain_extensions.txt");
  return s;
}

}  // namespace

static void BM_GibbsFit(benchmark::State& state) {
  const auto c = corpus_from_tokens(topic_fixture().docs, NGramConfig{1});
  auto cfg = LdaConfig::defaults(static_cast<int>(state.range(0)), 1);
  cfg.iterations = 100;
  for (auto _ : state) benchmark::DoNotOptimize(lda_fit(c, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.token_count()) * cfg.iterations);
}
BENCHMARK(BM_GibbsFit)->Arg(3)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& state) {
  std::map<int, TokenizedCorpus> corpora;
  corpora.emplace(1, corpus_from_tokens(topic_fixture().docs, NGramConfig{1}));
  SweepOptions o;
  o.k_min = 5;
  o.k_max = 8;
  o.iterations = 50;
  o.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep(corpora, o));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_Evaluate(benchmark::State& state) {
  const auto c = corpus_from_tokens(topic_fixture().docs, NGramConfig{1});
  auto cfg = LdaConfig::defaults(10, 1);
  cfg.iterations = 20;
  const auto m = lda_fit(c, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(perplexity(m, c));
    benchmark::DoNotOptimize(coherence(m, c, 10));
  }
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMicrosecond);

static void BM_BuildCorpus(benchmark::State& state) {
  const NGramConfig ngram{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(build_corpus(reviews(), stops(), ngram));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(reviews().reviews.size()));
}
BENCHMARK(BM_BuildCorpus)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_Stem(benchmark::State& state) {
  const std::vector<std::string> words = {"generalizations", "oscillators", "connected", "hopefulness",
                                          "relational", "crashing", "updates", "notifications"};
  for (auto _ : state)
    for (const auto& w : words) benchmark::DoNotOptimize(stem(w));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_Stem);

static void BM_Tfidf(benchmark::State& state) {
  const auto c = build_corpus(reviews(), stops(), NGramConfig{1});
  for (auto _ : state) benchmark::DoNotOptimize(tfidf(c));
}
BENCHMARK(BM_Tfidf)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
