#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reviewminer/diagnostics.hpp"
#include "reviewminer/errors.hpp"
#include "reviewminer/topic_model.hpp"

using namespace reviewminer;
namespace oracle = rmtest::oracle;

namespace {

TokenizedCorpus corpus_of(const std::vector<std::vector<std::string>>& docs, int order = 1) {
  return corpus_from_tokens(docs, NGramConfig{order});
}

LdaConfig small_config(int k, std::uint64_t seed = 9, int iterations = 60) {
  auto cfg = LdaConfig::defaults(k, seed);
  cfg.alpha = 0.5;
  cfg.iterations = iterations;
  return cfg;
}

void check_distributions(const LdaModel& m) {
  const auto k = static_cast<std::size_t>(m.num_topics());
  for (std::size_t t = 0; t < k; ++t) {
    double s = 0.0;
    for (std::size_t w = 0; w < m.vocab_size; ++w) s += m.phi(t, w);
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
  for (std::size_t d = 0; d < m.num_docs; ++d) {
    double s = 0.0;
    for (std::size_t t = 0; t < k; ++t) s += m.theta(d, t);
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
}

}  // namespace

TEST_CASE("config defaults and validation") {
  const auto cfg = LdaConfig::defaults(10);
  CHECK(cfg.alpha == doctest::Approx(5.0));
  CHECK(cfg.beta == 0.01);
  CHECK(cfg.iterations == 1000);
  CHECK(cfg.coherence_top_n == 10);
  CHECK_THROWS_AS(LdaConfig::defaults(1).validate(), ValidationError);
  auto bad = cfg;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("two disjoint words separate into two topics") {
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 40; ++i) docs.push_back(std::vector<std::string>(8, i % 2 ? "x" : "y"));
  const auto c = corpus_of(docs);
  const auto m = lda_fit(c, small_config(2, 3, 100));
  m.check_invariants(&c);
  const auto top = top_words(m, c.vocab, 1);
  REQUIRE(top.size() == 2);
  CHECK(top[0][0].token != top[1][0].token);
}

TEST_CASE("degenerate one-document one-word corpus") {
  ScopedWarningSink quiet([](std::string_view) {});
  const auto c = corpus_of({{"solo"}});
  const auto m = lda_fit(c, small_config(2));
  m.check_invariants(&c);
  CHECK(m.assignments[0].size() == 1);
  CHECK((m.assignments[0][0] == 0 || m.assignments[0][0] == 1));
  check_distributions(m);
}

TEST_CASE("fit errors") {
  CHECK_THROWS_AS(lda_fit(corpus_of({{"a"}}), small_config(1)), ValidationError);
  CHECK_THROWS_AS(lda_fit(corpus_of({{}, {}}), small_config(2)), DataError);
  std::vector<std::string> seen;
  ScopedWarningSink sink([&](std::string_view w) { seen.emplace_back(w); });
  (void)lda_fit(corpus_of({{"a", "b"}}), small_config(3));
  CHECK(seen.size() == 1);
}

TEST_CASE("count invariants and distributions after a fit") {
  const auto f = rmtest::make_topic_fixture(5, 3, 30, 60, 20);
  const auto c = corpus_of(f.docs);
  const auto m = lda_fit(c, small_config(4));
  CHECK_NOTHROW(m.check_invariants(&c));
  check_distributions(m);

  auto broken = m;
  broken.topic_totals[0] += 1;
  CHECK_THROWS_AS(broken.check_invariants(), std::logic_error);
}

TEST_CASE("fits are deterministic given the seed") {
  const auto f = rmtest::make_topic_fixture(6, 3, 30, 50, 20);
  const auto c = corpus_of(f.docs);
  const auto a = lda_fit(c, small_config(3, 77));
  const auto b = lda_fit(c, small_config(3, 77));
  CHECK(a == b);
  CHECK(perplexity(a, c) == perplexity(b, c));
  CHECK(coherence(a, c, 10) == coherence(b, c, 10));
  const auto other = lda_fit(c, small_config(3, 78));
  CHECK(other.assignments != a.assignments);
}

TEST_CASE("perplexity closed forms") {
  const auto c = corpus_of({{"a", "b", "c", "d"}, {"d", "d"}});
  CHECK(perplexity(LdaModel::empty(LdaConfig::defaults(3), 2, 4), c) == doctest::Approx(4.0).epsilon(1e-12));
  const auto one = corpus_of({{"z", "z"}, {"z"}});
  CHECK(perplexity(LdaModel::empty(LdaConfig::defaults(2), 2, 1), one) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(perplexity(LdaModel::empty(LdaConfig::defaults(2), 3, 1), one), ValidationError);
}

TEST_CASE("perplexity and coherence match the naive oracles") {
  for (const int order : {1, 2}) {
    const auto f = rmtest::make_topic_fixture(8, 3, 30, 80, 15);
    auto docs = f.docs;
    docs.push_back({});  // empty documents are skipped
    const auto c = corpus_of(docs, order);
    const auto m = lda_fit(c, small_config(5, 21, 40));
    CHECK(std::abs(perplexity(m, c) - oracle::perplexity(m, c)) <= 1e-9);
    for (const int n : {2, 5, 10}) CHECK(std::abs(coherence(m, c, n) - oracle::coherence(m, c, n)) <= 1e-12);
  }
}

TEST_CASE("coherence closed forms") {
  auto cfg = LdaConfig::defaults(2);
  cfg.num_topics = 1;  // a single hand-built topic

  const std::size_t d = 7;
  std::vector<std::vector<std::string>> both(d, {"a", "b"});
  const auto cb = corpus_of(both);
  CHECK(coherence(LdaModel::empty(cfg, d, 2), cb, 2) == doctest::Approx(std::log((d + 1.0) / d)).epsilon(1e-12));

  std::vector<std::vector<std::string>> apart(5, {"a"});
  for (int i = 0; i < 3; ++i) apart.push_back({"b"});
  const auto ca = corpus_of(apart);
  CHECK(coherence(LdaModel::empty(cfg, 8, 2), ca, 2) == doctest::Approx(std::log(1.0 / 5.0)).epsilon(1e-12));

  CHECK_THROWS_AS(coherence(LdaModel::empty(cfg, 8, 2), ca, 1), ValidationError);
}

TEST_CASE("combined score") {
  CHECK(combined_score(-23.903, 0.703) == doctest::Approx(12.803).epsilon(1e-12));
  CHECK(combined_score(-21.000, 0.779) == doctest::Approx(11.3895).epsilon(1e-12));
  CHECK(combined_score(-34.593, 0.464) == doctest::Approx(18.0285).epsilon(1e-12));
  CHECK(combined_score(1.0, 1.0) == 0.5);
  static_assert(combined_score(1.0, 1.0) == 0.5);
}

TEST_CASE("top words") {
  auto cfg = LdaConfig::defaults(2);
  const auto c = corpus_of({{"c", "a", "b"}});
  const auto flat = top_words(LdaModel::empty(cfg, 1, 3), c.vocab, 10);
  REQUIRE(flat.size() == 2);
  REQUIRE(flat[0].size() == 3);  // n > V gives every term
  CHECK(flat[0][0].token == "a");
  CHECK(flat[0][1].token == "b");
  CHECK(flat[0][2].token == "c");

  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 30; ++i) docs.push_back(std::vector<std::string>(6, i % 2 ? "left" : "right"));
  const auto two = corpus_of(docs);
  const auto m = lda_fit(two, small_config(2, 4, 100));
  const auto one = top_words(m, two.vocab, 1);
  CHECK(one[0].size() == 1);
  CHECK(one[1].size() == 1);
  CHECK(one[0][0].token != one[1][0].token);

  const auto f = rmtest::make_topic_fixture(12, 3, 30, 40, 20);
  const auto fc = corpus_of(f.docs);
  const auto fm = lda_fit(fc, small_config(3));
  for (const auto& topic : top_words(fm, fc.vocab, 10)) {
    CHECK(topic.size() == 10);
    for (std::size_t i = 1; i < topic.size(); ++i) CHECK(topic[i - 1].probability >= topic[i].probability);
  }
  CHECK_THROWS_AS(top_words(fm, fc.vocab, 0), ValidationError);
}

TEST_CASE("select_best tie rules") {
  std::vector<SweepEntry> e = {{1, 6, 2.0, 0.5, 0.25}, {2, 5, 2.0, 0.5, 0.25}, {1, 5, 2.0, 0.5, 0.25}};
  CHECK(select_best(e) == 2);  // smaller K, then lower order
  e.push_back({3, 9, 1.0, 1.0, std::numeric_limits<double>::quiet_NaN()});
  CHECK(select_best(e) == 2);
  e.push_back({3, 15, 1.0, 1.0, 0.3});
  CHECK(select_best(e) == 4);
  CHECK_THROWS_AS(select_best(std::vector<SweepEntry>{}), ValidationError);
}

TEST_CASE("sweep on a small grid") {
  const auto f = rmtest::make_topic_fixture(13, 3, 30, 60, 20);
  std::map<int, TokenizedCorpus> corpora;
  corpora.emplace(1, corpus_of(f.docs));
  SweepOptions o;
  o.k_min = 5;
  o.k_max = 6;
  o.iterations = 30;
  o.seed = 99;
  const auto r = sweep(corpora, o);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].num_topics == 5);
  CHECK(r.entries[1].num_topics == 6);
  CHECK(r.best == select_best(r.entries));
  for (const auto& e : r.entries) CHECK(e.score == combined_score(e.perplexity, e.coherence));

  const auto& best = r.entries[r.best];
  const auto refit = lda_fit(corpora.at(1), o.config_for(best.order, best.num_topics));
  CHECK(refit == r.best_model);
  CHECK(refit.config.alpha == doctest::Approx(50.0 / best.num_topics));
}

TEST_CASE("sweep output does not depend on the worker count") {
  const auto f = rmtest::make_topic_fixture(14, 3, 30, 50, 15);
  std::map<int, TokenizedCorpus> corpora;
  for (int n = 1; n <= 3; ++n) corpora.emplace(n, corpus_of(f.docs, n));
  SweepOptions o;
  o.k_min = 2;
  o.k_max = 5;
  o.iterations = 20;
  o.alpha = 0.3;
  const auto serial = sweep(corpora, o);
  o.threads = 4;
  const auto parallel = sweep(corpora, o);
  CHECK(serial.entries == parallel.entries);
  CHECK(serial.best == parallel.best);
  CHECK(serial.best_model == parallel.best_model);
  CHECK(serial.entries.size() == 12);
}

TEST_CASE("a failing fit aborts the sweep and names the configuration") {
  std::map<int, TokenizedCorpus> corpora;
  corpora.emplace(1, corpus_of({{"a", "b"}}));
  corpora.emplace(3, corpus_of({{"a", "b"}}, 3));  // no non-empty document
  SweepOptions o;
  o.k_min = 2;
  o.k_max = 2;
  o.iterations = 5;
  ScopedWarningSink quiet([](std::string_view) {});
  try {
    (void)sweep(corpora, o);
    FAIL("expected a failure");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("n-gram order 3, K=2") != std::string::npos);
  }
  o.k_max = 1;
  CHECK_THROWS_AS(sweep(corpora, o), ValidationError);
}

TEST_CASE("model JSON round trip") {
  const auto f = rmtest::make_topic_fixture(15, 3, 30, 20, 10);
  const auto c = corpus_of(f.docs);
  const auto m = lda_fit(c, small_config(3));
  const auto j = model_to_json(m, c.vocab);
  Vocabulary vocab;
  const auto back = model_from_json(nlohmann::json::parse(j.dump()), &vocab);
  CHECK(back == m);
  CHECK(vocab == c.vocab);

  auto bad = j;
  bad["topic_totals"][0] = 999999;
  CHECK_THROWS_AS(model_from_json(bad), ValidationError);
  bad = j;
  bad["schema"] = "other";
  CHECK_THROWS_AS(model_from_json(bad), ValidationError);
}
