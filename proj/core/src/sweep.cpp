#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "reviewminer/errors.hpp"
#include "reviewminer/rng.hpp"
#include "reviewminer/topic_model.hpp"

namespace reviewminer {
namespace {

double rank_key(double score) { return std::isnan(score) ? -std::numeric_limits<double>::infinity() : score; }

// Strict "a beats b" under the selection rule.
bool better(const SweepEntry& a, const SweepEntry& b) {
  const double sa = rank_key(a.score), sb = rank_key(b.score);
  if (sa != sb) return sa > sb;
  if (a.num_topics != b.num_topics) return a.num_topics < b.num_topics;
  return a.order < b.order;
}

struct GridPoint {
  int order;
  int num_topics;
  const TokenizedCorpus* corpus;
};

}  // namespace

LdaConfig SweepOptions::config_for(int order, int num_topics) const {
  LdaConfig cfg = LdaConfig::defaults(num_topics);
  if (alpha) cfg.alpha = *alpha;
  cfg.beta = beta;
  cfg.iterations = iterations;
  cfg.coherence_top_n = top_n;
  cfg.seed = derive_seed(seed, "lda", {static_cast<std::uint64_t>(order), static_cast<std::uint64_t>(num_topics)});
  return cfg;
}

void SweepOptions::validate() const {
  if (k_min < 2) throw ValidationError("topic range must start at 2 or more");
  if (k_max < k_min) throw ValidationError("empty topic range: min " + std::to_string(k_min) + " > max " +
                                           std::to_string(k_max));
  if (top_n < 2) throw ValidationError("top-n must be at least 2");
  if (iterations < 1) throw ValidationError("iterations must be positive");
  if (alpha && !(*alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
}

std::size_t select_best(std::span<const SweepEntry> entries) {
  if (entries.empty()) throw ValidationError("cannot select from an empty sweep");
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (better(entries[i], entries[best])) best = i;
  return best;
}

SweepResult sweep(const std::map<int, TokenizedCorpus>& corpora, const SweepOptions& options) {
  options.validate();
  if (corpora.empty()) throw ValidationError("sweep needs at least one n-gram corpus");

  std::vector<GridPoint> grid;
  for (const auto& [order, corpus] : corpora)
    for (int k = options.k_min; k <= options.k_max; ++k) grid.push_back({order, k, &corpus});

  SweepResult result;
  result.entries.resize(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex best_mutex;
  std::optional<std::size_t> best;

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size() || abort.load()) return;
      const auto& g = grid[i];
      try {
        const auto cfg = options.config_for(g.order, g.num_topics);
        LdaModel model = lda_fit(*g.corpus, cfg);
        SweepEntry e;
        e.order = g.order;
        e.num_topics = g.num_topics;
        e.perplexity = perplexity(model, *g.corpus);
        e.coherence = coherence(model, *g.corpus, options.top_n);
        e.score = combined_score(e.perplexity, e.coherence);
        result.entries[i] = e;

        // "better" is a strict total order on grid points, so the survivor
        // does not depend on completion order.
        std::lock_guard lock(best_mutex);
        if (!best || better(e, result.entries[*best])) {
          best = i;
          result.best_model = std::move(model);
        }
      } catch (...) {
        failures[i] = std::current_exception();
        abort = true;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(grid.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!failures[i]) continue;
    const std::string where =
        "fit failed for n-gram order " + std::to_string(grid[i].order) + ", K=" + std::to_string(grid[i].num_topics);
    try {
      std::rethrow_exception(failures[i]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const std::exception& e) {
      throw DataError(where + ": " + e.what());
    }
  }

  result.best = select_best(result.entries);
  return result;
}

}  // namespace reviewminer
