#include <algorithm>
#include <cmath>
#include <limits>

#include "reviewminer/diagnostics.hpp"
#include "reviewminer/errors.hpp"
#include "reviewminer/sentiment.hpp"

namespace reviewminer {

NbModel nb_fit(const TokenizedCorpus& train, double smoothing) {
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) throw ValidationError("NB smoothing must be positive");
  if (train.docs.empty()) throw ValidationError("NB training set is empty");

  NbModel model;
  model.smoothing = smoothing;
  model.feature_of.assign(train.vocab.size(), -1);

  std::array<std::size_t, 3> doc_count{};
  std::array<std::vector<std::uint64_t>, 3> token_count;
  std::array<std::uint64_t, 3> class_total{};
  std::int32_t features = 0;

  for (std::size_t d = 0; d < train.docs.size(); ++d) {
    const auto& label = train.doc_meta.at(d).label;
    if (!label) throw ValidationError("NB training document '" + train.doc_meta[d].review_id + "' has no label");
    const auto c = label_index(*label);
    ++doc_count[c];
    for (const auto t : train.docs[d]) {
      if (model.feature_of[t] < 0) {
        model.feature_of[t] = features++;
        for (auto& counts : token_count) counts.push_back(0);
      }
      ++token_count[c][static_cast<std::size_t>(model.feature_of[t])];
      ++class_total[c];
    }
  }

  const double n_docs = static_cast<double>(train.docs.size());
  const double v = static_cast<double>(features);
  for (std::size_t c = 0; c < 3; ++c) {
    model.present[c] = doc_count[c] > 0;
    auto& row = model.token_log_likelihood[c];
    row.assign(static_cast<std::size_t>(features), -std::numeric_limits<double>::infinity());
    if (!model.present[c]) {
      model.class_log_prior[c] = -std::numeric_limits<double>::infinity();
      warn("NB training set has no '" + std::string(to_string(kAllLabels[c])) + "' documents; class omitted");
      continue;
    }
    model.class_log_prior[c] = std::log(static_cast<double>(doc_count[c]) / n_docs);
    const double denom = std::log(static_cast<double>(class_total[c]) + smoothing * v);
    for (std::size_t f = 0; f < row.size(); ++f)
      row[f] = std::log(static_cast<double>(token_count[c][f]) + smoothing) - denom;
  }
  return model;
}

NbPrediction nb_predict(const NbModel& model, std::span<const TokenId> doc) {
  std::array<double, 3> score = model.class_log_prior;
  for (const auto t : doc) {
    if (t >= model.feature_of.size()) continue;
    const auto f = model.feature_of[t];
    if (f < 0) continue;
    for (std::size_t c = 0; c < 3; ++c)
      if (model.present[c]) score[c] += model.token_log_likelihood[c][static_cast<std::size_t>(f)];
  }

  std::size_t best = 3;
  for (std::size_t c = 0; c < 3; ++c) {
    if (!model.present[c]) continue;
    if (best == 3 || score[c] > score[best]) best = c;
  }
  if (best == 3) throw ValidationError("NB model has no classes");

  // log-sum-exp normalization
  double denom = 0.0;
  for (std::size_t c = 0; c < 3; ++c)
    if (model.present[c]) denom += std::exp(score[c] - score[best]);
  const double log_norm = score[best] + std::log(denom);

  NbPrediction p;
  p.label = kAllLabels[best];
  for (std::size_t c = 0; c < 3; ++c)
    p.log_posterior[c] = model.present[c] ? score[c] - log_norm : -std::numeric_limits<double>::infinity();
  return p;
}

}  // namespace reviewminer
