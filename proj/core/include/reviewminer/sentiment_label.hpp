#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace reviewminer {

// Declaration order is the fixed tie-break order used by classifiers.
enum class SentimentLabel { negative = 0, neutral = 1, positive = 2 };

inline constexpr std::array<SentimentLabel, 3> kAllLabels = {
    SentimentLabel::negative, SentimentLabel::neutral, SentimentLabel::positive};

constexpr std::size_t label_index(SentimentLabel l) { return static_cast<std::size_t>(l); }

constexpr std::string_view to_string(SentimentLabel l) {
  switch (l) {
    case SentimentLabel::negative: return "negative";
    case SentimentLabel::neutral: return "neutral";
    case SentimentLabel::positive: return "positive";
  }
  return "neutral";
}

std::optional<SentimentLabel> parse_label(std::string_view s);

/// Per-label tallies, indexed by label_index().
using LabelCounts = std::array<std::size_t, 3>;

}  // namespace reviewminer
