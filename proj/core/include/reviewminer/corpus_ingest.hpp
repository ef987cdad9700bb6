#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reviewminer/stop_list.hpp"

namespace reviewminer {

enum class Platform { ios, google };
enum class InputFormat { csv, jsonl };

std::string_view to_string(Platform p);
std::optional<Platform> parse_platform(std::string_view s);
std::string_view to_string(InputFormat f);
std::optional<InputFormat> parse_format(std::string_view s);

struct Review {
  std::string id;
  std::string app;
  Platform platform = Platform::ios;
  int rating = 0;  // stars, 1..5
  std::optional<std::string> title;
  std::string body;
  std::optional<std::string> date;      // ISO-8601 YYYY-MM-DD
  std::optional<std::string> language;  // BCP-47

  /// Title and body joined by a single space; the text every downstream
  /// stage analyzes.
  std::string text() const;

  bool operator==(const Review&) const = default;
};

struct RawCorpus {
  std::vector<Review> reviews;  // input order
  std::map<std::string, std::string> source_meta;
};

/// A malformed input row. `line` is the 1-based physical line on which the
/// record starts.
struct RowError {
  std::size_t line = 0;
  std::string field;
  std::string message;

  bool operator==(const RowError&) const = default;
};

struct IngestResult {
  RawCorpus corpus;
  std::vector<RowError> errors;
  std::size_t row_count = 0;  // data rows seen, good or bad
};

/// Reads reviews from disk. A missing or unreadable file, or a CSV header
/// lacking a required column, throws ValidationError; problems confined to
/// one row become RowError entries.
IngestResult ingest(const std::filesystem::path& path, InputFormat format);
IngestResult ingest_csv(std::istream& in);
IngestResult ingest_jsonl(std::istream& in);

void write_csv(const RawCorpus& corpus, std::ostream& out);
void write_jsonl(const RawCorpus& corpus, std::ostream& out);

/// JSONL of {line, field, message}.
void write_error_report(std::span<const RowError> errors, std::ostream& out);

struct LanguageFilterResult {
  RawCorpus kept;
  std::size_t removed_count = 0;
};

inline constexpr double kDefaultLanguageThreshold = 0.15;

/// Keeps reviews tagged "en*" outright. Untagged reviews are kept when the
/// share of their tokens found in the English stop list reaches `threshold`.
LanguageFilterResult filter_language(const RawCorpus& corpus, const StopList& stop,
                                     double threshold = kDefaultLanguageThreshold);

/// Stop-word hit ratio used by filter_language; 0 for text with no tokens.
double english_stopword_ratio(std::string_view text, const StopList& stop);

}  // namespace reviewminer
