#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

namespace reviewminer {

/// English stop words plus domain-specific extensions. Lookups consult the
/// union of both sets.
struct StopList {
  std::set<std::string, std::less<>> tokens;
  std::set<std::string, std::less<>> domain_extensions;

  bool contains(std::string_view token) const {
    return tokens.contains(token) || domain_extensions.contains(token);
  }
  std::size_t size() const;

  /// Reads a word-list file: one token per line, '#' starts a comment, blank
  /// lines ignored. Entries are lowercased; an entry with inner whitespace is
  /// rejected with ValidationError.
  static std::set<std::string, std::less<>> read_word_file(const std::filesystem::path& path);

  static StopList load(const std::filesystem::path& stop_words,
                       const std::filesystem::path& extensions = {});
};

}  // namespace reviewminer
