#include "reviewminer/stop_list.hpp"

#include <algorithm>
#include <fstream>

#include "reviewminer/errors.hpp"

namespace reviewminer {

std::size_t StopList::size() const {
  std::size_t n = tokens.size();
  for (const auto& t : domain_extensions)
    if (!tokens.contains(t)) ++n;
  return n;
}

std::set<std::string, std::less<>> StopList::read_word_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read word list '" + path.string() + "'");
  std::set<std::string, std::less<>> words;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    if (word.find_first_of(" \t") != std::string::npos)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": entry contains whitespace");
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) { return std::tolower(c); });
    words.insert(std::move(word));
  }
  return words;
}

StopList StopList::load(const std::filesystem::path& stop_words, const std::filesystem::path& extensions) {
  StopList list;
  list.tokens = read_word_file(stop_words);
  if (!extensions.empty()) list.domain_extensions = read_word_file(extensions);
  return list;
}

}  // namespace reviewminer
