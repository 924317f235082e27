#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stt {

/// Words spelled as ordered syllable label sequences.
class SyllableLexicon {
 public:
  struct Entry {
    std::string word;
    std::vector<std::string> syllables;
  };

  /// Throws MalformedLexicon on an empty word, an empty spelling, or a
  /// repeated word.
  void add(std::string word, std::vector<std::string> syllables);

  /// Word spelled by `syllables`, if any. When two words share a spelling
  /// the one added first wins.
  std::optional<std::string> lookup(std::span<const std::string> syllables) const;

  /// Throws UnknownLabel if a syllable is not among `labels`.
  void validate_against(std::span<const std::string> labels) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Lines of `word: syl1 syl2 ...`; blank lines and lines starting with
  /// '#' are ignored.
  static SyllableLexicon parse(std::istream& in);
  static SyllableLexicon load(const std::filesystem::path& path);

 private:
  std::vector<Entry> entries_;
  std::map<std::vector<std::string>, std::size_t> by_spelling_;
};

}  // namespace stt
