#include "stt/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stt/error.hpp"

namespace stt {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void SyllableLexicon::add(std::string word, std::vector<std::string> syllables) {
  if (word.empty()) throw Error(ErrorCode::kMalformedLexicon, "empty word");
  if (syllables.empty()) throw Error(ErrorCode::kMalformedLexicon, "word '" + word + "' has no syllables");
  const bool seen = std::any_of(entries_.begin(), entries_.end(),
                                [&](const Entry& e) { return e.word == word; });
  if (seen) throw Error(ErrorCode::kMalformedLexicon, "word '" + word + "' is defined twice");
  by_spelling_.try_emplace(syllables, entries_.size());
  entries_.push_back({std::move(word), std::move(syllables)});
}

std::optional<std::string> SyllableLexicon::lookup(std::span<const std::string> syllables) const {
  const auto it = by_spelling_.find(std::vector<std::string>(syllables.begin(), syllables.end()));
  if (it == by_spelling_.end()) return std::nullopt;
  return entries_[it->second].word;
}

void SyllableLexicon::validate_against(std::span<const std::string> labels) const {
  for (const auto& e : entries_) {
    for (const auto& s : e.syllables) {
      if (std::find(labels.begin(), labels.end(), s) == labels.end()) {
        throw Error(ErrorCode::kUnknownLabel,
                    "syllable '" + s + "' of word '" + e.word + "' is not a model label");
      }
    }
  }
}

SyllableLexicon SyllableLexicon::parse(std::istream& in) {
  SyllableLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto colon = body.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kMalformedLexicon,
                  "line " + std::to_string(line_no) + ": expected 'word: syllable ...'");
    }
    std::string word = trim(body.substr(0, colon));
    std::istringstream rest(body.substr(colon + 1));
    std::vector<std::string> syllables;
    for (std::string s; rest >> s;) syllables.push_back(s);
    try {
      lex.add(std::move(word), std::move(syllables));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.message());
    }
  }
  return lex;
}

SyllableLexicon SyllableLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  try {
    return parse(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

}  // namespace stt
