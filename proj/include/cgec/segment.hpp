#pragma once

// Character and word segmentation. The word segmenter is a deterministic
// greedy forward maximum-match over a bundled lexicon; pre-segmented input
// (one space between tokens) is accepted as-is.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cgec/core.hpp"
#include "cgec/utf8.hpp"

namespace cgec {

class Lexicon {
 public:
  Lexicon() = default;

  void add(std::string word, std::string pos) {
    if (word.empty()) throw data_error("empty lexicon entry");
    const std::size_t len = utf8::length(word);
    if (len > max_word_len_) max_word_len_ = len;
    entries_.emplace(std::move(word), std::move(pos));
  }

  static Lexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open lexicon: " + path);
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0)
        throw parse_error("lexicon line is not word<TAB>UPOS", lineno);
      lex.add(line.substr(0, tab), line.substr(tab + 1));
    }
    return lex;
  }

  bool contains(std::string_view word) const {
    return entries_.find(std::string(word)) != entries_.end();
  }

  // UPOS tag for a word, or "X" when unknown.
  std::string pos(std::string_view word) const {
    auto it = entries_.find(std::string(word));
    return it == entries_.end() ? std::string("X") : it->second;
  }

  std::size_t max_word_len() const { return max_word_len_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
  std::size_t max_word_len_ = 1;
};

// One token per code point, whitespace skipped. Offsets are code points
// into the original text.
inline Segmentation segment_chars(std::string_view text) {
  if (text.empty()) throw data_error("cannot segment empty input");
  Segmentation seg;
  seg.granularity = Granularity::character;
  std::size_t pos = 0, cp_index = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = utf8::next(text, pos);
    if (!utf8::is_space(cp)) {
      Token t;
      t.surface = std::string(text.substr(start, pos - start));
      t.char_start = cp_index;
      t.char_end = cp_index + 1;
      seg.tokens.push_back(std::move(t));
    }
    ++cp_index;
  }
  if (seg.tokens.empty()) throw data_error("cannot segment empty input");
  return seg;
}

// Greedy forward maximum match: the longest lexicon word wins at each
// position. Punctuation is always its own token; unknown single characters
// become one-character tokens tagged X.
inline Segmentation segment_words(std::string_view text, const Lexicon& lex) {
  if (text.empty()) throw data_error("cannot segment empty input");
  const auto points = utf8::split_points(text);
  Segmentation seg;
  seg.granularity = Granularity::word;
  std::size_t i = 0;
  while (i < points.size()) {
    const char32_t cp = utf8::decode(points[i]).front();
    if (utf8::is_space(cp)) {
      ++i;
      continue;
    }
    if (utf8::is_punct(cp)) {
      seg.tokens.push_back({points[i], i, i + 1, "PUNCT"});
      ++i;
      continue;
    }
    std::size_t best = 1;
    std::string word = points[i];
    std::string candidate = points[i];
    for (std::size_t len = 2; len <= lex.max_word_len() && i + len <= points.size();
         ++len) {
      const char32_t next_cp = utf8::decode(points[i + len - 1]).front();
      if (utf8::is_space(next_cp) || utf8::is_punct(next_cp)) break;
      candidate += points[i + len - 1];
      if (lex.contains(candidate)) {
        best = len;
        word = candidate;
      }
    }
    Token t;
    t.surface = word;
    t.char_start = i;
    t.char_end = i + best;
    t.pos = lex.pos(word);
    seg.tokens.push_back(std::move(t));
    i += best;
  }
  if (seg.tokens.empty()) throw data_error("cannot segment empty input");
  return seg;
}

// Whitespace already marks token boundaries. Offsets are computed against
// the whitespace-stripped source.
inline Segmentation parse_presegmented(std::string_view line) {
  Segmentation seg;
  seg.granularity = Granularity::word;
  std::size_t pos = 0, cp_index = 0;
  std::string current;
  std::size_t current_start = 0, current_len = 0;
  auto flush = [&] {
    if (current.empty()) return;
    seg.tokens.push_back({current, current_start, current_start + current_len, ""});
    current.clear();
    current_len = 0;
  };
  while (pos < line.size()) {
    const std::size_t start = pos;
    const char32_t cp = utf8::next(line, pos);
    if (utf8::is_space(cp)) {
      flush();
    } else {
      if (current.empty()) current_start = cp_index;
      current.append(line.substr(start, pos - start));
      ++current_len;
      ++cp_index;
    }
  }
  flush();
  return seg;
}

}  // namespace cgec
