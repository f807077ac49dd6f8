#pragma once

// Domain types shared by every module: sentence pairs, segmentations,
// edits and their labels. No I/O here beyond what validation needs.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cgec/utf8.hpp"

namespace cgec {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file; carries the 1-based line where parsing failed.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structurally valid input whose content violates a contract
// (mismatched sources, offsets outside the sentence, ...).
class data_error : public error {
 public:
  using error::error;
};

namespace detail {

inline std::vector<std::string> split_spaces(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto next = s.find(' ', pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    if (next > pos) out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

inline std::vector<char32_t> char_multiset(std::string_view text) {
  auto points = utf8::decode(utf8::strip_whitespace(text));
  std::sort(points.begin(), points.end());
  return points;
}

}  // namespace detail

enum class Granularity { character, word };

inline std::string_view to_string(Granularity g) {
  return g == Granularity::character ? "char" : "word";
}

// ---------------------------------------------------------------------------
// Error labels

enum class Op { R, M, U, WO };

inline std::string_view to_string(Op op) {
  switch (op) {
    case Op::R: return "R";
    case Op::M: return "M";
    case Op::U: return "U";
    case Op::WO: return "WO";
  }
  return "?";
}

inline const std::vector<std::string>& upos_tags() {
  static const std::vector<std::string> tags = {
      "ADJ",  "ADP",  "ADV",   "AUX",  "CCONJ", "DET", "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  return tags;
}

inline bool is_upos(std::string_view s) {
  for (const auto& t : upos_tags())
    if (t == s) return true;
  return false;
}

// op + subtype, e.g. {R, "PINYIN"}. `raw` keeps the verbatim type string of a
// parsed m2 line so unknown types survive a round trip byte for byte.
struct ErrorLabel {
  Op op = Op::R;
  std::string subtype;  // named subtype, UPOS tag, or empty for none
  std::string raw;      // verbatim m2 type string, empty unless parsed

  bool operator==(const ErrorLabel& o) const {
    return op == o.op && subtype == o.subtype && raw == o.raw;
  }
};

inline ErrorLabel make_label(Op op, std::string subtype = {}) {
  ErrorLabel lab{op, std::move(subtype), {}};
  const std::string& s = lab.subtype;
  const bool spell_family =
      s == "PINYIN" || s == "SHAPE" || s == "MULTI" || s == "CO";
  if (spell_family && op != Op::R)
    throw data_error("subtype " + s + " requires op R");
  if (s == "DE" && op != Op::R && op != Op::M)
    throw data_error("subtype DE requires op R or M");
  if (op == Op::WO && !s.empty())
    throw data_error("op WO carries no subtype");
  return lab;
}

inline const std::vector<std::string>& de_particles() {
  static const std::vector<std::string> de = {"的", "地", "得"};
  return de;  // 的 地 得
}

inline bool is_de_particle(std::string_view text) {
  for (const auto& p : de_particles())
    if (p == text) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Sentences and segmentations

struct SentencePair {
  std::string id;
  std::string source;
  std::vector<std::string> references;  // may be empty; duplicates permitted
  std::string origin;                   // corpus tag
  std::map<std::string, std::string> meta;
};

struct Token {
  std::string surface;      // >= 1 code point
  std::size_t char_start = 0;  // code point offsets into the source text
  std::size_t char_end = 0;    // exclusive
  std::string pos;             // coarse UPOS tag, empty when untagged
};

struct Segmentation {
  std::vector<Token> tokens;
  Granularity granularity = Granularity::character;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  // Source text with inter-token whitespace removed.
  std::string text() const {
    std::string out;
    for (const auto& t : tokens) out += t.surface;
    return out;
  }

  std::string span_text(std::size_t start, std::size_t end) const {
    std::string out;
    for (std::size_t i = start; i < end && i < tokens.size(); ++i)
      out += tokens[i].surface;
    return out;
  }

  // Space-joined surfaces, the m2 "S" line body.
  std::string joined() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i].surface;
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Edits

// Span replacement over source tokens. start == end encodes an insertion
// before token `start`; empty replacement encodes a deletion.
struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  std::string replacement;  // target tokens joined by single spaces
  ErrorLabel label;
  int annotator = 0;

  bool is_insertion() const { return start == end; }
  bool is_deletion() const { return replacement.empty(); }

  std::string describe() const {
    return "[" + std::to_string(start) + "," + std::to_string(end) + ")->\"" +
           replacement + "\"";
  }
};

// Operation implied by an edit's shape, independent of its label.
inline Op structural_op(const Edit& e) {
  if (e.start == e.end) return Op::M;
  if (e.replacement.empty()) return Op::U;
  return Op::R;
}

inline void validate_edit(const Edit& e, std::size_t token_count) {
  if (e.start > e.end || e.end > token_count)
    throw data_error("edit span " + e.describe() + " out of range (0.." +
                     std::to_string(token_count) + ")");
  if (e.start == e.end && e.replacement.empty())
    throw data_error("edit " + e.describe() + " is a no-op");
  const Op structural = structural_op(e);
  if (e.label.op == Op::M && structural != Op::M)
    throw data_error("label M requires an insertion: " + e.describe());
  if (e.label.op == Op::U && structural != Op::U)
    throw data_error("label U requires a deletion: " + e.describe());
  if ((e.label.op == Op::R || e.label.op == Op::WO) && structural != Op::R)
    throw data_error("label " + std::string(to_string(e.label.op)) +
                     " requires a replacement: " + e.describe());
}

enum class Dialect { cherrant, refined };

inline std::string_view to_string(Dialect d) {
  return d == Dialect::cherrant ? "cherrant" : "refined";
}

struct AnnotationRecord {
  Segmentation source_seg;
  std::map<int, std::vector<Edit>> edit_sets;  // annotator id -> edits
  Dialect dialect = Dialect::refined;
  // Verbatim reference token lines (annotator -> T-line body), kept so the
  // cherrant dialect round-trips byte for byte.
  std::map<int, std::string> reference_lines;
  // Non-edit A lines preserved verbatim (errant noop extensions etc).
  std::vector<std::string> passthrough_lines;
};

// ---------------------------------------------------------------------------
// Scores and thresholds

struct TypeCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

struct ScoreReport {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f = 1.0;
  double beta = 0.5;
  std::map<std::string, TypeCounts> per_type;
  Granularity granularity = Granularity::character;
};

struct Thresholds {
  double alpha1 = 0.9;  // pinyin similarity
  double alpha2 = 0.9;  // shape similarity
};

// CGED-style typed error span, in 0-based exclusive-end character indices
// (whitespace not counted); the original offsets live in the pair's meta.
struct GoldSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;
};

// ---------------------------------------------------------------------------
// apply_edits

// Applies non-overlapping, start-sorted edits and returns the corrected
// sentence (whitespace-free, as Chinese running text).
inline std::string apply_edits(const Segmentation& seg,
                               const std::vector<Edit>& edits) {
  std::size_t prev_end = 0;
  const Edit* prev = nullptr;
  for (const auto& e : edits) {
    validate_edit(e, seg.size());
    if (prev && (e.start < prev->start || e.start < prev_end))
      throw data_error("overlapping edits " + prev->describe() + " and " +
                       e.describe());
    prev_end = std::max(prev_end, e.end);
    prev = &e;
  }
  std::string out;
  std::size_t cursor = 0;
  for (const auto& e : edits) {
    for (std::size_t i = cursor; i < e.start; ++i) out += seg.tokens[i].surface;
    out += utf8::strip_whitespace(e.replacement);
    cursor = std::max(cursor, e.end);
  }
  for (std::size_t i = cursor; i < seg.size(); ++i) out += seg.tokens[i].surface;
  return out;
}

}  // namespace cgec
