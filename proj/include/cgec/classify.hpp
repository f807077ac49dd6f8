#pragma once

// Error classification: assigns each edit a linguistically-typed label.
// Substitutions are tested for pronunciation and glyph similarity (both,
// pinyin only, shape only), then for character permutations, then fall back
// to the POS of the affected word. Comparisons against the thresholds are
// strict, so a score of exactly alpha never fires a branch.

#include <string>
#include <vector>

#include "cgec/align.hpp"
#include "cgec/core.hpp"
#include "cgec/phonosim.hpp"
#include "cgec/segment.hpp"

namespace cgec {

struct Providers {
  const PinyinLexicon& pinyin;
  const ShapeScorer& shape;
  const Lexicon& lexicon;
};

namespace detail {

// UPOS of the single word spelled by `text`; multi-word spans are OTHER.
inline std::string pos_subtype(const std::string& text, const Lexicon& lex) {
  const std::string stripped = utf8::strip_whitespace(text);
  if (stripped.empty()) return "OTHER";
  const Segmentation words = segment_words(stripped, lex);
  if (words.size() != 1) return "OTHER";
  const std::string& pos = words.tokens[0].pos;
  return pos.empty() ? std::string("X") : pos;
}

}  // namespace detail

inline ErrorLabel classify_edit(const Edit& edit, const Segmentation& src,
                                const Thresholds& th, const Providers& providers) {
  if (edit.label.op == Op::WO && edit.label.raw.empty())
    return edit.label;  // pre-labelled by the word-order heuristic

  const std::string span = utf8::strip_whitespace(src.span_text(edit.start, edit.end));
  const std::string repl = utf8::strip_whitespace(edit.replacement);
  const Op op = structural_op(edit);

  if (op == Op::R) {
    const std::size_t len_s = utf8::length(span);
    const std::size_t len_t = utf8::length(repl);
    if (len_s == len_t) {  // similarity branches require equal lengths
      const double py = pinyin_similarity(span, repl, providers.pinyin);
      const double sh = shape_similarity(span, repl, providers.shape);
      if (py > th.alpha1 && sh > th.alpha2) return make_label(Op::R, "MULTI");
      if (py > th.alpha1)
        return is_de_particle(repl) ? make_label(Op::R, "DE")
                                    : make_label(Op::R, "PINYIN");
      if (sh > th.alpha2) return make_label(Op::R, "SHAPE");
    }
    if (detail::char_multiset(span) == detail::char_multiset(repl)) {
      const bool one_word =
          segment_words(repl, providers.lexicon).size() == 1;
      return one_word ? make_label(Op::R, "CO") : make_label(Op::WO);
    }
    return make_label(Op::R, detail::pos_subtype(repl, providers.lexicon));
  }
  if (op == Op::M) {
    if (is_de_particle(repl)) return make_label(Op::M, "DE");
    return make_label(Op::M, detail::pos_subtype(repl, providers.lexicon));
  }
  return make_label(Op::U, detail::pos_subtype(span, providers.lexicon));
}

// Classifies every edit of every annotator; order and ids are preserved.
inline AnnotationRecord classify_all(AnnotationRecord record, const Thresholds& th,
                                     const Providers& providers) {
  for (auto& [annotator, edits] : record.edit_sets) {
    (void)annotator;
    for (auto& e : edits) e.label = classify_edit(e, record.source_seg, th, providers);
  }
  return record;
}

}  // namespace cgec
