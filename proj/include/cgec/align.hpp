#pragma once

// Token-level alignment between an erroneous segmentation and its
// correction: minimal-cost Damerau-Levenshtein script, merging of raw ops
// into edits, and the span-level word-order heuristic.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cgec/core.hpp"
#include "cgec/phonosim.hpp"
#include "cgec/segment.hpp"

namespace cgec {

struct CostConfig {
  double sub_base = 1.0;
  // Multiplier applied to sub_base when pinyin or shape similarity of the
  // two surfaces exceeds similar_threshold. Still dearer than a match,
  // cheaper than delete+insert.
  double sub_similar_discount = 0.5;
  double similar_threshold = 0.7;
  double insert_cost = 1.0;
  double delete_cost = 1.0;
  double transpose_cost = 1.0;
};

enum class RawOpKind { match, substitute, insert, erase, transpose };

struct RawOp {
  RawOpKind kind;
  std::size_t src_pos;  // first source token consumed (insertion point for insert)
  std::size_t tgt_pos;  // first target token consumed
};

namespace detail {

inline double substitution_cost(const std::string& a, const std::string& b,
                                const CostConfig& cfg, const PinyinLexicon* pinyin,
                                const ShapeScorer* shape) {
  bool similar = false;
  std::size_t pos_a = 0, pos_b = 0;
  const char32_t ca = a.empty() ? 0 : utf8::next(a, pos_a);
  const char32_t cb = b.empty() ? 0 : utf8::next(b, pos_b);
  if (!a.empty() && pos_a == a.size() && !b.empty() && pos_b == b.size()) {
    // single-character tokens, the hot path at character granularity
    if (pinyin && syllables_match(ca, cb, *pinyin)) similar = true;
    if (!similar && shape && shape->char_pair(ca, cb) > cfg.similar_threshold)
      similar = true;
  } else {
    if (pinyin && pinyin_similarity(a, b, *pinyin) > cfg.similar_threshold)
      similar = true;
    if (!similar && shape &&
        shape_similarity(a, b, *shape) > cfg.similar_threshold)
      similar = true;
  }
  return similar ? cfg.sub_base * cfg.sub_similar_discount : cfg.sub_base;
}

}  // namespace detail

// Minimal-cost edit script. Ties are broken deterministically preferring
// match > transpose > substitute > delete > insert.
inline std::vector<RawOp> align(const Segmentation& src, const Segmentation& tgt,
                                const CostConfig& cfg = {},
                                const PinyinLexicon* pinyin = nullptr,
                                const ShapeScorer* shape = nullptr) {
  if (src.granularity != tgt.granularity)
    throw data_error("cannot align segmentations of different granularity");
  const std::size_t m = src.size(), n = tgt.size();
  const double kInf = 1e18;
  std::vector<std::vector<double>> d(m + 1, std::vector<double>(n + 1, kInf));
  std::vector<std::vector<RawOpKind>> choice(
      m + 1, std::vector<RawOpKind>(n + 1, RawOpKind::match));
  d[0][0] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    d[i][0] = d[i - 1][0] + cfg.delete_cost;
    choice[i][0] = RawOpKind::erase;
  }
  for (std::size_t j = 1; j <= n; ++j) {
    d[0][j] = d[0][j - 1] + cfg.insert_cost;
    choice[0][j] = RawOpKind::insert;
  }
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::string& a = src.tokens[i - 1].surface;
      const std::string& b = tgt.tokens[j - 1].surface;
      double best = kInf;
      RawOpKind kind = RawOpKind::match;
      if (a == b) {
        best = d[i - 1][j - 1];
        kind = RawOpKind::match;
      }
      if (i >= 2 && j >= 2 && src.tokens[i - 2].surface == b &&
          src.tokens[i - 1].surface == tgt.tokens[j - 2].surface && a != b) {
        const double c = d[i - 2][j - 2] + cfg.transpose_cost;
        if (c < best) {
          best = c;
          kind = RawOpKind::transpose;
        }
      }
      if (a != b) {
        const double c =
            d[i - 1][j - 1] + detail::substitution_cost(a, b, cfg, pinyin, shape);
        if (c < best) {
          best = c;
          kind = RawOpKind::substitute;
        }
      }
      {
        const double c = d[i - 1][j] + cfg.delete_cost;
        if (c < best) {
          best = c;
          kind = RawOpKind::erase;
        }
      }
      {
        const double c = d[i][j - 1] + cfg.insert_cost;
        if (c < best) {
          best = c;
          kind = RawOpKind::insert;
        }
      }
      d[i][j] = best;
      choice[i][j] = kind;
    }
  }
  std::vector<RawOp> ops;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const RawOpKind kind = choice[i][j];
    switch (kind) {
      case RawOpKind::match:
      case RawOpKind::substitute:
        ops.push_back({kind, i - 1, j - 1});
        --i;
        --j;
        break;
      case RawOpKind::transpose:
        ops.push_back({kind, i - 2, j - 2});
        i -= 2;
        j -= 2;
        break;
      case RawOpKind::erase:
        ops.push_back({kind, i - 1, j});
        --i;
        break;
      case RawOpKind::insert:
        ops.push_back({kind, i, j - 1});
        --j;
        break;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

inline double script_cost(const std::vector<RawOp>& ops, const Segmentation& src,
                          const Segmentation& tgt, const CostConfig& cfg,
                          const PinyinLexicon* pinyin = nullptr,
                          const ShapeScorer* shape = nullptr) {
  double total = 0.0;
  for (const auto& op : ops) {
    switch (op.kind) {
      case RawOpKind::match: break;
      case RawOpKind::substitute:
        total += detail::substitution_cost(src.tokens[op.src_pos].surface,
                                           tgt.tokens[op.tgt_pos].surface, cfg,
                                           pinyin, shape);
        break;
      case RawOpKind::insert: total += cfg.insert_cost; break;
      case RawOpKind::erase: total += cfg.delete_cost; break;
      case RawOpKind::transpose: total += cfg.transpose_cost; break;
    }
  }
  return total;
}

namespace detail {

inline std::string join_tokens(const Segmentation& seg, std::size_t from,
                               std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (!out.empty()) out += ' ';
    out += seg.tokens[i].surface;
  }
  return out;
}

inline bool single_word(const std::string& text, const Lexicon& lex) {
  const std::string stripped = utf8::strip_whitespace(text);
  if (stripped.empty()) return false;
  if (utf8::length(stripped) == 1) return true;
  return lex.contains(stripped);
}

}  // namespace detail

// Merges raw ops into edits. Contiguous non-match ops form one edit unless
// both neighbours are substitutions whose combined target is not a lexicon
// word; a substitution may additionally absorb an adjacent matched token
// when edited and matched material together spell one lexicon word (this is
// what turns [sub 一>以][match 前] into the single edit 一前 -> 以前).
inline std::vector<Edit> merge_edits(const std::vector<RawOp>& ops,
                                     const Segmentation& src,
                                     const Segmentation& tgt, const Lexicon& lex) {
  struct Run {  // one contiguous non-match region
    std::size_t src_start, src_end;
    std::size_t tgt_start, tgt_end;
    std::vector<RawOpKind> kinds;
  };
  std::vector<Run> runs;
  for (const auto& op : ops) {
    if (op.kind == RawOpKind::match) continue;
    std::size_t consume_src = 0, consume_tgt = 0;
    switch (op.kind) {
      case RawOpKind::substitute: consume_src = consume_tgt = 1; break;
      case RawOpKind::transpose: consume_src = consume_tgt = 2; break;
      case RawOpKind::insert: consume_tgt = 1; break;
      case RawOpKind::erase: consume_src = 1; break;
      default: break;
    }
    const bool adjacent = !runs.empty() && runs.back().src_end == op.src_pos &&
                          runs.back().tgt_end == op.tgt_pos;
    if (adjacent) {
      Run& run = runs.back();
      const bool both_sub = run.kinds.size() >= 1 &&
                            run.kinds.back() == RawOpKind::substitute &&
                            op.kind == RawOpKind::substitute;
      bool mergeable = !both_sub;
      if (both_sub) {
        // rule (b): substitution run whose combined target is one word
        const std::string combined = utf8::strip_whitespace(
            detail::join_tokens(tgt, run.tgt_start, op.tgt_pos + consume_tgt));
        mergeable = detail::single_word(combined, lex) && utf8::length(combined) > 1;
      }
      if (mergeable) {
        run.src_end = op.src_pos + consume_src;
        run.tgt_end = op.tgt_pos + consume_tgt;
        run.kinds.push_back(op.kind);
        continue;
      }
    }
    runs.push_back({op.src_pos, op.src_pos + consume_src, op.tgt_pos,
                    op.tgt_pos + consume_tgt, {op.kind}});
  }

  std::vector<Edit> edits;
  for (const auto& run : runs) {
    Edit e;
    e.start = run.src_start;
    e.end = run.src_end;
    e.replacement = detail::join_tokens(tgt, run.tgt_start, run.tgt_end);
    e.label.op = structural_op(e);  // subtype assigned by the classifier
    edits.push_back(std::move(e));
  }

  // Absorb adjacent matched tokens into replacement edits (rule b).
  for (std::size_t k = 0; k < edits.size(); ++k) {
    Edit& e = edits[k];
    if (e.is_insertion() || e.is_deletion()) continue;
    const std::size_t left_limit = k == 0 ? 0 : edits[k - 1].end;
    const std::size_t right_limit =
        k + 1 < edits.size() ? edits[k + 1].start : src.size();
    bool grew = true;
    while (grew) {
      grew = false;
      if (e.end < right_limit) {
        const std::string& surf = src.tokens[e.end].surface;
        const std::string combined =
            utf8::strip_whitespace(e.replacement) + surf;
        if (utf8::length(combined) > 1 && lex.contains(combined)) {
          e.replacement += ' ';
          e.replacement += surf;
          ++e.end;
          grew = true;
          continue;
        }
      }
      if (e.start > left_limit) {
        const std::string& surf = src.tokens[e.start - 1].surface;
        const std::string combined =
            surf + utf8::strip_whitespace(e.replacement);
        if (utf8::length(combined) > 1 && lex.contains(combined)) {
          e.replacement = surf + (" " + e.replacement);
          --e.start;
          grew = true;
        }
      }
    }
  }
  return edits;
}

namespace detail {

inline std::string join_strings(const std::vector<std::string>& tokens,
                                std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to && i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace detail

// Collapses groups of nearby edits that jointly permute their material into
// a single word-order edit, then widens the span over adjacent matched
// tokens that belong to the moved material (these are the glue tokens a
// human annotator includes in the switch span). A pure insertion at the
// group boundary may be split: the moved tokens join the word-order edit
// and the genuinely new ones stay behind as a plain insertion.
inline std::vector<Edit> detect_word_order(std::vector<Edit> edits,
                                           const Segmentation& src,
                                           std::size_t window = 20) {
  if (edits.size() < 2) return edits;
  std::vector<Edit> out;
  std::size_t i = 0;
  while (i < edits.size()) {
    bool collapsed = false;
    // widest group first
    std::size_t max_j = i;
    while (max_j + 1 < edits.size() &&
           edits[max_j + 1].start - edits[max_j].end <= window)
      ++max_j;
    for (std::size_t j = max_j; j > i && !collapsed; --j) {
      const std::size_t span_start = edits[i].start;
      const std::size_t span_end = edits[j].end;
      if (span_end <= span_start) continue;
      const std::string source_text = src.span_text(span_start, span_end);
      const auto source_multiset = detail::char_multiset(source_text);

      const auto first_tokens = detail::split_spaces(edits[i].replacement);
      const auto last_tokens = detail::split_spaces(edits[j].replacement);

      // candidate target texts: the whole group, then variants keeping only
      // a prefix of a trailing insertion / a suffix of a leading insertion
      struct Variant {
        std::size_t drop_first;  // leading tokens of edits[i] left behind
        std::size_t drop_last;   // trailing tokens of edits[j] left behind
      };
      std::vector<Variant> variants{{0, 0}};
      if (i != j && edits[j].is_insertion() && last_tokens.size() > 1)
        for (std::size_t drop = 1; drop < last_tokens.size(); ++drop)
          variants.push_back({0, drop});
      if (i != j && edits[i].is_insertion() && first_tokens.size() > 1)
        for (std::size_t drop = 1; drop < first_tokens.size(); ++drop)
          variants.push_back({drop, 0});

      for (const auto& variant : variants) {
        std::string target_text;
        std::size_t cursor = span_start;
        for (std::size_t k = i; k <= j; ++k) {
          for (std::size_t t = cursor; t < edits[k].start; ++t) {
            if (!target_text.empty()) target_text += ' ';
            target_text += src.tokens[t].surface;
          }
          std::string repl = edits[k].replacement;
          if (k == i && variant.drop_first > 0)
            repl = detail::join_strings(first_tokens, variant.drop_first,
                                        first_tokens.size());
          if (k == j && variant.drop_last > 0)
            repl = detail::join_strings(last_tokens, 0,
                                        last_tokens.size() - variant.drop_last);
          if (!repl.empty()) {
            if (!target_text.empty()) target_text += ' ';
            target_text += repl;
          }
          cursor = edits[k].end;
        }
        if (utf8::strip_whitespace(target_text) ==
            utf8::strip_whitespace(source_text))
          continue;
        if (detail::char_multiset(target_text) != source_multiset) continue;

        Edit wo;
        wo.start = span_start;
        wo.end = span_end;
        wo.replacement = target_text;
        wo.label = make_label(Op::WO);
        wo.annotator = edits[i].annotator;

        Edit leftover;  // surviving part of a split insertion
        bool has_leftover = false;
        bool leftover_first = false;
        if (variant.drop_last > 0) {
          leftover = edits[j];
          leftover.replacement = detail::join_strings(
              last_tokens, last_tokens.size() - variant.drop_last,
              last_tokens.size());
          has_leftover = true;
        } else if (variant.drop_first > 0) {
          leftover = edits[i];
          leftover.replacement =
              detail::join_strings(first_tokens, 0, variant.drop_first);
          has_leftover = true;
          leftover_first = true;
        }

        // widen over matched glue tokens belonging to the moved material
        auto contains_token = [&](const std::string& surf) {
          bool in_target = false;
          for (const auto& t : detail::split_spaces(wo.replacement))
            if (t == surf) in_target = true;
          if (!in_target) return false;
          for (std::size_t t = wo.start; t < wo.end; ++t)
            if (src.tokens[t].surface == surf) return true;
          return false;
        };
        std::size_t left_limit = out.empty() ? 0 : out.back().end;
        if (has_leftover && leftover_first) left_limit = leftover.end;
        std::size_t right_limit =
            j + 1 < edits.size() ? edits[j + 1].start : src.size();
        if (has_leftover && !leftover_first) right_limit = leftover.start;
        while (wo.start > left_limit &&
               contains_token(src.tokens[wo.start - 1].surface)) {
          --wo.start;
          wo.replacement = src.tokens[wo.start].surface + (" " + wo.replacement);
        }
        while (wo.end < right_limit && contains_token(src.tokens[wo.end].surface)) {
          wo.replacement += ' ';
          wo.replacement += src.tokens[wo.end].surface;
          ++wo.end;
        }

        if (has_leftover && leftover_first) out.push_back(leftover);
        out.push_back(std::move(wo));
        if (has_leftover && !leftover_first) out.push_back(leftover);
        i = j + 1;
        collapsed = true;
        break;
      }
    }
    if (!collapsed) {
      out.push_back(edits[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace cgec
