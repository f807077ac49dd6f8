#pragma once

// MaxMatch scoring of system edits against multi-reference gold, plus the
// CGED-style detection/identification/position metrics. Precision and
// recall follow the established m2scorer conventions: 0/0 counts as 1.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cgec/core.hpp"
#include "cgec/m2io.hpp"

namespace cgec {

inline double f_beta(double p, double r, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * p + r;
  if (denom <= 0.0) return 0.0;
  return (1.0 + b2) * p * r / denom;
}

inline double safe_ratio(long num, long denom) {
  return denom == 0 ? 1.0 : static_cast<double>(num) / denom;
}

struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  std::size_t chosen_ref = 0;  // index into gold_sets
};

namespace detail {

using EditKey = std::tuple<std::size_t, std::size_t, std::string>;

inline EditKey edit_key(const Edit& e) {
  return {e.start, e.end, utf8::strip_whitespace(e.replacement)};
}

inline std::string type_key(const ErrorLabel& label) {
  if (!label.raw.empty()) return label.raw;
  if (label.op == Op::WO) return "WO";
  std::string out(to_string(label.op));
  if (!label.subtype.empty()) out += ":" + label.subtype;
  return out;
}

}  // namespace detail

// Matches system edits against each gold set by (start, end, normalized
// replacement) and keeps the set maximizing F_beta; ties pick the lower
// index. Per-type counts are accumulated into `per_type` when given.
inline MatchCounts max_match_counts(
    const std::vector<Edit>& system,
    const std::vector<std::vector<Edit>>& gold_sets, double beta = 0.5,
    std::map<std::string, TypeCounts>* per_type = nullptr) {
  MatchCounts best;
  double best_f = -1.0;
  std::vector<std::vector<const Edit*>> matched_gold(
      gold_sets.empty() ? 1 : gold_sets.size());
  const std::vector<Edit> empty_set;
  const std::size_t n_sets = std::max<std::size_t>(1, gold_sets.size());
  for (std::size_t g = 0; g < n_sets; ++g) {
    const std::vector<Edit>& gold = g < gold_sets.size() ? gold_sets[g] : empty_set;
    std::map<detail::EditKey, std::vector<const Edit*>> pool;
    for (const auto& e : gold) pool[detail::edit_key(e)].push_back(&e);
    long tp = 0;
    std::vector<const Edit*> hits;
    for (const auto& e : system) {
      auto it = pool.find(detail::edit_key(e));
      if (it != pool.end() && !it->second.empty()) {
        hits.push_back(it->second.back());
        it->second.pop_back();
        ++tp;
      }
    }
    const long fp = static_cast<long>(system.size()) - tp;
    const long fn = static_cast<long>(gold.size()) - tp;
    const double f = f_beta(safe_ratio(tp, tp + fp), safe_ratio(tp, tp + fn), beta);
    if (f > best_f) {
      best_f = f;
      best = {tp, fp, fn, g};
      matched_gold[g] = hits;
    } else {
      matched_gold[g].clear();
    }
  }
  if (per_type) {
    const std::vector<Edit>& gold =
        best.chosen_ref < gold_sets.size() ? gold_sets[best.chosen_ref] : empty_set;
    std::map<detail::EditKey, long> matched;
    for (const Edit* e : matched_gold[best.chosen_ref])
      ++matched[detail::edit_key(*e)];
    // a match counts toward the gold edit's type
    std::map<detail::EditKey, long> used;
    for (const auto& e : gold) {
      auto key = detail::edit_key(e);
      if (used[key] < matched[key]) {
        ++used[key];
        ++(*per_type)[detail::type_key(e.label)].tp;
      } else {
        ++(*per_type)[detail::type_key(e.label)].fn;
      }
    }
    std::map<detail::EditKey, long> sys_used;
    for (const auto& e : system) {
      auto key = detail::edit_key(e);
      if (sys_used[key] < matched[key]) {
        ++sys_used[key];
      } else {
        ++(*per_type)[detail::type_key(e.label)].fp;
      }
    }
  }
  return best;
}

namespace detail {

inline const std::vector<Edit>& first_edit_set(const AnnotationRecord& rec) {
  static const std::vector<Edit> empty;
  if (rec.edit_sets.empty()) return empty;
  return rec.edit_sets.begin()->second;
}

}  // namespace detail

// Corpus-level MaxMatch: per-sentence counts against the best reference,
// summed, then P/R/F over the sums.
inline ScoreReport score_corpus(const std::vector<AnnotationRecord>& system,
                                const std::vector<AnnotationRecord>& gold,
                                double beta = 0.5) {
  if (system.size() != gold.size())
    throw data_error("system has " + std::to_string(system.size()) +
                     " sentences, gold has " + std::to_string(gold.size()));
  ScoreReport report;
  report.beta = beta;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto& sys_seg = system[i].source_seg;
    const auto& gold_seg = gold[i].source_seg;
    if (sys_seg.joined() != gold_seg.joined())
      throw data_error("source mismatch at sentence " + std::to_string(i + 1));
    if (i == 0) report.granularity = gold_seg.granularity;
    std::vector<std::vector<Edit>> gold_sets;
    for (const auto& [annotator, edits] : gold[i].edit_sets)
      gold_sets.push_back(edits);
    const auto counts = max_match_counts(detail::first_edit_set(system[i]),
                                         gold_sets, beta, &report.per_type);
    report.tp += counts.tp;
    report.fp += counts.fp;
    report.fn += counts.fn;
  }
  report.precision = safe_ratio(report.tp, report.tp + report.fp);
  report.recall = safe_ratio(report.tp, report.tp + report.fn);
  report.f = f_beta(report.precision, report.recall, beta);
  return report;
}

// ---------------------------------------------------------------------------
// CGED-style span metrics

struct DetectionLevels {
  double detection = 1.0;       // sentence-level binary error flag
  double identification = 1.0;  // per-sentence error-type multiset
  double position = 1.0;        // exact (start, end, type) triples
};

// Three F1 scores over aligned per-sentence span lists.
inline DetectionLevels detection_levels(
    const std::vector<std::vector<GoldSpan>>& system,
    const std::vector<std::vector<GoldSpan>>& gold) {
  if (system.size() != gold.size())
    throw data_error("detection_levels: sentence counts differ");
  long det_tp = 0, det_fp = 0, det_fn = 0;
  long idn_tp = 0, idn_fp = 0, idn_fn = 0;
  long pos_tp = 0, pos_fp = 0, pos_fn = 0;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const bool sys_flag = !system[i].empty();
    const bool gold_flag = !gold[i].empty();
    if (sys_flag && gold_flag) ++det_tp;
    if (sys_flag && !gold_flag) ++det_fp;
    if (!sys_flag && gold_flag) ++det_fn;

    std::map<std::string, long> sys_types, gold_types;
    for (const auto& s : system[i]) ++sys_types[s.type];
    for (const auto& s : gold[i]) ++gold_types[s.type];
    for (const auto& [type, count] : sys_types) {
      const long g = gold_types.count(type) ? gold_types[type] : 0;
      idn_tp += std::min(count, g);
      idn_fp += std::max(0L, count - g);
    }
    for (const auto& [type, count] : gold_types) {
      const long s = sys_types.count(type) ? sys_types[type] : 0;
      idn_fn += std::max(0L, count - s);
    }

    std::map<std::tuple<std::size_t, std::size_t, std::string>, long> sys_triples,
        gold_triples;
    for (const auto& s : system[i]) ++sys_triples[{s.start, s.end, s.type}];
    for (const auto& s : gold[i]) ++gold_triples[{s.start, s.end, s.type}];
    for (const auto& [t, count] : sys_triples) {
      const long g = gold_triples.count(t) ? gold_triples[t] : 0;
      pos_tp += std::min(count, g);
      pos_fp += std::max(0L, count - g);
    }
    for (const auto& [t, count] : gold_triples) {
      const long s = sys_triples.count(t) ? sys_triples[t] : 0;
      pos_fn += std::max(0L, count - s);
    }
  }
  auto f1 = [](long tp, long fp, long fn) {
    return f_beta(safe_ratio(tp, tp + fp), safe_ratio(tp, tp + fn), 1.0);
  };
  return {f1(det_tp, det_fp, det_fn), f1(idn_tp, idn_fp, idn_fn),
          f1(pos_tp, pos_fp, pos_fn)};
}

// ---------------------------------------------------------------------------
// Report rendering

inline std::string format_beta(double beta) {
  std::ostringstream out;
  out << beta;
  return out.str();
}

inline std::string format_score(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

// machine-readable: one metric<TAB>value line each, then per-type counts
// sorted by descending fn.
inline std::string render_report_lines(const ScoreReport& report) {
  std::ostringstream out;
  out << "TP\t" << report.tp << "\n";
  out << "FP\t" << report.fp << "\n";
  out << "FN\t" << report.fn << "\n";
  out << "Precision\t" << format_score(report.precision) << "\n";
  out << "Recall\t" << format_score(report.recall) << "\n";
  out << "F" << format_beta(report.beta) << "\t" << format_score(report.f) << "\n";
  std::vector<std::pair<std::string, TypeCounts>> types(report.per_type.begin(),
                                                        report.per_type.end());
  std::stable_sort(types.begin(), types.end(),
                   [](const auto& a, const auto& b) { return a.second.fn > b.second.fn; });
  for (const auto& [type, counts] : types)
    out << "type\t" << type << "\t" << counts.tp << "\t" << counts.fp << "\t"
        << counts.fn << "\n";
  return out.str();
}

inline std::string render_report_table(const ScoreReport& report) {
  std::ostringstream out;
  out << "granularity : " << to_string(report.granularity) << "\n";
  out << "TP / FP / FN: " << report.tp << " / " << report.fp << " / " << report.fn
      << "\n";
  out << "Precision   : " << format_score(report.precision) << "\n";
  out << "Recall      : " << format_score(report.recall) << "\n";
  out << "F" << format_beta(report.beta) << "        : " << format_score(report.f)
      << "\n";
  if (!report.per_type.empty()) {
    out << "\n" << std::left << std::setw(18) << "type" << std::right
        << std::setw(6) << "tp" << std::setw(6) << "fp" << std::setw(6) << "fn"
        << "\n";
    std::vector<std::pair<std::string, TypeCounts>> types(report.per_type.begin(),
                                                          report.per_type.end());
    std::stable_sort(types.begin(), types.end(), [](const auto& a, const auto& b) {
      return a.second.fn > b.second.fn;
    });
    for (const auto& [type, counts] : types)
      out << std::left << std::setw(18) << type << std::right << std::setw(6)
          << counts.tp << std::setw(6) << counts.fp << std::setw(6) << counts.fn
          << "\n";
  }
  return out.str();
}

}  // namespace cgec
