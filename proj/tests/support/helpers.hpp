#pragma once

// Shared test scaffolding: fixture paths, lazily loaded bundled resources,
// independent oracles (exhaustive alignment search, greedy segmentation by
// enumeration) and deterministic random-sentence generators.

#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cgec/align.hpp"
#include "cgec/classify.hpp"
#include "cgec/phonosim.hpp"
#include "cgec/segment.hpp"

#ifndef CGEC_SOURCE_DIR
#error "CGEC_SOURCE_DIR must be defined by the build"
#endif

namespace testsup {

inline std::string source_dir() { return CGEC_SOURCE_DIR; }

inline std::string fixture_path(const std::string& name) {
  return source_dir() + "/tests/fixtures/" + name;
}

inline std::string data_path(const std::string& name) {
  return source_dir() + "/data/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Resources {
  cgec::Lexicon lexicon;
  cgec::PinyinLexicon pinyin;
  cgec::DecompositionShapeScorer shape;
  cgec::Thresholds thresholds;

  Resources()
      : lexicon(cgec::Lexicon::load(data_path("lexicon.tsv"))),
        pinyin(cgec::PinyinLexicon::load(data_path("pinyin.tsv"))),
        shape(cgec::GlyphModel::load(data_path("glyphs.tsv"))) {}

  cgec::Providers providers() const { return {pinyin, shape, lexicon}; }
};

inline const Resources& resources() {
  static Resources res;
  return res;
}

// ---------------------------------------------------------------------------
// Oracles

// Exhaustive minimal-cost script search over match/substitute/delete/
// insert/transpose, independent of the DP implementation. Only usable for
// short sequences.
inline double oracle_min_cost(const cgec::Segmentation& src,
                              const cgec::Segmentation& tgt,
                              const cgec::CostConfig& cfg,
                              const cgec::PinyinLexicon* pinyin = nullptr,
                              const cgec::ShapeScorer* shape = nullptr) {
  const std::size_t m = src.size(), n = tgt.size();
  double best = 1e18;
  // depth-first over (i, j) consuming prefixes
  std::function<void(std::size_t, std::size_t, double)> go =
      [&](std::size_t i, std::size_t j, double cost) {
        if (cost >= best) return;
        if (i == m && j == n) {
          best = cost;
          return;
        }
        if (i < m && j < n && src.tokens[i].surface == tgt.tokens[j].surface)
          go(i + 1, j + 1, cost);
        if (i + 1 < m && j + 1 < n &&
            src.tokens[i].surface == tgt.tokens[j + 1].surface &&
            src.tokens[i + 1].surface == tgt.tokens[j].surface &&
            src.tokens[i].surface != tgt.tokens[j].surface)
          go(i + 2, j + 2, cost + cfg.transpose_cost);
        if (i < m && j < n && src.tokens[i].surface != tgt.tokens[j].surface)
          go(i + 1, j + 1,
             cost + cgec::detail::substitution_cost(src.tokens[i].surface,
                                                    tgt.tokens[j].surface, cfg,
                                                    pinyin, shape));
        if (i < m) go(i + 1, j, cost + cfg.delete_cost);
        if (j < n) go(i, j + 1, cost + cfg.insert_cost);
      };
  go(0, 0, 0.0);
  return best;
}

// Greedy forward maximum match by brute-force candidate enumeration.
inline std::vector<std::string> oracle_greedy_segment(const std::string& text,
                                                      const cgec::Lexicon& lex) {
  const auto points = cgec::utf8::split_points(text);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < points.size()) {
    const char32_t cp = cgec::utf8::decode(points[i]).front();
    if (cgec::utf8::is_space(cp)) {
      ++i;
      continue;
    }
    if (cgec::utf8::is_punct(cp)) {
      out.push_back(points[i]);
      ++i;
      continue;
    }
    std::size_t best_len = 1;
    for (std::size_t len = points.size() - i; len >= 2; --len) {
      std::string cand;
      bool broken = false;
      for (std::size_t k = 0; k < len; ++k) {
        const char32_t c = cgec::utf8::decode(points[i + k]).front();
        if (cgec::utf8::is_space(c) || cgec::utf8::is_punct(c)) {
          broken = true;
          break;
        }
        cand += points[i + k];
      }
      if (!broken && lex.contains(cand)) {
        best_len = len;
        break;
      }
    }
    std::string word;
    for (std::size_t k = 0; k < best_len; ++k) word += points[i + k];
    out.push_back(word);
    i += best_len;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random data

inline const std::vector<std::string>& char_pool() {
  static std::vector<std::string> pool = [] {
    std::vector<std::string> chars;
    std::istringstream in(read_file(data_path("pinyin.tsv")));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab != std::string::npos) chars.push_back(line.substr(0, tab));
    }
    return chars;
  }();
  return pool;
}

inline std::string random_sentence(std::mt19937& rng, std::size_t min_len,
                                   std::size_t max_len) {
  const auto& pool = char_pool();
  std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const std::size_t len = len_dist(rng);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) out += pool[pick(rng)];
  return out;
}

// Random in-place mutation: substitution, deletion, insertion or adjacent
// swap over code points.
inline std::string mutate(const std::string& sentence, std::mt19937& rng,
                          int mutations) {
  auto points = cgec::utf8::split_points(sentence);
  const auto& pool = char_pool();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int k = 0; k < mutations && !points.empty(); ++k) {
    std::uniform_int_distribution<std::size_t> pos_dist(0, points.size() - 1);
    const std::size_t pos = pos_dist(rng);
    switch (rng() % 4) {
      case 0: points[pos] = pool[pick(rng)]; break;
      case 1:
        if (points.size() > 1) points.erase(points.begin() + pos);
        break;
      case 2: points.insert(points.begin() + pos, pool[pick(rng)]); break;
      case 3:
        if (pos + 1 < points.size()) std::swap(points[pos], points[pos + 1]);
        break;
    }
  }
  std::string out;
  for (const auto& p : points) out += p;
  return out.empty() ? sentence : out;
}

}  // namespace testsup
