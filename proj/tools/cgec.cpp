// cgec: batch frontend for edit extraction, classification, m2 conversion
// and MaxMatch scoring of Chinese GEC data.
//
// Exit codes: 0 success, 1 usage error, 2 data error. Errors are printed to
// stderr as single `cgec: error: ...` lines.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cgec/align.hpp"
#include "cgec/classify.hpp"
#include "cgec/config.hpp"
#include "cgec/core.hpp"
#include "cgec/ingest.hpp"
#include "cgec/m2io.hpp"
#include "cgec/phonosim.hpp"
#include "cgec/score.hpp"
#include "cgec/segment.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cgec::data_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_input(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cgec::data_error("cannot write " + path);
  out << content;
}

struct Options {
  std::string lexicon_path, pinyin_path, glyphs_path;
  double alpha1 = -1.0, alpha2 = -1.0;
  std::string granularity = "char";
  std::string dialect = "refined";
  std::size_t window = 20;
  int threads = 1;
};

struct Loaded {
  cgec::Lexicon lexicon;
  cgec::PinyinLexicon pinyin;
  cgec::DecompositionShapeScorer shape{cgec::GlyphModel{}};
  cgec::Thresholds thresholds;
};

Loaded load_resources(const Options& opt, const cgec::Config& cfg) {
  Loaded loaded;
  loaded.lexicon = cgec::Lexicon::load(
      cgec::resolve_data_file("lexicon.tsv", opt.lexicon_path, cfg));
  loaded.pinyin = cgec::PinyinLexicon::load(
      cgec::resolve_data_file("pinyin.tsv", opt.pinyin_path, cfg));
  loaded.shape = cgec::DecompositionShapeScorer(cgec::GlyphModel::load(
      cgec::resolve_data_file("glyphs.tsv", opt.glyphs_path, cfg)));
  loaded.thresholds.alpha1 =
      opt.alpha1 >= 0 ? opt.alpha1 : std::stod(cfg.get("alpha1", "0.9"));
  loaded.thresholds.alpha2 =
      opt.alpha2 >= 0 ? opt.alpha2 : std::stod(cfg.get("alpha2", "0.9"));
  return loaded;
}

cgec::Segmentation segment_line(const std::string& line, cgec::Granularity g,
                                const cgec::Lexicon& lex) {
  if (g == cgec::Granularity::character) return cgec::segment_chars(line);
  if (line.find(' ') != std::string::npos) return cgec::parse_presegmented(line);
  return cgec::segment_words(line, lex);
}

cgec::AnnotationRecord annotate_one(const std::string& src,
                                    const std::vector<std::string>& refs,
                                    cgec::Granularity granularity,
                                    const Loaded& res, std::size_t window,
                                    std::size_t line_no) {
  try {
    return [&] {
      cgec::AnnotationRecord record;
      record.source_seg = segment_line(src, granularity, res.lexicon);
      const cgec::Providers providers{res.pinyin, res.shape, res.lexicon};
      int annotator = 0;
      for (const auto& ref : refs) {
        const cgec::Segmentation tgt = segment_line(ref, granularity, res.lexicon);
        const auto ops =
            cgec::align(record.source_seg, tgt, {}, &res.pinyin, &res.shape);
        auto edits = cgec::merge_edits(ops, record.source_seg, tgt, res.lexicon);
        edits =
            cgec::detect_word_order(std::move(edits), record.source_seg, window);
        for (auto& e : edits) {
          e.annotator = annotator;
          e.label =
              cgec::classify_edit(e, record.source_seg, res.thresholds, providers);
        }
        record.edit_sets[annotator] = std::move(edits);
        record.reference_lines[annotator] = tgt.joined();
        ++annotator;
      }
      if (refs.empty()) record.edit_sets[0] = {};
      return record;
    }();
  } catch (const cgec::error& e) {
    throw cgec::data_error("sentence " + std::to_string(line_no) + ": " + e.what());
  }
}

int cmd_annotate(const std::string& src_file, const std::string& hyp_file,
                 const std::string& parallel_file, bool ids, const Options& opt,
                 const std::string& out_path) {
  const cgec::Config cfg = cgec::Config::load_default();
  const Loaded res = load_resources(opt, cfg);
  const cgec::Granularity granularity = opt.granularity == "word"
                                            ? cgec::Granularity::word
                                            : cgec::Granularity::character;
  const cgec::Dialect dialect = opt.dialect == "cherrant" ? cgec::Dialect::cherrant
                                                          : cgec::Dialect::refined;

  std::vector<std::pair<std::string, std::vector<std::string>>> inputs;
  if (!parallel_file.empty()) {
    for (const auto& line : read_lines(parallel_file)) {
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::string field;
      std::istringstream split(line);
      while (std::getline(split, field, '\t')) fields.push_back(field);
      if (ids && !fields.empty()) fields.erase(fields.begin());
      if (fields.empty()) continue;
      std::vector<std::string> refs(fields.begin() + 1, fields.end());
      inputs.emplace_back(fields[0], std::move(refs));
    }
  } else {
    const auto src_lines = read_lines(src_file);
    const auto hyp_lines = read_lines(hyp_file);
    if (src_lines.size() != hyp_lines.size())
      throw cgec::data_error("line count mismatch: " +
                             std::to_string(src_lines.size()) + " vs " +
                             std::to_string(hyp_lines.size()));
    for (std::size_t i = 0; i < src_lines.size(); ++i)
      inputs.emplace_back(src_lines[i],
                          std::vector<std::string>{hyp_lines[i]});
  }

  std::vector<cgec::AnnotationRecord> records(inputs.size());
  const int threads = std::max(1, opt.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i)
      records[i] = annotate_one(inputs[i].first, inputs[i].second, granularity, res,
                                opt.window, i + 1);
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, [&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= inputs.size()) break;
          records[i] = annotate_one(inputs[i].first, inputs[i].second, granularity,
                                    res, opt.window, i + 1);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }
  write_output(out_path, cgec::write_m2(records, dialect));
  return 0;
}

int cmd_score(const std::string& hyp_path, const std::string& gold_path,
              double beta, bool table) {
  const auto hyp = cgec::parse_m2(read_input(hyp_path));
  const auto gold = cgec::parse_m2(read_input(gold_path));
  const cgec::ScoreReport report = cgec::score_corpus(hyp, gold, beta);
  std::cout << (table ? cgec::render_report_table(report)
                      : cgec::render_report_lines(report));
  return 0;
}

int cmd_convert(const std::string& input, const std::string& format,
                const std::string& emit, const Options& opt,
                const std::string& out_path) {
  const cgec::CorpusFormat fmt = cgec::corpus_format_from(format);
  const cgec::ParsedCorpus corpus = cgec::parse_corpus(read_input(input), fmt);
  for (const auto& w : corpus.warnings) std::cerr << "cgec: warning: " << w << "\n";
  if (emit == "parallel") {
    write_output(out_path, cgec::render_parallel(corpus));
    return 0;
  }
  if (emit != "m2") throw cgec::data_error("unknown --emit: " + emit);
  const cgec::Config cfg = cgec::Config::load_default();
  const Loaded res = load_resources(opt, cfg);
  const cgec::Providers providers{res.pinyin, res.shape, res.lexicon};
  // char-granularity m2 conventions: space-joined replacement tokens
  auto respace = [](std::string text) {
    const auto points =
        cgec::utf8::split_points(cgec::utf8::strip_whitespace(text));
    std::string spaced;
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (p) spaced += ' ';
      spaced += points[p];
    }
    return spaced;
  };
  std::vector<cgec::AnnotationRecord> records;
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    const auto& pair = corpus.pairs[i];
    cgec::AnnotationRecord record;
    record.source_seg = cgec::segment_chars(pair.source);
    // one annotator per reference; formats with explicit operations supply
    // annotator 0 directly, the rest are derived by alignment
    for (std::size_t k = 0; k < std::max<std::size_t>(1, pair.references.size());
         ++k) {
      std::vector<cgec::Edit> edits;
      if (k == 0 && !corpus.gold_edits[i].empty()) {
        edits = corpus.gold_edits[i];
      } else if (k < pair.references.size()) {
        const std::string& ref = pair.references[k];
        if (cgec::utf8::strip_whitespace(ref) !=
            cgec::utf8::strip_whitespace(pair.source)) {
          const cgec::Segmentation tgt = cgec::segment_chars(ref);
          edits = cgec::merge_edits(
              cgec::align(record.source_seg, tgt, {}, &res.pinyin, &res.shape),
              record.source_seg, tgt, res.lexicon);
          edits = cgec::detect_word_order(std::move(edits), record.source_seg);
        }
      }
      if (edits.empty() && k > 0) continue;  // identity reference
      for (auto& e : edits) {
        e.replacement = respace(e.replacement);
        e.annotator = static_cast<int>(k);
        if (e.label.raw.empty())
          e.label = cgec::classify_edit(e, record.source_seg, res.thresholds,
                                        providers);
      }
      record.edit_sets[static_cast<int>(k)] = std::move(edits);
    }
    records.push_back(std::move(record));
  }
  write_output(out_path, cgec::write_m2(records, cgec::Dialect::refined));
  return 0;
}

struct DiffReport {
  long sentences = 0;
  long edits_a = 0, edits_b = 0;
  long matched = 0;
  long type_only = 0;
  long boundary_only = 0;
  long order_repr = 0;
  long unmatched_a = 0, unmatched_b = 0;
};

// Local effect of an edit over a covering span of source tokens.
std::string local_effect(const cgec::Segmentation& seg, const cgec::Edit& e,
                         std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < e.start && i < seg.size(); ++i)
    out += seg.tokens[i].surface;
  out += cgec::utf8::strip_whitespace(e.replacement);
  for (std::size_t i = std::max(e.end, from); i < to && i < seg.size(); ++i)
    out += seg.tokens[i].surface;
  return out;
}

bool is_order_label(const cgec::ErrorLabel& label) {
  if (label.op == cgec::Op::WO) return true;
  const std::string& raw = label.raw;
  return raw == "W" || raw == "WO" || raw == "Switch" ||
         raw.rfind("W:", 0) == 0;
}

void diff_sentence(const cgec::AnnotationRecord& a, const cgec::AnnotationRecord& b,
                   DiffReport& report) {
  auto edits_of = [](const cgec::AnnotationRecord& r) {
    std::vector<cgec::Edit> out;
    for (const auto& [k, edits] : r.edit_sets)
      out.insert(out.end(), edits.begin(), edits.end());
    return out;
  };
  std::vector<cgec::Edit> ea = edits_of(a);
  std::vector<cgec::Edit> eb = edits_of(b);
  report.edits_a += static_cast<long>(ea.size());
  report.edits_b += static_cast<long>(eb.size());
  std::vector<bool> used_a(ea.size(), false), used_b(eb.size(), false);

  auto key = [](const cgec::Edit& e) {
    return std::make_tuple(e.start, e.end,
                           cgec::utf8::strip_whitespace(e.replacement));
  };
  auto type_of = [](const cgec::Edit& e) {
    return e.label.raw.empty()
               ? std::string(cgec::to_string(e.label.op)) +
                     (e.label.subtype.empty() ? "" : ":" + e.label.subtype)
               : e.label.raw;
  };

  // exact matches, then type-only matches
  for (std::size_t i = 0; i < ea.size(); ++i) {
    for (std::size_t j = 0; j < eb.size(); ++j) {
      if (used_b[j]) continue;
      if (key(ea[i]) == key(eb[j]) && type_of(ea[i]) == type_of(eb[j])) {
        used_a[i] = used_b[j] = true;
        ++report.matched;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (used_a[i]) continue;
    for (std::size_t j = 0; j < eb.size(); ++j) {
      if (used_b[j]) continue;
      if (key(ea[i]) == key(eb[j])) {
        used_a[i] = used_b[j] = true;
        ++report.type_only;
        break;
      }
    }
  }

  // order representation: one side's order edit covers several plain edits
  // on the other side with the same net effect
  auto try_order = [&](std::vector<cgec::Edit>& order_side,
                       std::vector<bool>& used_order,
                       std::vector<cgec::Edit>& plain_side,
                       std::vector<bool>& used_plain,
                       const cgec::Segmentation& seg) {
    for (std::size_t i = 0; i < order_side.size(); ++i) {
      if (used_order[i] || !is_order_label(order_side[i].label)) continue;
      std::vector<std::size_t> covered;
      for (std::size_t j = 0; j < plain_side.size(); ++j) {
        if (used_plain[j]) continue;
        if (plain_side[j].start >= order_side[i].start &&
            plain_side[j].end <= order_side[i].end)
          covered.push_back(j);
      }
      if (covered.empty()) continue;
      std::string effect;
      std::size_t cursor = order_side[i].start;
      bool overlap = false;
      for (std::size_t j : covered) {
        if (plain_side[j].start < cursor) overlap = true;
        for (std::size_t t = cursor; t < plain_side[j].start; ++t)
          effect += seg.tokens[t].surface;
        effect += cgec::utf8::strip_whitespace(plain_side[j].replacement);
        cursor = std::max(cursor, plain_side[j].end);
      }
      for (std::size_t t = cursor; t < order_side[i].end; ++t)
        effect += seg.tokens[t].surface;
      if (!overlap &&
          effect == cgec::utf8::strip_whitespace(order_side[i].replacement)) {
        used_order[i] = true;
        for (std::size_t j : covered) used_plain[j] = true;
        ++report.order_repr;
      }
    }
  };
  try_order(ea, used_a, eb, used_b, a.source_seg);
  try_order(eb, used_b, ea, used_a, a.source_seg);

  // boundary-only: different spans, same local effect
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (used_a[i]) continue;
    for (std::size_t j = 0; j < eb.size(); ++j) {
      if (used_b[j]) continue;
      const std::size_t from = std::min(ea[i].start, eb[j].start);
      const std::size_t to = std::max(ea[i].end, eb[j].end);
      if (ea[i].start > eb[j].end || eb[j].start > ea[i].end) continue;  // apart
      if (local_effect(a.source_seg, ea[i], from, to) ==
          local_effect(a.source_seg, eb[j], from, to)) {
        used_a[i] = used_b[j] = true;
        ++report.boundary_only;
        break;
      }
    }
  }

  for (std::size_t i = 0; i < ea.size(); ++i)
    if (!used_a[i]) ++report.unmatched_a;
  for (std::size_t j = 0; j < eb.size(); ++j)
    if (!used_b[j]) ++report.unmatched_b;
}

int cmd_diff(const std::string& path_a, const std::string& path_b) {
  const auto a = cgec::parse_m2(read_input(path_a));
  const auto b = cgec::parse_m2(read_input(path_b));
  if (a.size() != b.size())
    throw cgec::data_error("m2 files have different sentence counts");
  DiffReport report;
  report.sentences = static_cast<long>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].source_seg.text() != b[i].source_seg.text())
      throw cgec::data_error("source mismatch at sentence " + std::to_string(i + 1));
    diff_sentence(a[i], b[i], report);
  }
  const long total = std::max(report.edits_a, report.edits_b);
  std::cout << "sentences\t" << report.sentences << "\n";
  std::cout << "edits_a\t" << report.edits_a << "\n";
  std::cout << "edits_b\t" << report.edits_b << "\n";
  std::cout << "matched\t" << report.matched << "\n";
  std::cout << "type_only\t" << report.type_only << "\n";
  std::cout << "boundary_only\t" << report.boundary_only << "\n";
  std::cout << "order_representation\t" << report.order_repr << "\n";
  std::cout << "unmatched_a\t" << report.unmatched_a << "\n";
  std::cout << "unmatched_b\t" << report.unmatched_b << "\n";
  std::cout << "match_rate\t"
            << cgec::format_score(total == 0 ? 1.0
                                             : static_cast<double>(report.matched) /
                                                   static_cast<double>(total))
            << "\n";
  return 0;
}

int cmd_stats(const std::string& input, const std::string& format) {
  std::ostringstream out;
  if (format == "m2") {
    const auto records = cgec::parse_m2(read_input(input));
    long edits = 0;
    std::map<std::string, long> per_type;
    for (const auto& r : records) {
      for (const auto& [k, es] : r.edit_sets) {
        edits += static_cast<long>(es.size());
        for (const auto& e : es) {
          const std::string type =
              e.label.raw.empty()
                  ? std::string(cgec::to_string(e.label.op)) +
                        (e.label.subtype.empty() ? "" : ":" + e.label.subtype)
                  : e.label.raw;
          ++per_type[type];
        }
      }
    }
    out << "sentences\t" << records.size() << "\n";
    out << "edits\t" << edits << "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f",
                  records.empty() ? 0.0
                                  : static_cast<double>(edits) /
                                        static_cast<double>(records.size()));
    out << "edits_per_sentence\t" << buf << "\n";
    for (const auto& [type, count] : per_type)
      out << "type\t" << type << "\t" << count << "\n";
  } else {
    const cgec::CorpusFormat fmt = cgec::corpus_format_from(format);
    const cgec::ParsedCorpus corpus = cgec::parse_corpus(read_input(input), fmt);
    long refs = 0, edits = 0;
    std::map<std::string, long> per_type;
    for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
      refs += static_cast<long>(corpus.pairs[i].references.size());
      edits += static_cast<long>(corpus.gold_edits[i].size());
      for (const auto& span : corpus.gold_spans[i]) ++per_type[span.type];
      auto it = corpus.pairs[i].meta.find("error_type");
      if (it != corpus.pairs[i].meta.end()) ++per_type[it->second];
    }
    out << "sentences\t" << corpus.pairs.size() << "\n";
    out << "references\t" << refs << "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f",
                  corpus.pairs.empty() ? 0.0
                                       : static_cast<double>(refs) /
                                             static_cast<double>(corpus.pairs.size()));
    out << "references_per_sentence\t" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.3f",
                  corpus.pairs.empty() ? 0.0
                                       : static_cast<double>(edits) /
                                             static_cast<double>(corpus.pairs.size()));
    out << "edits_per_sentence\t" << buf << "\n";
    for (const auto& [type, count] : per_type)
      out << "type\t" << type << "\t" << count << "\n";
  }
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chinese grammatical-error edit annotation and scoring toolkit"};
  app.require_subcommand(1);

  Options opt;
  std::string out_path;

  auto add_resource_flags = [&](CLI::App* cmd) {
    cmd->add_option("--lexicon", opt.lexicon_path, "word<TAB>UPOS lexicon file");
    cmd->add_option("--pinyin", opt.pinyin_path, "pinyin table file");
    cmd->add_option("--glyphs", opt.glyphs_path, "glyph decomposition table file");
    cmd->add_option("--alpha1", opt.alpha1, "pinyin similarity threshold");
    cmd->add_option("--alpha2", opt.alpha2, "shape similarity threshold");
  };

  // annotate
  auto* annotate = app.add_subcommand(
      "annotate", "extract, classify and emit m2 edits for sentence pairs");
  std::string src_file, hyp_file, parallel_file;
  bool parallel_ids = false;
  annotate->add_option("src", src_file, "erroneous sentences, one per line");
  annotate->add_option("hyp", hyp_file, "corrected sentences, one per line");
  annotate->add_option("--parallel", parallel_file,
                       "tab-separated source<TAB>ref1<TAB>... file");
  annotate->add_flag("--ids", parallel_ids,
                     "first column of --parallel is an id column");
  annotate->add_option("--granularity", opt.granularity, "char or word")
      ->check(CLI::IsMember({"char", "word"}));
  annotate->add_option("--dialect", opt.dialect, "cherrant or refined")
      ->check(CLI::IsMember({"cherrant", "refined"}));
  annotate->add_option("--window", opt.window, "word-order detection window");
  annotate->add_option("--threads", opt.threads, "worker threads");
  annotate->add_option("--out", out_path, "output file (default stdout)");
  add_resource_flags(annotate);

  // score
  auto* score = app.add_subcommand("score", "MaxMatch-score hypothesis m2 vs gold m2");
  std::string hyp_m2, gold_m2;
  double beta = 0.5;
  bool table = false;
  score->add_option("hyp", hyp_m2, "system m2 file")->required();
  score->add_option("gold", gold_m2, "gold m2 file")->required();
  score->add_option("--beta", beta, "F-score beta (default 0.5)");
  score->add_flag("--table", table, "human-readable table instead of metric lines");

  // convert
  auto* convert = app.add_subcommand("convert", "convert a corpus file");
  std::string conv_input, conv_format, conv_emit = "parallel";
  convert->add_option("input", conv_input, "corpus file")->required();
  convert->add_option("--format", conv_format, "corpus format tag")->required();
  convert->add_option("--emit", conv_emit, "parallel or m2")
      ->check(CLI::IsMember({"parallel", "m2"}));
  convert->add_option("--out", out_path, "output file (default stdout)");
  add_resource_flags(convert);

  // diff
  auto* diff = app.add_subcommand("diff", "agreement report over two m2 files");
  std::string diff_a, diff_b;
  diff->add_option("a", diff_a, "first m2 file")->required();
  diff->add_option("b", diff_b, "second m2 file")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "distribution statistics");
  std::string stats_input, stats_format = "m2";
  stats->add_option("input", stats_input, "m2 or corpus file")->required();
  stats->add_option("--format", stats_format, "m2 or a corpus format tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "cgec: error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (annotate->parsed()) {
      if (parallel_file.empty() && (src_file.empty() || hyp_file.empty())) {
        std::cerr << "cgec: error: annotate needs src and hyp files, or --parallel\n";
        return 1;
      }
      return cmd_annotate(src_file, hyp_file, parallel_file, parallel_ids, opt,
                          out_path);
    }
    if (score->parsed()) return cmd_score(hyp_m2, gold_m2, beta, table);
    if (convert->parsed())
      return cmd_convert(conv_input, conv_format, conv_emit, opt, out_path);
    if (diff->parsed()) return cmd_diff(diff_a, diff_b);
    if (stats->parsed()) return cmd_stats(stats_input, stats_format);
  } catch (const cgec::error& e) {
    std::cerr << "cgec: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cgec: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
