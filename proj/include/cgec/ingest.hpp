#pragma once

// Corpus ingestion: parses the CGED XML releases, NLPCC parallel lines and
// the JSON-based corpora (FCGEC, FlaCGEC, YACLC, CCTC, NaCGEC, CEFE) into
// SentencePairs plus character-indexed gold edits where the format provides
// spans. Text passes through untouched: no punctuation normalization, no
// script conversion.

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cgec/align.hpp"
#include "cgec/core.hpp"
#include "cgec/segment.hpp"
#include "cgec/xml.hpp"

namespace cgec {

enum class CorpusFormat {
  cged2014,
  cged2015,
  cged2016plus,
  cged2020,
  nlpcc_train,
  nlpcc_seg,
  fcgec,
  flacgec,
  yaclc,
  cctc,
  nacgec,
  cefe,
};

inline CorpusFormat corpus_format_from(std::string_view tag) {
  if (tag == "cged2014") return CorpusFormat::cged2014;
  if (tag == "cged2015") return CorpusFormat::cged2015;
  if (tag == "cged2016plus" || tag == "cged2016") return CorpusFormat::cged2016plus;
  if (tag == "cged2020") return CorpusFormat::cged2020;
  if (tag == "nlpcc-train") return CorpusFormat::nlpcc_train;
  if (tag == "nlpcc-seg") return CorpusFormat::nlpcc_seg;
  if (tag == "fcgec") return CorpusFormat::fcgec;
  if (tag == "flacgec") return CorpusFormat::flacgec;
  if (tag == "yaclc") return CorpusFormat::yaclc;
  if (tag == "cctc") return CorpusFormat::cctc;
  if (tag == "nacgec") return CorpusFormat::nacgec;
  if (tag == "cefe") return CorpusFormat::cefe;
  throw data_error("unknown corpus format: " + std::string(tag));
}

struct ParsedCorpus {
  std::vector<SentencePair> pairs;
  std::vector<std::vector<Edit>> gold_edits;    // aligned with pairs
  std::vector<std::vector<GoldSpan>> gold_spans;  // aligned with pairs
  std::vector<std::string> warnings;

  void push(SentencePair pair, std::vector<Edit> edits = {},
            std::vector<GoldSpan> spans = {}) {
    if (utf8::strip_whitespace(pair.source).empty())
      throw data_error("empty source sentence in record " + pair.id);
    pairs.push_back(std::move(pair));
    gold_edits.push_back(std::move(edits));
    gold_spans.push_back(std::move(spans));
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Minimal char-level edit script between two sentences; reconstruction of
// `target` from the returned edits is guaranteed by the aligner round trip.
inline std::vector<Edit> diff_edits(const std::string& source,
                                    const std::string& target) {
  if (utf8::strip_whitespace(source) == utf8::strip_whitespace(target)) return {};
  const Segmentation src = segment_chars(source);
  const Segmentation tgt = segment_chars(target);
  static const Lexicon empty_lexicon;
  const auto ops = align(src, tgt);
  return merge_edits(ops, src, tgt, empty_lexicon);
}

inline std::size_t visible_length(const std::string& s) {
  return utf8::length(utf8::strip_whitespace(s));
}

// CGED offsets are 1-based over visible characters.
inline GoldSpan convert_cged_span(long start_off, long end_off,
                                  const std::string& type,
                                  const std::string& sentence) {
  if (start_off < 1 || end_off < start_off)
    throw data_error("bad CGED offsets " + std::to_string(start_off) + "-" +
                     std::to_string(end_off));
  const std::size_t n = visible_length(sentence);
  if (static_cast<std::size_t>(end_off) > n)
    throw data_error("CGED offset " + std::to_string(end_off) +
                     " outside sentence of length " + std::to_string(n));
  return GoldSpan{static_cast<std::size_t>(start_off - 1),
                  static_cast<std::size_t>(end_off), type};
}

inline void check_type(const std::string& type,
                       const std::vector<std::string>& allowed) {
  for (const auto& a : allowed)
    if (a == type) return;
  throw data_error("unknown error TYPE: " + type);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

// Splits on ASCII and fullwidth commas (CGED 2020 answer lists use both).
inline std::vector<std::string> split_alternatives(const std::string& s) {
  std::vector<std::string> out;
  std::string current;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const char32_t cp = utf8::next(s, pos);
    if (cp == U',' || cp == 0xFF0C) {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current.append(s.substr(start, pos - start));
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CGED (XML)

inline ParsedCorpus parse_cged(std::string_view text, CorpusFormat variant) {
  const xml::Node root = xml::parse(text);
  ParsedCorpus out;

  if (variant == CorpusFormat::cged2014) {
    static const std::vector<std::string> types = {"Selection", "Missing",
                                                   "Disorder", "Redundant"};
    for (const auto& essay : root.children) {
      if (essay.name != "ESSAY") continue;
      std::map<std::string, std::string> sentences;  // id -> text
      std::vector<std::string> order;
      if (const auto* textnode = essay.child("TEXT")) {
        for (const auto* s : textnode->all("SENTENCE")) {
          const std::string id = s->attr("id");
          sentences[id] = detail::trim(s->text);
          order.push_back(id);
        }
      }
      std::map<std::string, std::vector<std::pair<std::string, std::string>>>
          mistakes;  // id -> (type, correction)
      for (const auto* m : essay.all("MISTAKE")) {
        const std::string id = m->attr("id");
        const auto* type = m->child("TYPE");
        const auto* corr = m->child("CORRECTION");
        if (!type || !corr) throw data_error("MISTAKE without TYPE/CORRECTION");
        const std::string type_text = detail::trim(type->text);
        detail::check_type(type_text, types);
        mistakes[id].emplace_back(type_text, detail::trim(corr->text));
      }
      for (const auto& id : order) {
        SentencePair pair;
        pair.id = id;
        pair.source = sentences[id];
        pair.origin = "cged2014";
        pair.meta["title"] = essay.attr("title");
        std::vector<Edit> edits;
        std::string type_list;
        for (const auto& [type, corr] : mistakes[id]) {
          pair.references.push_back(corr);
          if (!type_list.empty()) type_list += ",";
          type_list += type;
        }
        if (!type_list.empty()) pair.meta["type"] = type_list;
        if (!pair.references.empty())
          edits = detail::diff_edits(pair.source, pair.references.front());
        out.push(std::move(pair), std::move(edits));
      }
    }
    return out;
  }

  if (variant == CorpusFormat::cged2015) {
    static const std::vector<std::string> types = {
        "Missing", "Permutation", "Addition", "Deletion", "Substitution"};
    for (const auto& doc : root.children) {
      if (doc.name != "DOC") continue;
      const auto* sentence = doc.child("SENTENCE");
      if (!sentence) throw data_error("DOC without SENTENCE");
      SentencePair pair;
      pair.id = sentence->attr("id");
      pair.source = detail::trim(sentence->text);
      pair.origin = "cged2015";
      std::vector<GoldSpan> spans;
      std::string offsets;
      for (const auto* m : doc.all("MISTAKE")) {
        const auto* type = m->child("TYPE");
        const auto* corr = m->child("CORRECTION");
        if (!type) throw data_error("MISTAKE without TYPE");
        const std::string type_text = detail::trim(type->text);
        detail::check_type(type_text, types);
        spans.push_back(detail::convert_cged_span(
            std::stol(m->attr("start_off", "0")), std::stol(m->attr("end_off", "0")),
            type_text, pair.source));
        if (!offsets.empty()) offsets += ";";
        offsets += m->attr("start_off") + "-" + m->attr("end_off") + ":" + type_text;
        if (corr) pair.references.push_back(detail::trim(corr->text));
      }
      if (!offsets.empty()) pair.meta["errors"] = offsets;
      std::vector<Edit> edits;
      if (!pair.references.empty())
        edits = detail::diff_edits(pair.source, pair.references.front());
      out.push(std::move(pair), std::move(edits), std::move(spans));
    }
    return out;
  }

  // cged2016plus and cged2020 share one layout; 2020 adds `answer`.
  static const std::vector<std::string> types201x = {"R", "M", "S", "W"};
  for (const auto& doc : root.children) {
    if (doc.name != "DOC") continue;
    const auto* textnode = doc.child("TEXT");
    const auto* correction = doc.child("CORRECTION");
    if (!textnode) throw data_error("DOC without TEXT");
    SentencePair pair;
    pair.id = textnode->attr("id");
    pair.source = detail::trim(textnode->text);
    pair.origin = variant == CorpusFormat::cged2020 ? "cged2020" : "cged2016plus";
    if (correction) pair.references.push_back(detail::trim(correction->text));
    std::vector<GoldSpan> spans;
    std::string offsets;
    int answer_index = 0;
    for (const auto* err : doc.all("ERROR")) {
      const std::string type = err->attr("type");
      detail::check_type(type, types201x);
      spans.push_back(detail::convert_cged_span(std::stol(err->attr("start_off", "0")),
                                                std::stol(err->attr("end_off", "0")),
                                                type, pair.source));
      if (!offsets.empty()) offsets += ";";
      offsets += err->attr("start_off") + "-" + err->attr("end_off") + ":" + type;
      const std::string answer = err->attr("answer");
      if (!answer.empty()) {
        std::string joined;
        for (const auto& alt : detail::split_alternatives(answer)) {
          if (!joined.empty()) joined += ",";
          joined += alt;
        }
        pair.meta["answer" + std::to_string(answer_index)] = joined;
      }
      ++answer_index;
    }
    if (!offsets.empty()) pair.meta["errors"] = offsets;
    std::vector<Edit> edits;
    if (!pair.references.empty())
      edits = detail::diff_edits(pair.source, pair.references.front());
    out.push(std::move(pair), std::move(edits), std::move(spans));
  }
  return out;
}

// ---------------------------------------------------------------------------
// NLPCC 2018

// id<TAB>k<TAB>source<TAB>correction1..correctionk
inline SentencePair parse_nlpcc_train_line(const std::string& line,
                                           std::size_t lineno = 0) {
  auto fields = detail::split(line, '\t');
  while (!fields.empty() && fields.back().empty()) fields.pop_back();
  if (fields.size() < 3)
    throw parse_error("NLPCC line needs id<TAB>count<TAB>sentence", lineno);
  SentencePair pair;
  pair.id = fields[0];
  pair.origin = "nlpcc-train";
  long k = 0;
  try {
    k = std::stol(fields[1]);
  } catch (const std::exception&) {
    throw parse_error("NLPCC correction count is not a number", lineno);
  }
  pair.source = fields[2];
  for (std::size_t i = 3; i < fields.size(); ++i)
    pair.references.push_back(fields[i]);
  if (static_cast<long>(pair.references.size()) != k)
    throw parse_error("NLPCC line declares " + std::to_string(k) +
                          " corrections but carries " +
                          std::to_string(pair.references.size()),
                      lineno);
  return pair;
}

inline ParsedCorpus parse_nlpcc_train(std::string_view text) {
  ParsedCorpus out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push(parse_nlpcc_train_line(line, lineno));
  }
  return out;
}

// Pre-segmented source sentences, one per line, no references.
inline ParsedCorpus parse_nlpcc_seg(std::string_view text) {
  ParsedCorpus out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    SentencePair pair;
    pair.id = std::to_string(lineno);
    pair.source = line;
    pair.origin = "nlpcc-seg";
    pair.meta["segmented"] = "1";
    out.push(std::move(pair));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON corpora

namespace detail {

inline nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("bad JSON: ") + e.what());
  }
}

// Accepts a single object, an array, an id->record map, or JSONL; returns
// (id, record) pairs in file order.
inline std::vector<std::pair<std::string, nlohmann::json>> json_records(
    std::string_view text, const std::vector<std::string>& record_fields) {
  auto looks_like_record = [&](const nlohmann::json& j) {
    if (!j.is_object()) return false;
    for (const auto& f : record_fields)
      if (j.contains(f)) return true;
    return false;
  };
  std::vector<std::pair<std::string, nlohmann::json>> records;
  nlohmann::json parsed;
  bool whole = true;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    whole = false;
  }
  if (whole) {
    if (parsed.is_array()) {
      std::size_t i = 0;
      for (auto& item : parsed) records.emplace_back(std::to_string(i++), item);
    } else if (looks_like_record(parsed)) {
      records.emplace_back("", parsed);
    } else if (parsed.is_object()) {
      for (auto it = parsed.begin(); it != parsed.end(); ++it)
        records.emplace_back(it.key(), it.value());
    } else {
      throw data_error("unsupported JSON layout");
    }
    return records;
  }
  // JSONL fallback
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    try {
      records.emplace_back(std::to_string(lineno), nlohmann::json::parse(trimmed));
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(std::string("bad JSON: ") + e.what(), lineno);
    }
  }
  return records;
}

inline std::string json_string(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long>());
  return j.dump();
}

}  // namespace detail

// FCGEC: id -> {sentence, error_flag, error_type, operation}. The operation
// field holds a JSON list (often doubly encoded as a string); each list
// element is one alternative correction described by Delete / Insert /
// Modify / Switch operations over original character positions.
inline ParsedCorpus parse_fcgec(std::string_view text) {
  ParsedCorpus out;
  for (auto& [id, record] : detail::json_records(text, {"sentence"})) {
    if (!record.is_object() || !record.contains("sentence"))
      throw data_error("FCGEC record without sentence: " + id);
    SentencePair pair;
    pair.id = id;
    pair.origin = "fcgec";
    pair.source = record["sentence"].get<std::string>();
    const long flag = record.contains("error_flag")
                          ? (record["error_flag"].is_string()
                                 ? std::stol(record["error_flag"].get<std::string>())
                                 : record["error_flag"].get<long>())
                          : 1;
    pair.meta["error_flag"] = std::to_string(flag);
    if (record.contains("error_type"))
      pair.meta["error_type"] = detail::json_string(record["error_type"]);
    if (flag == 0) {
      pair.references.push_back(pair.source);
      out.push(std::move(pair));
      continue;
    }
    nlohmann::json ops = record.contains("operation") ? record["operation"]
                                                      : nlohmann::json::array();
    if (ops.is_string()) ops = detail::parse_json(ops.get<std::string>());
    if (!ops.is_array()) throw data_error("FCGEC operation must be a list: " + id);

    const Segmentation seg = segment_chars(pair.source);
    const auto points = utf8::split_points(utf8::strip_whitespace(pair.source));
    std::vector<Edit> first_edits;
    for (const auto& alternative : ops) {
      std::vector<Edit> edits;
      auto check_pos = [&](long p) {
        if (p < 0 || static_cast<std::size_t>(p) >= points.size())
          throw data_error("FCGEC position " + std::to_string(p) +
                           " beyond sentence length in " + id);
      };
      if (alternative.contains("Delete")) {
        std::vector<long> positions =
            alternative["Delete"].get<std::vector<long>>();
        std::sort(positions.begin(), positions.end());
        std::size_t i = 0;
        while (i < positions.size()) {
          std::size_t j = i;
          while (j + 1 < positions.size() && positions[j + 1] == positions[j] + 1)
            ++j;
          check_pos(positions[i]);
          check_pos(positions[j]);
          Edit e;
          e.start = static_cast<std::size_t>(positions[i]);
          e.end = static_cast<std::size_t>(positions[j]) + 1;
          e.label = make_label(Op::U);
          edits.push_back(std::move(e));
          i = j + 1;
        }
      }
      if (alternative.contains("Insert")) {
        for (const auto& ins : alternative["Insert"]) {
          const long pos = ins.at("pos").get<long>();
          check_pos(pos);
          Edit e;
          e.start = e.end = static_cast<std::size_t>(pos) + 1;  // after pos
          e.replacement = ins.at("label").get<std::string>();
          e.label = make_label(Op::M);
          edits.push_back(std::move(e));
        }
      }
      if (alternative.contains("Modify")) {
        for (const auto& mod : alternative["Modify"]) {
          const long pos = mod.at("pos").get<long>();
          check_pos(pos);
          const std::string label = mod.at("label").get<std::string>();
          std::size_t span = utf8::length(label);
          if (mod.contains("tag")) {
            const std::string tag = mod["tag"].get<std::string>();
            const auto underscore = tag.rfind('_');
            if (underscore != std::string::npos) {
              try {
                span = std::stoul(tag.substr(underscore + 1));
              } catch (const std::exception&) {
              }
            }
          }
          check_pos(pos + static_cast<long>(span) - 1);
          Edit e;
          e.start = static_cast<std::size_t>(pos);
          e.end = e.start + span;
          e.replacement = label;
          e.label = make_label(Op::R);
          edits.push_back(std::move(e));
        }
      }
      if (alternative.contains("Switch")) {
        const std::vector<long> order =
            alternative["Switch"].get<std::vector<long>>();
        if (!order.empty()) {
          long lo = order.front(), hi = order.front();
          for (long p : order) {
            check_pos(p);
            lo = std::min(lo, p);
            hi = std::max(hi, p);
          }
          if (static_cast<long>(order.size()) != hi - lo + 1)
            throw data_error("FCGEC Switch indices must cover a contiguous span in " +
                             id);
          std::string repl;
          for (long p : order) repl += points[static_cast<std::size_t>(p)];
          Edit e;
          e.start = static_cast<std::size_t>(lo);
          e.end = static_cast<std::size_t>(hi) + 1;
          e.replacement = repl;
          e.label = make_label(Op::WO);
          edits.push_back(std::move(e));
        }
      }
      std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
        return a.start < b.start || (a.start == b.start && a.end < b.end);
      });
      pair.references.push_back(apply_edits(seg, edits));
      if (first_edits.empty()) first_edits = std::move(edits);
    }
    out.push(std::move(pair), std::move(first_edits));
  }
  return out;
}

// FlaCGEC: id -> {source, target, operation, annotation}. Annotation edits
// are `start end|||TYPE|||replacement` with 0-based inclusive offsets; TYPE
// is kept verbatim as an opaque label.
inline ParsedCorpus parse_flacgec(std::string_view text) {
  ParsedCorpus out;
  for (auto& [id, record] : detail::json_records(text, {"source"})) {
    if (!record.is_object() || !record.contains("source"))
      throw data_error("FlaCGEC record without source: " + id);
    SentencePair pair;
    pair.id = id;
    pair.origin = "flacgec";
    pair.source = record["source"].get<std::string>();
    if (record.contains("target"))
      pair.references.push_back(record["target"].get<std::string>());
    const std::size_t source_len = detail::visible_length(pair.source);
    std::vector<Edit> edits;
    const std::string annotation =
        record.contains("annotation") ? record["annotation"].get<std::string>() : "";
    if (!detail::trim(annotation).empty()) {
      for (const auto& part : detail::split(annotation, ';')) {
        if (detail::trim(part).empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
          const auto next = part.find("|||", pos);
          if (next == std::string::npos) {
            fields.push_back(part.substr(pos));
            break;
          }
          fields.push_back(part.substr(pos, next - pos));
          pos = next + 3;
        }
        if (fields.size() < 3)
          throw data_error("FlaCGEC annotation needs start end|||TYPE|||text: " +
                           part);
        std::istringstream span(fields[0]);
        long start = 0, end = 0;
        if (!(span >> start >> end) || start < 0 || end < start)
          throw data_error("FlaCGEC annotation has bad offsets: " + part);
        if (static_cast<std::size_t>(end) >= source_len)
          throw data_error("FlaCGEC offset beyond sentence in " + id);
        Edit e;
        e.start = static_cast<std::size_t>(start);
        e.end = static_cast<std::size_t>(end) + 1;  // inclusive in the file
        e.replacement = fields[2];
        e.label.raw = fields[1];
        e.label.op = structural_op(e);
        edits.push_back(std::move(e));
      }
    }
    std::sort(edits.begin(), edits.end(),
              [](const Edit& a, const Edit& b) { return a.start < b.start; });
    // cross-check against the operation list (entry counts only; the field
    // is a Python-repr string in the original release)
    if (record.contains("operation")) {
      const std::string op_text = detail::json_string(record["operation"]);
      std::size_t parens = 0;
      for (char c : op_text)
        if (c == '(') ++parens;
      const std::size_t op_count = parens / 2;
      if (op_count != edits.size())
        out.warnings.push_back("flacgec " + id + ": operation lists " +
                               std::to_string(op_count) + " edits, annotation has " +
                               std::to_string(edits.size()));
    }
    out.push(std::move(pair), std::move(edits));
  }
  return out;
}

// YACLC: grammatical-minimal annotations become references; fluency
// annotations are preserved in meta.
inline ParsedCorpus parse_yaclc(std::string_view text) {
  ParsedCorpus out;
  for (auto& [id, record] : detail::json_records(text, {"sentence_text"})) {
    if (!record.is_object() || !record.contains("sentence_text"))
      throw data_error("YACLC record without sentence_text: " + id);
    SentencePair pair;
    pair.origin = "yaclc";
    pair.id = record.contains("sentence_id")
                  ? detail::json_string(record["sentence_id"])
                  : id;
    pair.source = record["sentence_text"].get<std::string>();
    if (record.contains("total_annotators"))
      pair.meta["annotators"] = detail::json_string(record["total_annotators"]);
    if (record.contains("article_id"))
      pair.meta["article_id"] = detail::json_string(record["article_id"]);
    std::size_t fluency = 0;
    if (record.contains("sentence_annos")) {
      for (const auto& anno : record["sentence_annos"]) {
        const long grammatical = anno.contains("is_grammatical")
                                     ? anno["is_grammatical"].get<long>()
                                     : 1;
        const std::string correction = anno.at("correction").get<std::string>();
        const std::string count = anno.contains("annotator_count")
                                      ? detail::json_string(anno["annotator_count"])
                                      : "";
        if (grammatical == 1) {
          pair.references.push_back(correction);
          if (!count.empty())
            pair.meta["ref" + std::to_string(pair.references.size() - 1) +
                      "_annotators"] = count;
        } else {
          pair.meta["fluency_ref" + std::to_string(fluency)] = correction;
          if (!count.empty())
            pair.meta["fluency_ref" + std::to_string(fluency) + "_annotators"] =
                count;
          ++fluency;
        }
      }
    }
    out.push(std::move(pair));
  }
  return out;
}

// CCTC: document-level records; per-sentence corrections are
// [position, op, old, new] with 1-based positions.
inline ParsedCorpus parse_cctc(std::string_view text) {
  ParsedCorpus out;
  for (auto& [id, record] : detail::json_records(text, {"sentences"})) {
    if (!record.is_object() || !record.contains("sentences"))
      throw data_error("CCTC record without sentences: " + id);
    const std::string doc_id =
        record.contains("doc_id") ? detail::json_string(record["doc_id"]) : id;
    const auto& sentences = record["sentences"];
    const auto corrections = record.contains("corrections")
                                 ? record["corrections"]
                                 : nlohmann::json::array();
    std::size_t index = 0;
    for (const auto& entry : sentences) {
      std::string sentence;
      if (entry.is_string()) {
        sentence = entry.get<std::string>();
      } else if (entry.is_array()) {
        // documents store [id, text, ...]; take the longest string element
        for (const auto& item : entry)
          if (item.is_string() && item.get<std::string>().size() > sentence.size())
            sentence = item.get<std::string>();
      }
      if (sentence.empty()) {
        ++index;
        continue;
      }
      SentencePair pair;
      pair.id = doc_id + "#" + std::to_string(index);
      pair.origin = "cctc";
      pair.source = sentence;
      pair.meta["doc_id"] = doc_id;
      pair.meta["sentence_index"] = std::to_string(index);
      std::vector<Edit> edits;
      if (index < corrections.size() && corrections[index].is_array()) {
        const auto points = utf8::split_points(utf8::strip_whitespace(sentence));
        for (const auto& corr : corrections[index]) {
          if (!corr.is_array() || corr.size() < 4) continue;
          const long pos = corr[0].get<long>();  // 1-based
          const std::string op = corr[1].get<std::string>();
          const std::string old_text = corr[2].get<std::string>();
          const std::string new_text = corr[3].get<std::string>();
          if (pos < 1 || static_cast<std::size_t>(pos) > points.size())
            throw data_error("CCTC position " + std::to_string(pos) +
                             " outside sentence in " + pair.id);
          const std::size_t start = static_cast<std::size_t>(pos - 1);
          const std::size_t old_len = utf8::length(old_text);
          if (!old_text.empty()) {
            std::string actual;
            for (std::size_t k = start; k < start + old_len && k < points.size();
                 ++k)
              actual += points[k];
            if (actual != old_text)
              throw data_error("CCTC old text mismatch at position " +
                               std::to_string(pos) + " in " + pair.id + ": file says " +
                               old_text + ", sentence has " + actual);
          }
          Edit e;
          e.start = start;
          e.end = start + old_len;
          e.replacement = new_text;
          if (e.start == e.end && new_text.empty()) continue;
          e.label.op = structural_op(e);
          if (op == "W" ||
              (e.label.op == Op::R &&
               detail::char_multiset(old_text) == detail::char_multiset(new_text)))
            e.label = make_label(Op::WO);
          edits.push_back(std::move(e));
        }
        std::sort(edits.begin(), edits.end(),
                  [](const Edit& a, const Edit& b) { return a.start < b.start; });
        if (!edits.empty())
          pair.references.push_back(apply_edits(segment_chars(sentence), edits));
      }
      out.push(std::move(pair), std::move(edits));
      ++index;
    }
  }
  return out;
}

// NaCGEC: {source, target[], error_type}; a record typed 正确 is error-free
// and mirrors its source.
inline ParsedCorpus parse_nacgec(std::string_view text) {
  ParsedCorpus out;
  std::size_t index = 0;
  for (auto& [id, record] : detail::json_records(text, {"source"})) {
    if (!record.is_object() || !record.contains("source"))
      throw data_error("NaCGEC record without source: " + id);
    SentencePair pair;
    pair.id = id.empty() ? std::to_string(index) : id;
    pair.origin = "nacgec";
    pair.source = record["source"].get<std::string>();
    if (record.contains("target")) {
      if (record["target"].is_array()) {
        for (const auto& t : record["target"])
          pair.references.push_back(t.get<std::string>());
      } else {
        pair.references.push_back(record["target"].get<std::string>());
      }
    }
    if (record.contains("error_type"))
      pair.meta["error_type"] = detail::json_string(record["error_type"]);
    if (pair.references.empty() && pair.meta["error_type"] == "正确")
      pair.references.push_back(pair.source);  // 正确
    out.push(std::move(pair));
    ++index;
  }
  return out;
}

// CEFE track 3: {sent_id, sent, revisedSent}.
inline ParsedCorpus parse_cefe(std::string_view text) {
  ParsedCorpus out;
  for (auto& [id, record] : detail::json_records(text, {"sent"})) {
    if (!record.is_object() || !record.contains("sent"))
      throw data_error("CEFE record without sent: " + id);
    if (!record.contains("revisedSent"))
      throw data_error("CEFE record without revisedSent: " + id);
    SentencePair pair;
    pair.id = record.contains("sent_id") ? detail::json_string(record["sent_id"])
                                         : id;
    pair.origin = "cefe";
    pair.source = record["sent"].get<std::string>();
    pair.references.push_back(record["revisedSent"].get<std::string>());
    out.push(std::move(pair));
  }
  return out;
}

inline ParsedCorpus parse_corpus(std::string_view text, CorpusFormat format) {
  switch (format) {
    case CorpusFormat::cged2014:
    case CorpusFormat::cged2015:
    case CorpusFormat::cged2016plus:
    case CorpusFormat::cged2020: return parse_cged(text, format);
    case CorpusFormat::nlpcc_train: return parse_nlpcc_train(text);
    case CorpusFormat::nlpcc_seg: return parse_nlpcc_seg(text);
    case CorpusFormat::fcgec: return parse_fcgec(text);
    case CorpusFormat::flacgec: return parse_flacgec(text);
    case CorpusFormat::yaclc: return parse_yaclc(text);
    case CorpusFormat::cctc: return parse_cctc(text);
    case CorpusFormat::nacgec: return parse_nacgec(text);
    case CorpusFormat::cefe: return parse_cefe(text);
  }
  throw data_error("unhandled corpus format");
}

// Unified parallel representation: id<TAB>source<TAB>ref1<TAB>...
inline std::string render_parallel(const ParsedCorpus& corpus) {
  std::string out;
  for (const auto& pair : corpus.pairs) {
    out += pair.id;
    out += '\t';
    out += pair.source;
    for (const auto& ref : pair.references) {
      out += '\t';
      out += ref;
    }
    out += '\n';
  }
  return out;
}

}  // namespace cgec
