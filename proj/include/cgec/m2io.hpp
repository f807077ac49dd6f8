#pragma once

// m2 reading and writing. Two dialects are supported: the cherrant layout
// (T0-A reference lines, S/M/R operation letters, -NONE- for an empty
// replacement) and the refined layout (no reference lines, R/M/U/WO
// operation letters, empty field for an empty replacement). Parsed type
// strings are kept verbatim so any well-formed file round-trips byte for
// byte, including type vocabularies this toolkit does not produce.

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cgec/core.hpp"
#include "cgec/segment.hpp"

namespace cgec {

namespace detail {

inline std::string map_subtype(const std::string& subtype, Dialect dialect) {
  if (dialect == Dialect::cherrant) {
    if (subtype == "PINYIN" || subtype == "SHAPE" || subtype == "MULTI" ||
        subtype == "CO")
      return "SPELL";
    if (subtype == "DE") return "AUX";
  }
  return subtype;
}

inline std::string render_type(const ErrorLabel& label, Dialect dialect) {
  if (!label.raw.empty()) return label.raw;
  std::string op;
  switch (label.op) {
    case Op::R: op = dialect == Dialect::cherrant ? "S" : "R"; break;
    case Op::M: op = "M"; break;
    case Op::U: op = dialect == Dialect::cherrant ? "R" : "U"; break;
    case Op::WO: return dialect == Dialect::cherrant ? "W" : "WO";
  }
  if (label.subtype.empty())
    throw data_error("cannot write unclassified edit (op " + op + ")");
  return op + ":" + map_subtype(label.subtype, dialect);
}

// Target token line derived by splicing replacements into the source tokens.
inline std::string splice_reference(const Segmentation& src,
                                    const std::vector<Edit>& edits) {
  std::vector<std::string> out;
  std::size_t cursor = 0;
  for (const auto& e : edits) {
    for (std::size_t i = cursor; i < e.start && i < src.size(); ++i)
      out.push_back(src.tokens[i].surface);
    for (const auto& tok : split_spaces(e.replacement)) out.push_back(tok);
    cursor = std::max(cursor, e.end);
  }
  for (std::size_t i = cursor; i < src.size(); ++i)
    out.push_back(src.tokens[i].surface);
  std::string joined;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) joined += ' ';
    joined += out[i];
  }
  return joined;
}

}  // namespace detail

inline std::string write_m2_record(const AnnotationRecord& record,
                                   Dialect dialect) {
  std::ostringstream out;
  out << "S " << record.source_seg.joined() << "\n";
  if (dialect == Dialect::cherrant) {
    // every annotator gets a reference line, stored or derived
    std::vector<int> annotators;
    for (const auto& [k, line] : record.reference_lines) annotators.push_back(k);
    for (const auto& [k, edits] : record.edit_sets)
      if (!record.reference_lines.count(k)) annotators.push_back(k);
    if (annotators.empty()) annotators.push_back(0);
    std::sort(annotators.begin(), annotators.end());
    annotators.erase(std::unique(annotators.begin(), annotators.end()),
                     annotators.end());
    for (int k : annotators) {
      auto it = record.reference_lines.find(k);
      const std::string body =
          it != record.reference_lines.end()
              ? it->second
              : detail::splice_reference(
                    record.source_seg,
                    record.edit_sets.count(k) ? record.edit_sets.at(k)
                                              : std::vector<Edit>{});
      out << "T0-A" << k << " " << body << "\n";
    }
  }
  for (const auto& [annotator, edits] : record.edit_sets) {
    for (const auto& e : edits) {
      const std::string repl =
          e.replacement.empty()
              ? (dialect == Dialect::cherrant ? std::string("-NONE-")
                                              : std::string())
              : e.replacement;
      out << "A " << e.start << " " << e.end << "|||"
          << detail::render_type(e.label, dialect) << "|||" << repl
          << "|||REQUIRED|||-NONE-|||" << annotator << "\n";
    }
  }
  for (const auto& line : record.passthrough_lines) out << line << "\n";
  return out.str();
}

// Records separated by one blank line; trailing newline after the last.
inline std::string write_m2(const std::vector<AnnotationRecord>& records,
                            Dialect dialect) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += "\n";
    out += write_m2_record(records[i], dialect);
  }
  return out;
}

// Uses each record's own dialect (as detected at parse time).
inline std::string write_m2(const std::vector<AnnotationRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += "\n";
    out += write_m2_record(records[i], records[i].dialect);
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find("|||", pos);
    if (next == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 3;
  }
  return fields;
}

inline Segmentation segmentation_from_tokens(const std::string& body) {
  Segmentation seg = parse_presegmented(body);
  bool all_single = true;
  for (const auto& t : seg.tokens)
    if (utf8::length(t.surface) != 1) all_single = false;
  seg.granularity = all_single && !seg.tokens.empty() ? Granularity::character
                                                      : Granularity::word;
  return seg;
}

inline ErrorLabel label_from_type(const std::string& type, const Edit& shape) {
  ErrorLabel label;
  label.raw = type;
  const auto colon = type.find(':');
  const std::string head = colon == std::string::npos ? type : type.substr(0, colon);
  label.subtype = colon == std::string::npos ? "" : type.substr(colon + 1);
  const Op structural = structural_op(shape);
  if (structural == Op::R && (head == "W" || head == "WO" || head == "Switch"))
    label.op = Op::WO;
  else
    label.op = structural;
  return label;
}

}  // namespace detail

// Opt-in structural check for deserialized records: spans inside the
// segmentation, label shape constraints, no overlaps within an edit set.
// Not applied during parse because published files are occasionally lax
// about offsets.
inline void validate_record(const AnnotationRecord& record) {
  for (const auto& [annotator, edits] : record.edit_sets) {
    const Edit* prev = nullptr;
    std::size_t prev_end = 0;
    for (const auto& e : edits) {
      validate_edit(e, record.source_seg.size());
      if (prev && (e.start < prev->start || e.start < prev_end))
        throw data_error("annotator " + std::to_string(annotator) +
                         " has overlapping edits " + prev->describe() + " and " +
                         e.describe());
      prev_end = std::max(prev_end, e.end);
      prev = &e;
    }
  }
}

inline std::vector<AnnotationRecord> parse_m2(std::string_view text) {
  std::vector<AnnotationRecord> records;
  AnnotationRecord current;
  bool open = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (open) records.push_back(std::move(current));
    current = AnnotationRecord{};
    open = false;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.rfind("S ", 0) == 0) {
      flush();
      current.source_seg = detail::segmentation_from_tokens(line.substr(2));
      current.dialect = Dialect::refined;
      open = true;
      continue;
    }
    if (line.rfind("T", 0) == 0) {
      if (!open) throw parse_error("T line before S line", lineno);
      // T0-A<k> <tokens>
      const auto space = line.find(' ');
      int annotator = 0;
      const auto dash = line.find("-A");
      if (dash != std::string::npos && space != std::string::npos && dash < space) {
        try {
          annotator = std::stoi(line.substr(dash + 2, space - dash - 2));
        } catch (const std::exception&) {
          throw parse_error("bad annotator id in T line", lineno);
        }
      }
      current.reference_lines[annotator] =
          space == std::string::npos ? "" : line.substr(space + 1);
      current.dialect = Dialect::cherrant;
      continue;
    }
    if (line.rfind("A ", 0) == 0) {
      if (!open) throw parse_error("A line before S line", lineno);
      const auto fields = detail::split_fields(line.substr(2));
      if (fields.size() < 6)
        throw parse_error("A line needs 6 |||-separated fields", lineno);
      std::istringstream span(fields[0]);
      long start = 0, end = 0;
      if (!(span >> start >> end))
        throw parse_error("non-integer edit offsets", lineno);
      if (start < 0 || end < 0 || fields[1] == "noop") {
        current.passthrough_lines.push_back(line);  // errant noop extension
        continue;
      }
      Edit e;
      e.start = static_cast<std::size_t>(start);
      e.end = static_cast<std::size_t>(end);
      e.replacement = fields[2] == "-NONE-" ? std::string() : fields[2];
      try {
        e.annotator = std::stoi(fields[5]);
      } catch (const std::exception&) {
        throw parse_error("non-integer annotator id", lineno);
      }
      if (e.start > e.end) throw parse_error("edit start exceeds end", lineno);
      e.label = detail::label_from_type(fields[1], e);
      current.edit_sets[e.annotator].push_back(std::move(e));
      continue;
    }
    throw parse_error("unrecognized m2 line: " + line, lineno);
  }
  flush();
  return records;
}

}  // namespace cgec
