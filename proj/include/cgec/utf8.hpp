#pragma once

// Minimal UTF-8 code point handling. All offsets used by the toolkit are
// code point indices, never byte indices.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cgec::utf8 {

inline int sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 0;
}

// Decodes the code point starting at byte offset `pos` and advances `pos`
// past it. Malformed input decodes as U+FFFD, one byte at a time.
inline char32_t next(std::string_view s, std::size_t& pos) {
  const unsigned char lead = static_cast<unsigned char>(s[pos]);
  const int len = sequence_length(lead);
  if (len == 0 || pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  char32_t cp = 0;
  switch (len) {
    case 1: cp = lead; break;
    case 2: cp = lead & 0x1F; break;
    case 3: cp = lead & 0x0F; break;
    case 4: cp = lead & 0x07; break;
  }
  for (int i = 1; i < len; ++i) {
    const unsigned char cont = static_cast<unsigned char>(s[pos + i]);
    if ((cont >> 6) != 0x2) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  pos += len;
  return cp;
}

inline void append(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(char32_t cp) {
  std::string out;
  append(cp, out);
  return out;
}

inline std::vector<char32_t> decode(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) cps.push_back(next(s, pos));
  return cps;
}

inline std::size_t length(std::string_view s) {
  std::size_t n = 0, pos = 0;
  while (pos < s.size()) {
    next(s, pos);
    ++n;
  }
  return n;
}

// Splits into one std::string per code point.
inline std::vector<std::string> split_points(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    next(s, pos);
    out.emplace_back(s.substr(start, pos - start));
  }
  return out;
}

inline bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' ||
         cp == 0x3000 || cp == 0x00A0;
}

// Unicode punctuation relevant to Chinese text plus ASCII punctuation.
inline bool is_punct(char32_t cp) {
  if (cp < 0x80)
    return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
           (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
  return (cp >= 0x3001 && cp <= 0x303F) ||   // CJK symbols and punctuation
         (cp >= 0xFF01 && cp <= 0xFF0F) ||   // fullwidth ! .. /
         (cp >= 0xFF1A && cp <= 0xFF20) ||   // fullwidth : .. @
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65) ||
         (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2E00 && cp <= 0x2E7F);
}

inline bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x2A6DF);
}

inline std::string strip_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const char32_t cp = next(s, pos);
    if (!is_space(cp)) out.append(s.substr(start, pos - start));
  }
  return out;
}

}  // namespace cgec::utf8
