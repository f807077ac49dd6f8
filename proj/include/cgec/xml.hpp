#pragma once

// Small DOM reader for the fixed XML layouts of the CGED releases:
// elements, attributes, text, comments and declarations. No namespaces,
// no CDATA.

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cgec/core.hpp"

namespace cgec::xml {

struct Node {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::vector<Node> children;
  std::string text;  // concatenated character data directly inside this node

  const Node* child(std::string_view n) const {
    for (const auto& c : children)
      if (c.name == n) return &c;
    return nullptr;
  }
  std::vector<const Node*> all(std::string_view n) const {
    std::vector<const Node*> out;
    for (const auto& c : children)
      if (c.name == n) out.push_back(&c);
    return out;
  }
  std::string attr(std::string_view n, std::string fallback = {}) const {
    auto it = attrs.find(std::string(n));
    return it == attrs.end() ? fallback : it->second;
  }
};

namespace detail {

inline std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '&') {
      const auto end = s.find(';', i);
      if (end != std::string_view::npos && end - i <= 6) {
        const std::string_view ent = s.substr(i + 1, end - i - 1);
        if (ent == "amp") { out += '&'; i = end + 1; continue; }
        if (ent == "lt") { out += '<'; i = end + 1; continue; }
        if (ent == "gt") { out += '>'; i = end + 1; continue; }
        if (ent == "quot") { out += '"'; i = end + 1; continue; }
        if (ent == "apos") { out += '\''; i = end + 1; continue; }
      }
    }
    out += s[i++];
  }
  return out;
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;

  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("xml: " + what, line);
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos < text.size(); ++i, ++pos)
      if (text[pos] == '\n') ++line;
  }

  bool starts_with(std::string_view prefix) const {
    return text.substr(pos, prefix.size()) == prefix;
  }

  void skip_misc() {
    while (pos < text.size()) {
      if (starts_with("<!--")) {
        const auto end = text.find("-->", pos);
        if (end == std::string_view::npos) fail("unterminated comment");
        advance(end + 3 - pos);
      } else if (starts_with("<?")) {
        const auto end = text.find("?>", pos);
        if (end == std::string_view::npos) fail("unterminated declaration");
        advance(end + 2 - pos);
      } else if (starts_with("<!")) {
        const auto end = text.find('>', pos);
        if (end == std::string_view::npos) fail("unterminated doctype");
        advance(end + 1 - pos);
      } else {
        break;
      }
    }
  }

  Node parse_element() {
    if (pos >= text.size() || text[pos] != '<') fail("expected element");
    advance(1);
    Node node;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_' || text[pos] == '-'))
      node.name += text[pos], advance(1);
    if (node.name.empty()) fail("empty element name");
    // attributes
    while (pos < text.size()) {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
        advance(1);
      if (pos >= text.size()) fail("unterminated tag");
      if (text[pos] == '>') {
        advance(1);
        break;
      }
      if (starts_with("/>")) {
        advance(2);
        return node;
      }
      std::string name;
      while (pos < text.size() && text[pos] != '=' && text[pos] != '>' &&
             !std::isspace(static_cast<unsigned char>(text[pos])))
        name += text[pos], advance(1);
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
        advance(1);
      if (pos >= text.size() || text[pos] != '=') fail("attribute without value");
      advance(1);
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
        advance(1);
      if (pos >= text.size() || (text[pos] != '"' && text[pos] != '\''))
        fail("attribute value must be quoted");
      const char quote = text[pos];
      advance(1);
      const auto end = text.find(quote, pos);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      node.attrs[name] = decode_entities(text.substr(pos, end - pos));
      advance(end + 1 - pos);
    }
    // content
    while (true) {
      if (pos >= text.size()) fail("unterminated element <" + node.name + ">");
      if (starts_with("</")) {
        const auto end = text.find('>', pos);
        if (end == std::string_view::npos) fail("unterminated closing tag");
        const std::string_view closing = text.substr(pos + 2, end - pos - 2);
        if (closing != node.name)
          fail("mismatched closing tag </" + std::string(closing) + ">");
        advance(end + 1 - pos);
        return node;
      }
      if (starts_with("<!--") || starts_with("<?") || starts_with("<!")) {
        skip_misc();
        continue;
      }
      if (text[pos] == '<') {
        node.children.push_back(parse_element());
        continue;
      }
      const auto next = text.find('<', pos);
      const auto chunk =
          text.substr(pos, next == std::string_view::npos ? text.size() - pos
                                                          : next - pos);
      node.text += decode_entities(chunk);
      advance(chunk.size());
    }
  }
};

}  // namespace detail

// Parses a document that may contain several top-level elements, wrapping
// them under an unnamed root.
inline Node parse(std::string_view text) {
  detail::Parser parser{text};
  Node root;
  while (parser.pos < text.size()) {
    while (parser.pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[parser.pos])))
      parser.advance(1);
    if (parser.pos >= text.size()) break;
    parser.skip_misc();
    while (parser.pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[parser.pos])))
      parser.advance(1);
    if (parser.pos >= text.size()) break;
    root.children.push_back(parser.parse_element());
  }
  return root;
}

}  // namespace cgec::xml
