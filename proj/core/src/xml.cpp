// Copyright 2026 The chairbot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chairbot/xml.hpp"

#include <cctype>

#include "chairbot/error.hpp"

namespace chairbot::xml {

std::optional<std::string_view> Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Element document() {
    skip_misc(true);
    if (eof()) fail("empty document");
    if (peek() != '<') fail("expected '<'");
    Element root = element(1);
    skip_misc(false);
    if (!eof()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col_); }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_comment() {
    advance(4);
    while (!starts_with("-->")) {
      if (eof()) fail("unterminated comment");
      advance();
    }
    advance(3);
  }

  // Whitespace, comments and (in the prolog only) the XML declaration.
  void skip_misc(bool prolog) {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        skip_comment();
      } else if (prolog && starts_with("<?xml")) {
        while (!starts_with("?>")) {
          if (eof()) fail("unterminated XML declaration");
          advance();
        }
        advance(2);
        prolog = false;
      } else {
        return;
      }
    }
  }

  std::string name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    const std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected a quoted attribute value");
    const char quote = peek();
    advance();
    std::string out;
    for (;;) {
      if (eof()) fail("unterminated attribute value");
      const char c = peek();
      if (c == quote) break;
      if (c == '<') fail("'<' inside attribute value");
      if (c == '&') {
        out += entity();
        continue;
      }
      out += c;
      advance();
    }
    advance();
    return out;
  }

  char entity() {
    static constexpr std::pair<std::string_view, char> kEntities[] = {
        {"&lt;", '<'}, {"&gt;", '>'}, {"&amp;", '&'}, {"&quot;", '"'}, {"&apos;", '\''}};
    for (const auto& [text, c] : kEntities) {
      if (starts_with(text)) {
        advance(text.size());
        return c;
      }
    }
    fail("unknown entity reference");
  }

  Element element(std::size_t depth) {
    if (depth > kMaxDepth) fail("element nesting exceeds depth " + std::to_string(kMaxDepth));
    if (++count_ > kMaxElements) fail("too many elements");
    Element el;
    el.line = line_;
    el.column = col_;
    advance();  // '<'
    el.name = name();
    for (;;) {
      const bool had_space = !eof() && std::isspace(static_cast<unsigned char>(peek()));
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (starts_with("/>")) {
        advance(2);
        return el;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!had_space) fail("expected whitespace between attributes");
      std::string key = name();
      skip_ws();
      if (eof() || peek() != '=') fail("expected '=' after attribute name");
      advance();
      skip_ws();
      if (el.attribute(key)) fail("duplicate attribute '" + key + "'");
      el.attributes.emplace_back(std::move(key), attribute_value());
    }
    for (;;) {
      skip_ws();
      if (eof()) fail("missing end tag for <" + el.name + ">");
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("</")) {
        advance(2);
        const std::string closing = name();
        if (closing != el.name) fail("mismatched end tag </" + closing + "> for <" + el.name + ">");
        skip_ws();
        if (eof() || peek() != '>') fail("expected '>'");
        advance();
        return el;
      } else if (starts_with("<!") || starts_with("<?")) {
        fail("unsupported markup declaration");
      } else if (peek() == '<') {
        el.children.push_back(element(depth + 1));
      } else {
        fail("unexpected character data");
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::size_t count_ = 0;
};

void escape_into(std::string& out, std::string_view s) {
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

void write(std::string& out, const Element& el, std::size_t indent) {
  out.append(indent * 2, ' ');
  out += '<';
  out += el.name;
  for (const auto& [k, v] : el.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    escape_into(out, v);
    out += '"';
  }
  if (el.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const Element& child : el.children) write(out, child, indent + 1);
  out.append(indent * 2, ' ');
  out += "</" + el.name + ">\n";
}

}  // namespace

Element parse(std::string_view text) { return Reader(text).document(); }

std::string serialize(const Element& root) {
  std::string out;
  write(out, root, 0);
  return out;
}

}  // namespace chairbot::xml
