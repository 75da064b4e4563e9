#include "llb/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace llb::toml {

double Value::as_number() const {
  if (is_integer()) return static_cast<double>(std::get<std::int64_t>(data));
  if (is_float()) return std::get<double>(data);
  throw std::logic_error("toml value is not a number");
}

std::string Value::type_name() const {
  switch (data.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "float";
    case 3: return "string";
    default: return "array";
  }
}

namespace {

bool is_bare(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Document run() {
    Document doc;
    Table* current = &doc.tables[""];
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        skip_ws();
        std::string name = key_path();
        skip_ws();
        expect(']');
        if (doc.tables.contains(name)) fail("duplicate table [" + name + "]");
        current = &doc.tables[name];
      } else {
        const int key_line = line_;
        std::string key = key_path();
        skip_ws();
        expect('=');
        skip_ws();
        Value v = value();
        v.line = key_line;
        if (current->contains(key)) fail("duplicate key '" + key + "'", key_line);
        current->emplace(std::move(key), std::move(v));
      }
      end_of_line();
    }
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }
  [[noreturn]] void fail(const std::string& msg, int line) const { throw ParseError(line, msg); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') ++pos_;
  }

  void newline() {
    if (peek() == '\r') ++pos_;
    if (peek() != '\n') fail("expected end of line");
    ++pos_;
    ++line_;
  }

  void skip_blank_lines() {
    while (true) {
      skip_ws();
      skip_comment();
      if (at_end()) return;
      if (peek() == '\n' || peek() == '\r') {
        newline();
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (!at_end()) newline();
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string key_part() {
    if (peek() == '"') return basic_string();
    std::string k;
    while (!at_end() && is_bare(peek())) k += s_[pos_++];
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::string key_path() {
    std::string k = key_part();
    skip_ws();
    while (peek() == '.') {
      ++pos_;
      skip_ws();
      k += "." + key_part();
      skip_ws();
    }
    return k;
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = s_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape '\\") + e + "'");
      }
    }
    return out;
  }

  Value value() {
    Value v;
    v.line = line_;
    const char c = peek();
    if (c == '"') {
      v.data = basic_string();
    } else if (c == '[') {
      v.data = array();
    } else if (s_.compare(pos_, 4, "true") == 0 && !is_bare(s_.size() > pos_ + 4 ? s_[pos_ + 4] : ' ')) {
      pos_ += 4;
      v.data = true;
    } else if (s_.compare(pos_, 5, "false") == 0 && !is_bare(s_.size() > pos_ + 5 ? s_[pos_ + 5] : ' ')) {
      pos_ += 5;
      v.data = false;
    } else {
      v.data = number();
    }
    return v;
  }

  std::variant<bool, std::int64_t, double, std::string, Array> number() {
    const std::size_t start = pos_;
    while (!at_end() && (is_bare(peek()) || peek() == '.' || peek() == '+')) ++pos_;
    std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty()) fail("expected a value");
    std::string digits;
    for (char ch : tok)
      if (ch != '_') digits += ch;
    if (digits == "inf" || digits == "+inf" || digits == "-inf" || digits == "nan" || digits == "+nan" ||
        digits == "-nan")
      fail("non-finite number '" + tok + "' not allowed");
    const bool is_float = digits.find_first_of(".eE") != std::string::npos;
    const char* b = digits.data() + (digits[0] == '+' ? 1 : 0);
    const char* e = digits.data() + digits.size();
    if (is_float) {
      double d = 0.0;
      auto [p, ec] = std::from_chars(b, e, d);
      if (ec != std::errc() || p != e) fail("invalid number '" + tok + "'");
      return d;
    }
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(b, e, i);
    if (ec != std::errc() || p != e) fail("invalid value '" + tok + "'");
    return i;
  }

  void skip_array_space() {
    while (true) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        newline();
        continue;
      }
      return;
    }
  }

  Array array() {
    expect('[');
    Array out;
    skip_array_space();
    while (peek() != ']') {
      if (at_end()) fail("unterminated array");
      out.push_back(value());
      skip_array_space();
      if (peek() == ',') {
        ++pos_;
        skip_array_space();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    ++pos_;
    return out;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

Document parse(const std::string& text) { return Parser(text).run(); }

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace llb::toml
