#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace llb::toml {

/// Subset of TOML used by run configurations: [table] headers (dotted names allowed),
/// bare or quoted keys, basic strings with the common escapes, integers, floats, booleans,
/// and (possibly multi-line) arrays of those scalars. `#` starts a comment.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<bool, std::int64_t, double, std::string, Array> data;
  int line = 0;

  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_float() const { return std::holds_alternative<double>(data); }
  bool is_number() const { return is_integer() || is_float(); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }

  /// Integers widen to double.
  double as_number() const;
  std::string type_name() const;
};

/// Keys of one table, in sorted order.
using Table = std::map<std::string, Value>;

/// Tables by full header name; the root table is "".
struct Document {
  std::map<std::string, Table> tables;
};

Document parse(const std::string& text);

/// Quoted TOML basic string.
std::string quote(const std::string& s);

}  // namespace llb::toml
