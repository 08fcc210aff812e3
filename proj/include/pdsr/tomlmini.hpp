#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pdsr::toml {

// Minimal TOML reader covering the subset this project writes: tables,
// arrays of tables, bare/quoted keys, strings, integers, floats, booleans
// and (possibly nested, possibly multi-line) arrays. No dates, no inline
// tables, no dotted keys on the left of '='.

class Value;
using Array = std::vector<Value>;
using Table = std::map<std::string, Value>;

class Value {
 public:
  Value() : v_(std::int64_t{0}) {}
  Value(std::int64_t i) : v_(i) {}
  Value(double d) : v_(d) {}
  Value(bool b) : v_(b) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(Array a) : v_(std::move(a)) {}
  Value(Table t) : v_(std::move(t)) {}

  bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_boolean() const { return std::holds_alternative<bool>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }
  bool is_table() const { return std::holds_alternative<Table>(v_); }

  std::int64_t as_integer() const;
  // Accepts an integer literal where a float is expected.
  double as_float() const;
  bool as_boolean() const;
  const std::string& as_string() const;
  const Array& as_array() const;
  const Table& as_table() const;

  Array& as_array_mut() { return std::get<Array>(v_); }
  Table& as_table_mut() { return std::get<Table>(v_); }

 private:
  std::variant<std::int64_t, double, bool, std::string, Array, Table> v_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg),
        line(line_no) {}
  int line;
};

Table parse(std::string_view text);
Table parse_file(const std::filesystem::path& path);

// nullptr when absent.
const Value* find(const Table& table, std::string_view key);

// Shortest decimal form that parses back to the same double, with a ".0"
// suffix when the result would otherwise read as an integer. Used by every
// writer in the project so that serialized artifacts are byte-stable.
std::string format_double(double x);

// Quotes and escapes a string for emission as a TOML key or value.
std::string quote(std::string_view s);

}  // namespace pdsr::toml
