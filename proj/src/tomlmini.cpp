#include "pdsr/tomlmini.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pdsr::toml {

std::int64_t Value::as_integer() const {
  if (!is_integer()) throw std::runtime_error("toml: expected integer");
  return std::get<std::int64_t>(v_);
}

double Value::as_float() const {
  if (is_integer()) return static_cast<double>(std::get<std::int64_t>(v_));
  if (!is_float()) throw std::runtime_error("toml: expected float");
  return std::get<double>(v_);
}

bool Value::as_boolean() const {
  if (!is_boolean()) throw std::runtime_error("toml: expected boolean");
  return std::get<bool>(v_);
}

const std::string& Value::as_string() const {
  if (!is_string()) throw std::runtime_error("toml: expected string");
  return std::get<std::string>(v_);
}

const Array& Value::as_array() const {
  if (!is_array()) throw std::runtime_error("toml: expected array");
  return std::get<Array>(v_);
}

const Table& Value::as_table() const {
  if (!is_table()) throw std::runtime_error("toml: expected table");
  return std::get<Table>(v_);
}

const Value* find(const Table& table, std::string_view key) {
  auto it = table.find(std::string(key));
  return it == table.end() ? nullptr : &it->second;
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char take() {
    char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }
  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }
  // Whitespace, comments and newlines; used inside multi-line arrays.
  void skip_filler() {
    while (!done()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        take();
      } else if (c == '#') {
        while (!done() && peek() != '\n') ++pos;
      } else {
        break;
      }
    }
  }
};

[[noreturn]] void fail(const Cursor& c, const std::string& msg) {
  throw ParseError(msg, c.line);
}

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_basic_string(Cursor& c) {
  // Opening quote already consumed.
  std::string out;
  while (true) {
    if (c.done()) fail(c, "unterminated string");
    char ch = c.take();
    if (ch == '"') return out;
    if (ch == '\n') fail(c, "newline in string");
    if (ch != '\\') {
      out.push_back(ch);
      continue;
    }
    if (c.done()) fail(c, "unterminated escape");
    char esc = c.take();
    switch (esc) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      default: fail(c, std::string("unsupported escape \\") + esc);
    }
  }
}

std::string parse_key(Cursor& c) {
  c.skip_ws();
  if (c.done()) fail(c, "expected key");
  if (c.peek() == '"') {
    c.take();
    return parse_basic_string(c);
  }
  std::string key;
  while (!c.done() && is_bare_key_char(c.peek())) key.push_back(c.take());
  if (key.empty()) fail(c, "expected key");
  return key;
}

Value parse_value(Cursor& c);

Value parse_array(Cursor& c) {
  // Opening '[' already consumed.
  Array items;
  while (true) {
    c.skip_filler();
    if (c.done()) fail(c, "unterminated array");
    if (c.peek() == ']') {
      c.take();
      return Value(std::move(items));
    }
    items.push_back(parse_value(c));
    c.skip_filler();
    if (c.done()) fail(c, "unterminated array");
    if (c.peek() == ',') {
      c.take();
    } else if (c.peek() != ']') {
      fail(c, "expected ',' or ']' in array");
    }
  }
}

Value parse_number(Cursor& c) {
  std::string tok;
  while (!c.done()) {
    char ch = c.peek();
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '+' ||
        ch == '-' || ch == '.') {
      tok.push_back(c.take());
    } else {
      break;
    }
  }
  if (tok.empty()) fail(c, "expected value");

  std::string_view sv = tok;
  if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);

  const bool is_float_tok = sv.find('.') != std::string_view::npos ||
                            sv.find('e') != std::string_view::npos ||
                            sv.find('E') != std::string_view::npos ||
                            sv == "inf" || sv == "-inf" || sv == "nan" ||
                            sv == "-nan";
  if (is_float_tok) {
    double d = 0.0;
    auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), d);
    if (ec != std::errc{} || p != sv.data() + sv.size()) {
      fail(c, "bad float '" + tok + "'");
    }
    return Value(d);
  }
  std::int64_t i = 0;
  auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), i);
  if (ec != std::errc{} || p != sv.data() + sv.size()) {
    fail(c, "bad integer '" + tok + "'");
  }
  return Value(i);
}

Value parse_value(Cursor& c) {
  c.skip_ws();
  if (c.done()) fail(c, "expected value");
  char ch = c.peek();
  if (ch == '"') {
    c.take();
    return Value(parse_basic_string(c));
  }
  if (ch == '[') {
    c.take();
    return parse_array(c);
  }
  if (c.text.compare(c.pos, 4, "true") == 0) {
    c.pos += 4;
    return Value(true);
  }
  if (c.text.compare(c.pos, 5, "false") == 0) {
    c.pos += 5;
    return Value(false);
  }
  return parse_number(c);
}

// Splits a [header] path on '.', honouring quoted segments.
std::vector<std::string> parse_header_path(Cursor& c) {
  std::vector<std::string> path;
  while (true) {
    path.push_back(parse_key(c));
    c.skip_ws();
    if (!c.done() && c.peek() == '.') {
      c.take();
      continue;
    }
    return path;
  }
}

// Walks to (creating as needed) the table named by path[0..n-2].
Table* descend(Table* root, const std::vector<std::string>& path, Cursor& c) {
  Table* t = root;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto [it, inserted] = t->try_emplace(path[i], Table{});
    Value& v = it->second;
    if (v.is_table()) {
      t = &v.as_table_mut();
    } else if (v.is_array() && !v.as_array().empty() &&
               v.as_array().back().is_table()) {
      t = &v.as_array_mut().back().as_table_mut();
    } else {
      fail(c, "'" + path[i] + "' is not a table");
    }
  }
  return t;
}

void expect_line_end(Cursor& c) {
  c.skip_ws();
  if (!c.done() && c.peek() == '#') {
    while (!c.done() && c.peek() != '\n') ++c.pos;
  }
  if (!c.done() && c.peek() == '\r') c.take();
  if (c.done()) return;
  if (c.peek() != '\n') fail(c, "trailing characters");
  c.take();
}

}  // namespace

Table parse(std::string_view text) {
  Cursor c{text};
  Table root;
  Table* current = &root;

  while (!c.done()) {
    c.skip_ws();
    if (c.done()) break;
    char ch = c.peek();
    if (ch == '\n' || ch == '\r') {
      c.take();
      continue;
    }
    if (ch == '#') {
      while (!c.done() && c.peek() != '\n') ++c.pos;
      continue;
    }
    if (ch == '[') {
      c.take();
      const bool array_table = !c.done() && c.peek() == '[';
      if (array_table) c.take();
      auto path = parse_header_path(c);
      c.skip_ws();
      if (c.done() || c.take() != ']') fail(c, "expected ']'");
      if (array_table && (c.done() || c.take() != ']')) fail(c, "expected ']]'");
      expect_line_end(c);

      Table* parent = descend(&root, path, c);
      const std::string& leaf = path.back();
      if (array_table) {
        auto [it, inserted] = parent->try_emplace(leaf, Array{});
        if (!it->second.is_array()) fail(c, "'" + leaf + "' is not an array");
        it->second.as_array_mut().emplace_back(Table{});
        current = &it->second.as_array_mut().back().as_table_mut();
      } else {
        auto [it, inserted] = parent->try_emplace(leaf, Table{});
        if (!inserted) fail(c, "table '" + leaf + "' redefined");
        current = &it->second.as_table_mut();
      }
      continue;
    }

    std::string key = parse_key(c);
    c.skip_ws();
    if (c.done() || c.take() != '=') fail(c, "expected '=' after key");
    Value v = parse_value(c);
    expect_line_end(c);
    if (!current->try_emplace(std::move(key), std::move(v)).second) {
      fail(c, "duplicate key");
    }
  }
  return root;
}

Table parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string format_double(double x) {
  if (!std::isfinite(x)) {
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, p);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

}  // namespace pdsr::toml
