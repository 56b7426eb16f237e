#include "dynlabel/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "dynlabel/errors.hpp"

namespace dynlabel::tomlmini {

double Value::as_double() const {
  if (kind == Kind::floating) return f;
  if (kind == Kind::integer) return static_cast<double>(i);
  throw DataError("config: expected a number");
}

int64_t Value::as_int() const {
  if (kind == Kind::integer) return i;
  throw DataError("config: expected an integer");
}

bool Value::as_bool() const {
  if (kind == Kind::boolean) return b;
  throw DataError("config: expected a boolean");
}

const std::string& Value::as_string() const {
  if (kind == Kind::string) return s;
  throw DataError("config: expected a string");
}

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw DataError("config line " + std::to_string(line) + ": " + what);
}

Value parse_scalar(Cursor& c);

Value parse_string(Cursor& c) {
  Value v;
  v.kind = Value::Kind::string;
  ++c.pos;  // opening quote
  while (!c.done() && c.peek() != '"') {
    char ch = c.peek();
    if (ch == '\\') {
      ++c.pos;
      if (c.done()) fail(c.line, "dangling escape");
      switch (c.peek()) {
        case 'n': v.s.push_back('\n'); break;
        case 't': v.s.push_back('\t'); break;
        case '"': v.s.push_back('"'); break;
        case '\\': v.s.push_back('\\'); break;
        default: fail(c.line, "unsupported escape");
      }
    } else {
      v.s.push_back(ch);
    }
    ++c.pos;
  }
  if (c.done()) fail(c.line, "unterminated string");
  ++c.pos;  // closing quote
  return v;
}

Value parse_array(Cursor& c) {
  Value v;
  v.kind = Value::Kind::array;
  ++c.pos;  // '['
  c.skip_ws();
  if (!c.done() && c.peek() == ']') {
    ++c.pos;
    return v;
  }
  while (true) {
    c.skip_ws();
    v.arr.push_back(parse_scalar(c));
    c.skip_ws();
    if (c.done()) fail(c.line, "unterminated array");
    if (c.peek() == ',') {
      ++c.pos;
      continue;
    }
    if (c.peek() == ']') {
      ++c.pos;
      return v;
    }
    fail(c.line, "expected ',' or ']' in array");
  }
}

Value parse_scalar(Cursor& c) {
  if (c.done()) fail(c.line, "missing value");
  char ch = c.peek();
  if (ch == '"') return parse_string(c);
  if (ch == '[') return parse_array(c);

  size_t start = c.pos;
  while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#' &&
         c.peek() != ' ' && c.peek() != '\t')
    ++c.pos;
  std::string tok = c.text.substr(start, c.pos - start);
  if (tok.empty()) fail(c.line, "missing value");

  Value v;
  if (tok == "true" || tok == "false") {
    v.kind = Value::Kind::boolean;
    v.b = tok == "true";
    return v;
  }
  bool looks_float = tok.find_first_of(".eE") != std::string::npos &&
                     tok.find("0x") != 0;
  try {
    size_t used = 0;
    if (looks_float) {
      v.kind = Value::Kind::floating;
      v.f = std::stod(tok, &used);
    } else {
      v.kind = Value::Kind::integer;
      v.i = std::stoll(tok, &used);
    }
    if (used != tok.size()) fail(c.line, "cannot parse value '" + tok + "'");
  } catch (const DataError&) {
    throw;
  } catch (const std::exception&) {
    fail(c.line, "cannot parse value '" + tok + "'");
  }
  return v;
}

}  // namespace

Table parse(std::istream& in) {
  Table table;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    Cursor c{raw, 0, line_no};
    c.skip_ws();
    if (c.done() || c.peek() == '#') continue;

    if (c.peek() == '[') {
      size_t close = raw.find(']', c.pos);
      if (close == std::string::npos) fail(line_no, "unterminated section header");
      section = raw.substr(c.pos + 1, close - c.pos - 1);
      if (section.empty()) fail(line_no, "empty section name");
      table[section];
      continue;
    }

    size_t key_start = c.pos;
    while (!c.done() &&
           (std::isalnum(static_cast<unsigned char>(c.peek())) ||
            c.peek() == '_' || c.peek() == '-'))
      ++c.pos;
    std::string key = raw.substr(key_start, c.pos - key_start);
    if (key.empty()) fail(line_no, "expected a key");
    c.skip_ws();
    if (c.done() || c.peek() != '=') fail(line_no, "expected '=' after key");
    ++c.pos;
    c.skip_ws();
    Value v = parse_scalar(c);
    c.skip_ws();
    if (!c.done() && c.peek() != '#')
      fail(line_no, "unexpected trailing characters");
    table[section][key] = std::move(v);
  }
  return table;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  return parse(in);
}

}  // namespace dynlabel::tomlmini
