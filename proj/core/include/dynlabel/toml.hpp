#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dynlabel::tomlmini {

// Small TOML subset: [sections], key = value, # comments; values are bools,
// integers, floats, quoted strings, and flat arrays thereof. Covers the
// config surface of this project without pulling in a full TOML dependency.
struct Value {
  enum class Kind { boolean, integer, floating, string, array };
  Kind kind = Kind::integer;
  bool b = false;
  int64_t i = 0;
  double f = 0.0;
  std::string s;
  std::vector<Value> arr;

  double as_double() const;
  int64_t as_int() const;
  bool as_bool() const;
  const std::string& as_string() const;
};

using Section = std::map<std::string, Value>;
using Table = std::map<std::string, Section>;

Table parse(std::istream& in);
Table parse_file(const std::string& path);

}  // namespace dynlabel::tomlmini
