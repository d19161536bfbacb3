#include "lfl3/toml.hpp"

#include <cctype>
#include <sstream>

#include "lfl3/errors.hpp"

namespace lfl3::config {

namespace {
std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}
}  // namespace

bool TomlTable::has(const std::string& section, const std::string& key) const {
  auto it = sections.find(section);
  return it != sections.end() && it->second.count(key) > 0;
}

const TomlValue& TomlTable::get(const std::string& section, const std::string& key) const {
  auto it = sections.find(section);
  if (it == sections.end() || !it->second.count(key))
    fail(ErrorCode::SchemaError, "missing " + section + "." + key);
  return it->second.at(key);
}

std::optional<std::string> TomlTable::get_str(const std::string& section,
                                              const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return get(section, key).text;
}

std::optional<long> TomlTable::get_int(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  const TomlValue& v = get(section, key);
  try {
    size_t pos = 0;
    long r = std::stol(v.text, &pos);
    if (pos != v.text.size()) fail(ErrorCode::SchemaError, "not an integer");
    return r;
  } catch (const std::exception&) {
    fail(ErrorCode::SchemaError, section + "." + key + " is not an integer: " + v.text);
  }
}

TomlTable parse_toml(const std::string& text) {
  TomlTable t;
  std::istringstream in(text);
  std::string line;
  std::string section;  // "" = top level
  int lineno = 0;
  t.sections[""];
  t.section_order.push_back("");
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside quotes
    std::string stripped;
    bool in_quote = false;
    for (char c : line) {
      if (c == '"') in_quote = !in_quote;
      if (c == '#' && !in_quote) break;
      stripped += c;
    }
    stripped = trim(stripped);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad section header");
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty())
        fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty section name");
      if (!t.sections.count(section)) t.section_order.push_back(section);
      t.sections[section];
      continue;
    }
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string val = trim(stripped.substr(eq + 1));
    if (key.empty() || val.empty())
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty key or value");
    TomlValue v;
    if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"')
        fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unterminated string");
      v.type = TomlValue::Type::String;
      v.text = val.substr(1, val.size() - 2);
    } else if (val == "true" || val == "false") {
      v.type = TomlValue::Type::Bool;
      v.boolean = (val == "true");
      v.text = val;
    } else {
      v.type = TomlValue::Type::Number;
      v.text = val;
    }
    if (t.sections[section].count(key))
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": duplicate key " + key);
    t.sections[section][key] = v;
  }
  return t;
}

}  // namespace lfl3::config
