#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lfl3::config {

// Minimal TOML-style reader covering the problem schema: [section.sub]
// headers, `key = value` lines with string/integer/float/bool values, and
// `#` comments. Unknown syntax raises ParseError with a line number.
struct TomlValue {
  enum class Type { String, Number, Bool } type = Type::String;
  std::string text;   // raw payload (unquoted for strings)
  bool boolean = false;
};

struct TomlTable {
  // section path "alpha.1" -> key -> value, in file order per section
  std::map<std::string, std::map<std::string, TomlValue>> sections;
  std::vector<std::string> section_order;

  bool has(const std::string& section, const std::string& key) const;
  const TomlValue& get(const std::string& section, const std::string& key) const;
  std::optional<std::string> get_str(const std::string& section, const std::string& key) const;
  std::optional<long> get_int(const std::string& section, const std::string& key) const;
};

TomlTable parse_toml(const std::string& text);

}  // namespace lfl3::config
