#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aerosol/types.hpp"

namespace aerosol {

/// Nested-key text config: one `section.key = value...` per line, `#`
/// comments, values whitespace/comma separated, `linspace <a> <b> <n>`
/// expanded in list context. Keys are validated against the full schema at
/// parse time (fail-closed): an unknown key is a hard error naming the
/// field path.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_words(const std::string& key) const;

  /// Canonical serialization (sorted keys, %.17g numbers where numeric).
  std::string serialize() const;
  /// FNV-1a 64 over the canonical serialization.
  std::uint64_t hash() const;

  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace aerosol
