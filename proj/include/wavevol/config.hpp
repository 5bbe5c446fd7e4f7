// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wavevol {

/// Flat key/value view of a TOML-like file: `[section]` headers and
/// `key = value` lines, addressed as "section.key". Typed getters raise
/// config-error naming the field.
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(std::istream& in, const std::string& source = "<config>");

  bool has(const std::string& key) const;
  void set(const std::string& key, std::string value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;

  /// Raises config-error for keys under `section` never read.
  void reject_unknown(const std::string& section) const;

  /// Resolved key/value pairs, sorted by key.
  const std::map<std::string, std::vector<std::string>>& values() const { return values_; }
  const std::string& source() const { return source_; }

 private:
  const std::vector<std::string>* find(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string source_;
  std::map<std::string, std::vector<std::string>> values_;
  mutable std::set<std::string> read_;
};

}  // namespace wavevol
