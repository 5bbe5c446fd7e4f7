// SPDX-License-Identifier: Apache-2.0
#include "wavevol/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "wavevol/error.hpp"

namespace wavevol {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_double(const std::string& text, double& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_not_found, "cannot open config " + path.string());
  return parse(in, path.string());
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error(ErrorCode::config_error, source + ": " + e.what());
  }
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    std::vector<std::string> parents;
    for (const auto& p : item.parents) {
      if (p != "default") parents.push_back(p);
    }
    std::string key;
    for (const auto& p : parents) key += p + ".";
    key += item.name;
    cfg.values_[key] = item.inputs;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

void Config::set(const std::string& key, std::string value) { values_[key] = {std::move(value)}; }

const std::vector<std::string>* Config::find(const std::string& key) const {
  read_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

void Config::fail(const std::string& key, const std::string& what) const {
  throw Error(ErrorCode::config_error, source_ + ": " + key + ": " + what);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (v->size() != 1) fail(key, "expected a single value");
  return v->front();
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  double out = 0.0;
  if (v->size() != 1 || !parse_double(v->front(), out)) fail(key, "expected a number");
  return out;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::int64_t out = 0;
  const std::string& s = v->front();
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (v->size() != 1 || ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected an integer");
  return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  const std::string s = v->size() == 1 ? lower(v->front()) : "";
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail(key, "expected true or false");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& s : *v) {
    double x = 0.0;
    if (!parse_double(s, x)) fail(key, "expected a list of numbers");
    out.push_back(x);
  }
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key,
                                             const std::vector<std::string>& fallback) const {
  const auto* v = find(key);
  return v ? *v : fallback;
}

void Config::reject_unknown(const std::string& section) const {
  const std::string prefix = section + ".";
  for (const auto& [key, value] : values_) {
    if (key.rfind(prefix, 0) == 0 && !read_.count(key)) fail(key, "unknown key");
  }
}

}  // namespace wavevol
