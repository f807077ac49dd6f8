#pragma once

// `key = value` configuration files plus data-file resolution. Lookup
// order for bundled tables: explicit path > config entry > CGEC_DATA_DIR >
// ./data. The config file itself is ./cgec.conf unless CGEC_CONFIG_DIR
// points elsewhere.

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "cgec/core.hpp"

namespace cgec {

class Config {
 public:
  static Config load_file(const std::string& path) {
    Config cfg;
    std::ifstream in(path);
    if (!in) throw data_error("cannot open config: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto trim = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
          s.erase(s.begin());
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
          s.pop_back();
        return s;
      };
      if (trim(line).empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw parse_error("config line is not key = value", lineno);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw parse_error("config line has empty key", lineno);
      cfg.values_[key] = value;
    }
    return cfg;
  }

  // Default config: $CGEC_CONFIG_DIR/cgec.conf if set, else ./cgec.conf;
  // silently empty when no file exists.
  static Config load_default() {
    namespace fs = std::filesystem;
    fs::path path = "cgec.conf";
    if (const char* dir = std::getenv("CGEC_CONFIG_DIR"))
      path = fs::path(dir) / "cgec.conf";
    if (!fs::exists(path)) return Config{};
    return load_file(path.string());
  }

  std::string get(const std::string& key, const std::string& fallback = {}) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

 private:
  std::map<std::string, std::string> values_;
};

// Resolves a bundled data file (lexicon.tsv, pinyin.tsv, glyphs.tsv).
inline std::string resolve_data_file(const std::string& name,
                                     const std::string& explicit_path,
                                     const Config& cfg) {
  namespace fs = std::filesystem;
  if (!explicit_path.empty()) return explicit_path;
  const std::string key = name.substr(0, name.find('.'));
  if (cfg.has(key)) return cfg.get(key);
  if (const char* dir = std::getenv("CGEC_DATA_DIR"))
    return (fs::path(dir) / name).string();
  return (fs::path("data") / name).string();
}

}  // namespace cgec
