#pragma once

#include <map>
#include <string>

#include "ppwave/model.hpp"

namespace ppwave {

// flat key-value configuration with [section] headers, '#'/';' comments,
// and dotted-path overrides ("section.key=value")
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<inline>");

  void set(const std::string& dotted_key, const std::string& value);
  void set_dotted(const std::string& assignment);  // "section.key=value"

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  std::string serialize() const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string origin_ = "<empty>";
};

struct ModelLoad {
  ModelParams params;
  bool d_defaulted = false;
};

// reads the [model] section; every rate is required, d falls back to 1.0
// with the fallback flagged so callers can announce it
ModelLoad load_model_params(const Config& cfg);

}  // namespace ppwave
