#include "ppwave/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ppwave/errors.hpp"

namespace ppwave {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << origin << ":" << line << ": " << what;
  throw config_error(msg.str());
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find_first_of("#;");
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(origin, lineno, "empty section name");
      cfg.sections_[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    if (section.empty()) fail(origin, lineno, "key '" + key + "' appears before any [section]");
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

void Config::set(const std::string& dotted_key, const std::string& value) {
  const std::size_t dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size())
    throw config_error("override key must be of the form section.key, got '" + dotted_key + "'");
  sections_[dotted_key.substr(0, dot)][dotted_key.substr(dot + 1)] = value;
}

void Config::set_dotted(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw config_error("override must be of the form section.key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s != sections_.end()) {
    const auto k = s->second.find(key);
    if (k != s->second.end()) return k->second;
  }
  throw config_error("missing required key '" + key + "' in [" + section + "]");
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const std::string raw = get_string(section, key);
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (end == raw.c_str() || *end != '\0')
    throw config_error("key '" + key + "' in [" + section + "] is not a number: '" + raw + "'");
  return v;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
  const std::string raw = get_string(section, key);
  char* end = nullptr;
  const long v = std::strtol(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0')
    throw config_error("key '" + key + "' in [" + section + "] is not an integer: '" + raw + "'");
  return v;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get_string(section, key);
  if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
  if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
  throw config_error("key '" + key + "' in [" + section + "] is not a boolean: '" + raw + "'");
}

std::string Config::serialize() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, entries] : sections_) {
    if (!first) out << "\n";
    first = false;
    out << "[" << name << "]\n";
    for (const auto& [key, value] : entries) out << key << " = " << value << "\n";
  }
  return out.str();
}

ModelLoad load_model_params(const Config& cfg) {
  ModelLoad out;
  out.params.r1 = cfg.get_double("model", "r1");
  out.params.r2 = cfg.get_double("model", "r2");
  out.params.mu = cfg.get_double("model", "mu");
  out.params.a12 = cfg.get_double("model", "a12");
  out.params.a13 = cfg.get_double("model", "a13");
  out.params.a21 = cfg.get_double("model", "a21");
  out.params.a31 = cfg.get_double("model", "a31");
  out.d_defaulted = !cfg.has("model", "d");
  out.params.d = cfg.get_double("model", "d", 1.0);
  validate_params(out.params);
  return out;
}

}  // namespace ppwave
