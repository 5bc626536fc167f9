#include "deltaqed/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace deltaqed {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"emitter",
       {"gamma_31", "gamma_21", "loss_2", "loss_3", "omega_31", "omega_21"}},
      {"drive", {"omega", "detuning", "rabi", "optimal", "omega_p_over_gamma31"}},
      {"circuit",
       {"alpha", "beta", "ej_over_h", "ej_over_ec", "impedance", "flux",
        "n_p_max", "n_m_max"}},
      {"pulse", {"center", "width", "span_widths", "points", "file"}},
      {"sweep", {"kind", "start", "stop", "points", "direction"}},
      {"loss", {"tilde_gamma3_over_gamma31", "gamma2_over_gamma21"}},
      {"output", {"path", "format", "plot"}},
  };
  return s;
}

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

}  // namespace

void Config::check_known(const std::string& section, const std::string& key) {
  const auto it = schema().find(section);
  if (it == schema().end())
    throw ConfigError("unknown config section: [" + section + "]");
  if (!key.empty() && !it->second.count(key))
    throw ConfigError("unknown config key: " + section + "." + key);
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unterminated section header");
      section = strip(line.substr(1, line.size() - 2));
      check_known(section, "");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside of a [section]");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    check_known(section, key);
    if (cfg.sections_[section].count(key))
      throw ConfigError("duplicate config key: " + section + "." + key);
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

const std::string& Config::raw(const std::string& section,
                               const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end())
    throw ConfigError("missing config section: [" + section + "]");
  const auto kt = it->second.find(key);
  if (kt == it->second.end())
    throw ConfigError("missing config key: " + section + "." + key);
  return kt->second;
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
  const std::string& v = raw(section, key);
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config value " + section + "." + key +
                      " is not a number: '" + v + "'");
  }
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
  if (!has(section, key)) return fallback;
  const std::string& v = raw(section, key);
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config value " + section + "." + key +
                      " is not an integer: '" + v + "'");
  }
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
  return raw(section, key);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? raw(section, key) : fallback;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  check_known(section, key);
  sections_[section][key] = value;
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [section, keys] : sections_) {
    for (const auto& [key, value] : keys) {
      out.emplace_back(section + "." + key, value);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace deltaqed
