#include "deltaqed/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace deltaqed {

void Provenance::add(const std::string& key, const std::string& value) {
  settings.emplace_back(key, value);
}

void Provenance::add(const std::string& key, double value) {
  settings.emplace_back(key, format_double(value));
}

void Provenance::add_config(const Config& cfg) {
  for (const auto& [key, value] : cfg.entries()) {
    settings.emplace_back("config." + key, value);
  }
}

void RunRecord::add_row(std::initializer_list<double> values) {
  rows.emplace_back(values);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string to_csv(const RunRecord& record) {
  std::string out;
  const Provenance& p = record.provenance;
  out += "# tool = " + p.tool + "\n";
  out += "# command = " + p.command + "\n";
  out += "# constants = " + p.constants + "\n";
  out += "# units = " + p.units + "\n";
  for (const auto& [key, value] : p.settings)
    out += "# " + key + " = " + value + "\n";
  if (!record.failures.empty()) {
    out += "# failed_points = " + std::to_string(record.failures.size()) + "\n";
    for (const auto& f : record.failures) {
      out += "# failed[" + std::to_string(f.index) + "] at " +
             format_double(f.value) + ": " + f.message + "\n";
    }
  }
  for (size_t c = 0; c < record.columns.size(); ++c) {
    out += record.columns[c];
    out += c + 1 == record.columns.size() ? "\n" : ", ";
  }
  for (const auto& row : record.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out += format_double(row[c]);
      out += c + 1 == row.size() ? "\n" : ", ";
    }
  }
  return out;
}

void write_csv(const std::string& path, const RunRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out << to_csv(record);
}

std::string to_json(const RunRecord& record) {
  nlohmann::ordered_json j;
  j["tool"] = record.provenance.tool;
  j["command"] = record.provenance.command;
  j["constants"] = record.provenance.constants;
  j["units"] = record.provenance.units;
  nlohmann::ordered_json settings;
  for (const auto& [key, value] : record.provenance.settings)
    settings[key] = value;
  j["settings"] = settings;
  j["columns"] = record.columns;
  j["rows"] = record.rows;
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& f : record.failures) {
    failures.push_back({{"index", f.index}, {"at", f.value}, {"message", f.message}});
  }
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

void write_json(const std::string& path, const RunRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out << to_json(record);
}

}  // namespace deltaqed
