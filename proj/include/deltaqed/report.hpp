#pragma once

#include <string>
#include <vector>

#include "deltaqed/config.hpp"

namespace deltaqed {

// Everything needed to rerun a record: the resolved configuration plus the
// fixed numerical conventions.
struct Provenance {
  std::string tool = "deltaqed";
  std::string constants = "CODATA-2018";
  std::string units = "io:GHz-ordinary internal:rad/ns";
  std::string command;
  std::vector<std::pair<std::string, std::string>> settings;  // config echo

  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add_config(const Config& cfg);
};

struct PointFailure {
  int index;
  double value;  // grid coordinate of the failed point
  std::string message;
};

// Tabular result of one run or sweep: named columns, row-major values, and
// the per-point failures that were skipped.
struct RunRecord {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Provenance provenance;
  std::vector<PointFailure> failures;

  void add_row(std::initializer_list<double> values);
};

// Deterministic float formatting shared by all writers ("%.12g").
std::string format_double(double x);

// CSV with '#'-prefixed provenance header lines, then the column header, then
// the data. Identical records produce identical bytes.
void write_csv(const std::string& path, const RunRecord& record);
std::string to_csv(const RunRecord& record);

// JSON mirror of the CSV plus structured provenance and failures.
void write_json(const std::string& path, const RunRecord& record);
std::string to_json(const RunRecord& record);

}  // namespace deltaqed
