#pragma once

#include "tlab/config.hpp"

#include <cstdint>
#include <deque>
#include <string>
#include <variant>
#include <vector>

namespace tlab {

using Cell = std::variant<double, long long, std::string>;

/// Named table written as <name>.csv with a fixed header.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string experiment;
  std::vector<Verdict> verdicts;
  std::deque<Table> tables;  // stable references from table()
  Json summary = Json::object();

  bool pass() const;
  void check(std::string name, bool pass, std::string detail);
  Table& table(const std::string& name, std::vector<std::string> columns);
};

/// Doubles in %.16e, integers verbatim, strings unquoted.
std::string format_cell(const Cell& c);
std::string to_csv(const Table& t);
void write_csv(const std::string& dir, const Table& t);

/// Tables as CSV plus report.json holding the summary and the verdicts.
void write_report(const std::string& dir, const Report& r);

struct RunInfo {
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double wall_seconds = 0.0;
  int exit_code = 0;
};

void write_manifest(const std::string& dir, const RunInfo& info);

Json verdicts_to_json(const std::vector<Verdict>& v);

}  // namespace tlab
