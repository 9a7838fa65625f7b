#include "tlab/output.hpp"

#include <Eigen/Core>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace tlab {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw DimensionError("Table::add: row width differs from header in " + name);
  rows.push_back(std::move(row));
}

bool Report::pass() const {
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

void Report::check(std::string name, bool pass, std::string detail) {
  verdicts.push_back({std::move(name), pass, std::move(detail)});
}

Table& Report::table(const std::string& name, std::vector<std::string> columns) {
  tables.push_back({name, std::move(columns), {}});
  return tables.back();
}

std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + p.string());
  out << text;
}

}  // namespace

void write_csv(const std::string& dir, const Table& t) {
  std::filesystem::create_directories(dir);
  write_text(std::filesystem::path(dir) / (t.name + ".csv"), to_csv(t));
}

Json verdicts_to_json(const std::vector<Verdict>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back({{"name", x.name}, {"pass", x.pass}, {"detail", x.detail}});
  return a;
}

void write_report(const std::string& dir, const Report& r) {
  std::filesystem::create_directories(dir);
  for (const auto& t : r.tables) write_csv(dir, t);
  Json j = {{"experiment", r.experiment},
            {"verdict", r.pass() ? "PASS" : "FAIL"},
            {"checks", verdicts_to_json(r.verdicts)},
            {"summary", r.summary}};
  write_text(std::filesystem::path(dir) / "report.json", j.dump(2) + "\n");
}

void write_manifest(const std::string& dir, const RunInfo& info) {
  std::filesystem::create_directories(dir);
  Json j = {{"command", info.command},
            {"config", info.config},
            {"seed", info.seed},
            {"threads", info.threads},
            {"wall_seconds", info.wall_seconds},
            {"exit_code", info.exit_code},
            {"versions",
             {{"tlab", "1.0.0"},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"compiler", __VERSION__}}}};
  write_text(std::filesystem::path(dir) / "manifest.json", j.dump(2) + "\n");
}

}  // namespace tlab
