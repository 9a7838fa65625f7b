#include "tlab/config.hpp"
#include "tlab/output.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace tlab;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesDomains) {
  const Json poly = Json::parse(R"({"kind": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]})");
  const Domain d = parse_domain(JsonReader(poly));
  ASSERT_TRUE(std::holds_alternative<PolygonDomain>(d));
  EXPECT_NEAR(area(d), 0.5, 1e-15);
  const Json disk = Json::parse(R"({"kind": "disk", "center": [1, 2], "radius": 0.5})");
  const Domain e = parse_domain(JsonReader(disk));
  EXPECT_NEAR(std::get<DiskDomain>(e).center.y(), 2.0, 0.0);
  const Json back = domain_to_json(e);
  EXPECT_EQ(back["radius"], 0.5);
}

TEST(Config, ErrorsNameTheKeyPath) {
  const Json j = Json::parse(R"({"domain": {"kind": "disk", "radius": -1}})");
  EXPECT_EQ(error_of([&] { parse_domain(JsonReader(j).child("domain")); }), "$.domain.radius: must be positive");
  const Json p = Json::parse(R"({"domain": {"kind": "polygon", "vertices": [[0, 0], [1, 0], "x"]}})");
  EXPECT_EQ(error_of([&] { parse_domain(JsonReader(p).child("domain")); }), "$.domain.vertices[2]: expected [x, y]");
  const Json cw = Json::parse(R"({"kind": "polygon", "vertices": [[0, 0], [0, 1], [1, 0]]})");
  EXPECT_NE(error_of([&] { parse_domain(JsonReader(cw)); }).find("$.vertices: "), std::string::npos);
  const Json m = Json::parse(R"({"kind": "square"})");
  EXPECT_EQ(error_of([&] { parse_domain(JsonReader(m)); }), "$.kind: unknown domain kind 'square'");
  EXPECT_EQ(error_of([&] { JsonReader(Json::parse("{}")).number("k"); }), "$.k: missing required key");
  EXPECT_EQ(error_of([&] { JsonReader(Json::parse(R"({"k": "x"})")).number("k"); }), "$.k: expected a number");
  EXPECT_THROW(JsonReader(Json::array()), ConfigError);
}

TEST(Config, ParsesContrastAndKernel) {
  const Contrast c = parse_contrast(JsonReader(Json::parse(R"({"kind": "constant", "value": [1, 0.5]})")));
  ASSERT_TRUE(c.constant.has_value());
  EXPECT_EQ(*c.constant, Complex(1.0, 0.5));
  const Contrast lin = parse_contrast(JsonReader(Json::parse(R"({"kind": "expression", "name": "linear", "c0": 1, "c1": 2})")));
  EXPECT_EQ(lin(Point(0.5, 3.0)), Complex(2.0));
  const HerglotzKernel g = parse_kernel(JsonReader(Json::parse(R"({"truncation": 2, "coefficients": [[-1, 1, 0], [2, 0, 3]]})")));
  EXPECT_EQ(g.truncation(), 2);
  EXPECT_EQ(g.coeff(-1), Complex(1.0));
  EXPECT_EQ(g.coeff(2), Complex(0.0, 3.0));
  EXPECT_EQ(error_of([&] {
              parse_kernel(JsonReader(Json::parse(R"({"truncation": 1, "coefficients": [[3, 1, 0]]})")));
            }),
            "$.coefficients[0]: |m| exceeds truncation");
}

TEST(Config, KernelJsonRoundTrips) {
  const HerglotzKernel g = parse_kernel(JsonReader(Json::parse(R"({"M": 1, "coeffs": [[1, 0], [0.25, -2], [0, 3]]})")));
  EXPECT_EQ(g.truncation(), 1);
  EXPECT_EQ(g.coeff(-1), Complex(1.0));
  EXPECT_EQ(g.coeff(0), Complex(0.25, -2.0));
  EXPECT_EQ(g.coeff(1), Complex(0.0, 3.0));
  const HerglotzKernel back = parse_kernel(JsonReader(kernel_to_json(g)));
  EXPECT_EQ(back.coeffs(), g.coeffs());
  EXPECT_EQ(error_of([&] { parse_kernel(JsonReader(Json::parse(R"({"M": 1, "coeffs": [[1, 0]]})"))); }),
            "$.coeffs: expected 2M + 1 entries [re, im]");
}

TEST(Output, CsvRoundTripsDoubles) {
  Table t{"t", {"a", "b", "c"}, {}};
  const double x = 0.1 + 0.2;
  t.add({x, 42LL, std::string("s")});
  const std::string csv = to_csv(t);
  EXPECT_EQ(csv, "a,b,c\n3.0000000000000004e-01,42,s\n");
  EXPECT_EQ(std::strtod(format_cell(x).c_str(), nullptr), x);
  EXPECT_THROW(t.add({1.0}), DimensionError);
}

TEST(Output, WritesReportAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "tlab_output_test";
  std::filesystem::remove_all(dir);
  Report r;
  r.experiment = "X";
  r.check("one", true, "ok");
  r.check("two", false, "bad");
  Table& a = r.table("first", {"v"});
  r.table("second", {"w"}).add({1.0});
  a.add({2.0});
  EXPECT_FALSE(r.pass());
  write_report(dir.string(), r);
  RunInfo info;
  info.command = "tlab run X";
  info.seed = 7;
  write_manifest(dir.string(), info);
  const Json rep = load_json_file((dir / "report.json").string());
  EXPECT_EQ(rep["verdict"], "FAIL");
  EXPECT_EQ(rep["checks"].size(), 2u);
  EXPECT_EQ(load_json_file((dir / "manifest.json").string())["seed"], 7);
  std::ifstream f(dir / "first.csv");
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "v");
  std::filesystem::remove_all(dir);
}
