#include "tlab/experiments.hpp"

#include <gtest/gtest.h>

using namespace tlab;

TEST(Experiments, LogLogSlope) {
  std::vector<double> x, y;
  for (int i = 0; i < 6; ++i) {
    x.push_back(std::pow(10.0, -i));
    y.push_back(3.0 * std::pow(x.back(), 1.5));
  }
  EXPECT_NEAR(loglog_slope(x, y), 1.5, 1e-12);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), DimensionError);
}

TEST(Experiments, E1SmallRunPasses) {
  const Json cfg = Json::parse(R"({"grid_h": 0.05, "truncations": [2, 4, 6, 8], "continuity_samples": 4})");
  const Report r = run_E1_nonscattering(cfg);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.tables.size(), 2u);
  EXPECT_EQ(r.tables[0].rows.size(), 4u);
}

TEST(Experiments, E1RejectsEmptyRange) {
  const Json cfg = Json::parse(R"({"k_range": [1.0, 2.0]})");
  EXPECT_THROW(run_E1_nonscattering(cfg), ConfigError);
}

TEST(Experiments, E3SmallEnsembleIsDeterministic) {
  const Json cfg = Json::parse(R"({"grid_h": 0.1, "ensemble": 3, "orders": [0, 1]})");
  const Report a = run_E3_farfield_floor(cfg, 5);
  const Report b = run_E3_farfield_floor(cfg, 5);
  EXPECT_TRUE(a.pass());
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(to_csv(a.tables[i]), to_csv(b.tables[i]));
  const Report c = run_E3_farfield_floor(cfg, 6);
  EXPECT_NE(to_csv(a.tables[0]), to_csv(c.tables[0]));
}

TEST(Experiments, E3RejectsVanishingContrastVertex) {
  const Json cfg = Json::parse(R"({"vertex": 7})");
  EXPECT_THROW(run_E3_farfield_floor(cfg, 0), ConfigError);
}

TEST(Experiments, E4SmallRunPasses) {
  const Json cfg = Json::parse(R"({"max_order": 1, "samples": 4, "tau_samples": 5, "monte_carlo": 10})");
  const Report r = run_E4_cone_bound(cfg, 1);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.tables[0].rows.size(), 2u * 4u * 5u);
  EXPECT_THROW(run_E4_cone_bound(Json::parse(R"({"alpha_d": 1.0})"), 1), ConfigError);
}

TEST(Experiments, UnknownId) { EXPECT_THROW(run_experiment("E9", Json::object(), 0), ConfigError); }
