#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "noisytopk/noisytopk.hpp"

using namespace noisytopk;

namespace {

ConfigFile parse(const std::string& text) {
  std::istringstream is(text);
  return ConfigFile::parse(is);
}

ExperimentSpec spec_of(const std::string& text) { return experiment_from_config(parse(text)); }

std::string error_of(const std::string& text) {
  try {
    spec_of(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ConfigFile, SectionsCommentsAndTypes) {
  const auto c = parse("# header\n[graph]\nn = 200, 500  # inline\np=0.25\n\n[run]\ntheory_curve = no\n");
  EXPECT_EQ(c.get_uint_list("graph.n", {}), (std::vector<std::size_t>{200, 500}));
  EXPECT_DOUBLE_EQ(c.get_double("graph.p", 0), 0.25);
  EXPECT_FALSE(c.get_bool("run.theory_curve", true));
  EXPECT_EQ(c.get_uint("run.k", 5), 5u);
}

TEST(ConfigFile, Fractions) {
  const auto c = parse("[noise]\nalpha_n_exponent = -1/3\n");
  EXPECT_DOUBLE_EQ(c.get_double("noise.alpha_n_exponent", 0), -1.0 / 3.0);
  EXPECT_THROW(parse("[noise]\nx = 1/0\n").get_double("noise.x", 0), ConfigError);
}

TEST(ConfigFile, SyntaxErrorsCarryLineNumbers) {
  auto msg = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_EQ(msg("[graph]\nn 200\n").rfind("line 2", 0), 0u);
  EXPECT_EQ(msg("n = 3\n").rfind("line 1", 0), 0u);
  EXPECT_EQ(msg("[a]\nx=1\nx=2\n").rfind("line 3", 0), 0u);
  EXPECT_EQ(msg("[a\n").rfind("line 1", 0), 0u);
}

TEST(ConfigFile, BadValues) {
  const auto c = parse("[graph]\nn = 10, x\np = 0.2abc\nm = -3\n[run]\nflag = maybe\n");
  EXPECT_THROW(c.get_uint_list("graph.n", {}), ConfigError);
  EXPECT_THROW(c.get_double("graph.p", 0), ConfigError);
  EXPECT_THROW(c.get_uint("graph.m", 0), ConfigError);
  EXPECT_THROW(c.get_bool("run.flag", false), ConfigError);
}

TEST(ExperimentFromConfig, UnknownKeyNamesLine) {
  const auto msg = error_of("[experiment]\nkind = topk\n[graph]\nsize = 10\n");
  EXPECT_NE(msg.find("line 4"), std::string::npos);
  EXPECT_NE(msg.find("graph.size"), std::string::npos);
}

TEST(ExperimentFromConfig, FieldValidation) {
  EXPECT_NE(error_of("[experiment]\nkind = bogus\n"), "");
  EXPECT_NE(error_of("[experiment]\nmodel = ba\n"), "");
  EXPECT_NE(error_of("[experiment]\nname = a/b\n"), "");
  EXPECT_NE(error_of("[run]\ngraphs = 0\n"), "");
  EXPECT_NE(error_of("[graph]\nn = 500, 200\n"), "");
  EXPECT_NE(error_of("[graph]\nn = 200, 500\n[noise]\nalpha = 0.01, 0.02\n"), "");
  EXPECT_NE(error_of("[noise]\nalpha = 0.01, 0.02\nbeta = 0.1, 0.2, 0.3\n"), "");
  EXPECT_NE(error_of("[noise]\nalpha = 1.5\n"), "");
  EXPECT_NE(error_of("[graph]\nn = 10\n[run]\nk = 10\n"), "");
  EXPECT_NE(error_of("[experiment]\nkind = localization\n[graph]\nm = 2\n"), "");
  EXPECT_NE(error_of("[experiment]\nkind = jaccard\nmodel = er\n"), "");
  EXPECT_EQ(error_of("[experiment]\nkind = topk\n"), "");
}

TEST(ExperimentFromConfig, NoiseListsZipAndBroadcast) {
  const auto s = spec_of("[graph]\nn = 1000\n[noise]\nalpha = 0.01, 0.02, 0.03\nbeta = 0.05\n");
  ASSERT_EQ(s.topk.points.size(), 3u);
  EXPECT_EQ(s.topk.points[2].noise.alpha, 0.03);
  EXPECT_EQ(s.topk.points[2].noise.beta, 0.05);
  EXPECT_EQ(s.topk.points[2].x_value, 0.03);
  const auto t = spec_of("[graph]\nn = 1000\n[noise]\nalpha = 0.01\nbeta = 0.1, 0.2\n");
  EXPECT_EQ(t.topk.points[1].x_value, 0.2);
}

TEST(ExperimentFromConfig, RateSchedulesOverN) {
  const auto s =
      spec_of("[graph]\nn = 300, 600\n[noise]\nalpha = 1\nalpha_n_exponent = -1/3\nalpha_log_exponent = -2\n");
  ASSERT_EQ(s.topk.points.size(), 2u);
  const double n = 600;
  EXPECT_NEAR(s.topk.points[1].noise.alpha, std::pow(n, -1.0 / 3.0) / std::pow(std::log(n), 2.0), 1e-15);
  EXPECT_EQ(s.topk.points[1].x_value, 600.0);
}

TEST(BundledConfigs, AllParse) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(NOISYTOPK_CONFIG_DIR)) {
    if (entry.path().extension() != ".conf") continue;
    std::ifstream is(entry.path());
    ASSERT_TRUE(is) << entry.path();
    ExperimentSpec s;
    EXPECT_NO_THROW(s = experiment_from_config(ConfigFile::parse(is))) << entry.path();
    EXPECT_EQ(s.name, entry.path().stem().string());
    ++count;
  }
  EXPECT_GE(count, 10u);
}

TEST(BundledConfigs, ErSettingTwoHasFivePoints) {
  std::ifstream is(std::string(NOISYTOPK_CONFIG_DIR) + "/er_setting2.conf");
  const auto s = experiment_from_config(ConfigFile::parse(is));
  ASSERT_EQ(s.topk.points.size(), 5u);
  EXPECT_EQ(s.topk.points.front().n, 1000u);
  EXPECT_EQ(s.topk.graphs_per_point, 100u);
  EXPECT_EQ(s.topk.noise_draws_per_graph, 100u);
  EXPECT_EQ(s.topk.seed_root, 102u);
}
