#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"

using namespace noisytopk;
using namespace testing_support;

namespace {

ExperimentConfig small_config(Model model, NoiseParams noise, std::vector<std::size_t> ns = {60, 120}) {
  ExperimentConfig cfg;
  cfg.model = model;
  cfg.model_params.p = 0.2;
  cfg.model_params.m = 3;
  cfg.model_params.k_ring = 6;
  cfg.k = 5;
  cfg.points = grid_over_n(ns, {noise.alpha, 0, 0}, {noise.beta, 0, 0});
  cfg.graphs_per_point = 6;
  cfg.noise_draws_per_graph = 8;
  cfg.seed_root = 99;
  cfg.threads = 1;
  return cfg;
}

std::string csv_of(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  write_summary_csv(os, rows);
  return os.str();
}

}  // namespace

TEST(RateSchedule, Evaluates) {
  const RateSchedule r{1.0, -1.0 / 3.0, -2.0};
  const double n = 1000.0;
  EXPECT_NEAR(r.at(1000), std::pow(n, -1.0 / 3.0) * std::pow(std::log(n), -2.0), 1e-15);
  EXPECT_DOUBLE_EQ((RateSchedule{0.05, 0, 0}.at(17)), 0.05);
}

TEST(Grids, OverNAndAlpha) {
  const auto g = grid_over_n({100, 200}, {0.5, 0, -1}, {0.05, 0, 0});
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[1].x_value, 200.0);
  EXPECT_NEAR(g[1].noise.alpha, 0.5 / std::log(200.0), 1e-15);
  const auto h = grid_over_alpha(1000, {0.01, 0.02}, 0.05);
  EXPECT_EQ(h[1].x_value, 0.02);
  EXPECT_EQ(h[1].noise.beta, 0.05);
}

TEST(ExperimentConfig, Validation) {
  auto cfg = small_config(Model::er, {0.1, 0.1});
  EXPECT_NO_THROW(cfg.validate());
  auto bad = cfg;
  bad.graphs_per_point = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.noise_draws_per_graph = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.points.clear();
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  std::swap(bad.points[0], bad.points[1]);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.k = 60;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(TopkExperiment, ZeroNoiseRecoversExactly) {
  for (Model model : {Model::er, Model::pa, Model::sw}) {
    auto cfg = small_config(model, {0.0, 0.0});
    cfg.centrality = CentralityChoice::both;
    for (const auto& row : run_topk_experiment(cfg)) {
      EXPECT_EQ(row.mean_half_hamming, 0.0) << to_string(model);
      EXPECT_EQ(row.exact_recovery_rate, 1.0);
      EXPECT_EQ(row.jaccard_degree, 1.0);
      EXPECT_EQ(row.jaccard_evec, 1.0);
      EXPECT_EQ(row.mean_lower_bound, 0.0);
      EXPECT_EQ(row.trials, 48u);
    }
  }
}

TEST(TopkExperiment, RowInvariants) {
  for (Model model : {Model::er, Model::pa, Model::sw}) {
    auto cfg = small_config(model, {0.05, 0.1});
    cfg.centrality = model == Model::pa ? CentralityChoice::both : CentralityChoice::degree;
    for (const auto& row : run_topk_experiment(cfg)) {
      EXPECT_GE(row.exact_recovery_rate, 0.0);
      EXPECT_LE(row.exact_recovery_rate, 1.0);
      EXPECT_LE(row.mean_lower_bound, row.mean_half_hamming + 1e-12);
      EXPECT_LE(row.mean_half_hamming, row.mean_upper_bound + 1e-12);
      EXPECT_LE(row.exp_lower_bound, row.exp_upper_bound + 1e-12);
      EXPECT_EQ(row.exact_recovery_rate == 1.0, row.mean_half_hamming == 0.0);
      for (double se : {row.se_half_hamming, row.se_lower_bound, row.se_upper_bound, row.se_exp_lower_bound,
                        row.se_exp_upper_bound, row.se_exact_recovery})
        EXPECT_GE(se, 0.0);
      EXPECT_EQ(std::isnan(row.theory_lower), model != Model::er);
    }
  }
}

TEST(TopkExperiment, EigenvectorOnlyRuns) {
  auto cfg = small_config(Model::pa, {0.01, 0.05});
  cfg.centrality = CentralityChoice::eigenvector;
  const auto rows = run_topk_experiment(cfg);
  for (const auto& row : rows) {
    EXPECT_TRUE(std::isnan(row.jaccard_degree));
    EXPECT_FALSE(std::isnan(row.jaccard_evec));
    EXPECT_EQ(row.trials + row.excluded_trials, 48u);
  }
}

TEST(TopkExperiment, DeterministicAndThreadIndependent) {
  auto cfg = small_config(Model::pa, {0.02, 0.05});
  cfg.centrality = CentralityChoice::both;
  const auto a = csv_of(run_topk_experiment(cfg));
  const auto b = csv_of(run_topk_experiment(cfg));
  cfg.threads = 3;
  const auto c = csv_of(run_topk_experiment(cfg));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  cfg.seed_root = 100;
  EXPECT_NE(a, csv_of(run_topk_experiment(cfg)));
}

TEST(TopkExperiment, StandardErrorShrinksWithMoreDraws) {
  auto cfg = small_config(Model::er, {0.05, 0.05}, {300});
  cfg.model_params.p = 0.25;
  cfg.graphs_per_point = 20;
  cfg.noise_draws_per_graph = 4;
  const auto few = run_topk_experiment(cfg).front();
  cfg.noise_draws_per_graph = 64;
  const auto many = run_topk_experiment(cfg).front();
  EXPECT_LT(many.se_half_hamming, few.se_half_hamming);
}

TEST(TopkExperiment, ErSettingOneStaysFragile) {
  auto cfg = small_config(Model::er, {0.05, 0.05}, {200, 500, 1000});
  cfg.model_params.p = 0.25;
  cfg.graphs_per_point = 8;
  cfg.noise_draws_per_graph = 8;
  for (const auto& row : run_topk_experiment(cfg)) {
    EXPECT_GE(row.mean_half_hamming, 0.5) << row.n;
    EXPECT_GT(row.theory_lower, 0.0);
    EXPECT_LE(row.theory_lower, row.mean_half_hamming);
  }
}

TEST(Localization, StarClosedForm) {
  const Graph g = star(6);
  const auto d = hub_diagnostics(g, principal_eigenpair(g));
  EXPECT_EQ(d.hub, 0u);
  EXPECT_FALSE(d.hub_tied);
  EXPECT_NEAR(d.x_h, 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(d.m_out, 0.0, 1e-15);
  EXPECT_NEAR(d.gap, 1.0 / std::sqrt(2.0) - 1.0 / std::sqrt(12.0), 1e-9);
}

TEST(Localization, TwoNodeGraphFlagsTie) {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  const auto d = hub_diagnostics(g, principal_eigenpair(g));
  EXPECT_TRUE(d.hub_tied);
  EXPECT_EQ(d.hub, 0u);
}

TEST(Localization, RowsAreWellFormed) {
  const auto rows = run_localization({100, 300}, 30, 1.0, 4, 1);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.reps + r.nonconverged, 30u);
    EXPECT_GE(r.x_h_q10, 0.0);
    EXPECT_LE(r.x_h_q90, 1.0);
    EXPECT_LE(r.x_h_q10, r.x_h_q50);
    EXPECT_LE(r.x_h_q50, r.x_h_q90);
    EXPECT_GE(r.m_out_q10, 0.0);
    EXPECT_LE(r.m_out_q90, 1.0);
    EXPECT_GE(r.gap_q10, -1.0);
    EXPECT_LE(r.gap_q90, 1.0);
  }
  EXPECT_THROW(run_localization({100}, 5, 1.0, 4, 1, 2), std::invalid_argument);
  EXPECT_THROW(run_localization({}, 5, 1.0, 4), std::invalid_argument);
}

TEST(Jaccard, ZeroNoiseGivesPerfectOverlap) {
  const auto rows = run_jaccard_comparison(200, 3, 10, {{0.0, 0.0}}, 3, 3, 8, 1.0, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].jaccard_degree, 1.0);
  EXPECT_EQ(rows[0].jaccard_evec, 1.0);
}

TEST(Jaccard, LightNoiseKeepsBothHigh) {
  const auto rows = run_jaccard_comparison(1000, 3, 10, {{0.001, 0.001}, {0.005, 0.005}}, 6, 6, 8, 1.0, 1);
  for (const auto& r : rows) {
    EXPECT_GE(r.jaccard_degree, 0.8) << r.alpha;
    EXPECT_GE(r.jaccard_evec, 0.8) << r.alpha;
    EXPECT_LE(std::abs(r.jaccard_degree - r.jaccard_evec), 0.1) << r.alpha;
  }
  EXPECT_EQ(rows[1].x_value, 0.005);
}

TEST(Figure1, ZeroNoiseColumnsIdentical) {
  for (const auto& prof : run_figure1_profile(250, 25, {0.0, 0.0}, 3)) {
    ASSERT_EQ(prof.entries.size(), 250u);
    for (const auto& e : prof.entries) EXPECT_EQ(e.original_degree, e.noisy_degree);
    for (std::size_t r = 1; r < 250; ++r) EXPECT_GE(prof.entries[r - 1].original_degree, prof.entries[r].original_degree);
  }
}

TEST(Figure1, PaProfileIsSteeperThanEr) {
  const auto prof = run_figure1_profile(250, 25, {0.01, 0.02}, 3);
  ASSERT_EQ(prof.size(), 3u);
  auto drop = [](const ModelProfile& p) { return p.entries[0].original_degree - p.entries[24].original_degree; };
  EXPECT_EQ(prof[0].model, Model::er);
  EXPECT_EQ(prof[2].model, Model::pa);
  EXPECT_GT(drop(prof[2]), drop(prof[0]));
  EXPECT_EQ(prof[2].parameters, "m=12 b=1");
  EXPECT_EQ(prof[1].parameters, "k_ring=24 rewire_p=0.1");
}

TEST(Figure1, ErNoisyMeanMatchesMoments) {
  const NoiseParams p{0.01, 0.02};
  const auto prof = run_figure1_profile(250, 25, p, 9).front();
  double sum_d = 0, sum_nd = 0;
  for (const auto& e : prof.entries) {
    sum_d += static_cast<double>(e.original_degree);
    sum_nd += static_cast<double>(e.noisy_degree);
  }
  const double n = 250, dbar = sum_d / n, edges = sum_d / 2, absent = n * (n - 1) / 2 - edges;
  const double expect = (n - 1 - dbar) * p.alpha + dbar * (1 - p.beta);
  const double se = 2.0 / n * std::sqrt(edges * p.beta * (1 - p.beta) + absent * p.alpha * (1 - p.alpha));
  EXPECT_NEAR(sum_nd / n, expect, 4 * se);
}

TEST(Figure1, Errors) {
  EXPECT_THROW(run_figure1_profile(20, 25, {0.0, 0.0}, 1), std::invalid_argument);
  EXPECT_THROW(run_figure1_profile(20, 1, {0.0, 0.0}, 1), std::invalid_argument);
}

TEST(Output, CsvHeaderAndNaFormatting) {
  SummaryRow r;
  r.x_value = 200;
  r.n = 200;
  const auto csv = csv_of({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "x_value,n,alpha,beta,mean_half_hamming,se_half_hamming,mean_lower_bound,se_lower_bound,"
            "mean_upper_bound,se_upper_bound,exp_lower_bound,se_exp_lower_bound,exp_upper_bound,"
            "se_exp_upper_bound,theory_lower,exact_recovery_rate,se_exact_recovery,jaccard_degree,"
            "se_jaccard_degree,jaccard_evec,se_jaccard_evec,trials,excluded_trials,disconnected_trials");
  EXPECT_NE(csv.find(",NA,"), std::string::npos);
  const auto j = summary_json({r});
  EXPECT_TRUE(j[0]["theory_lower"].is_null());
  EXPECT_EQ(j[0]["n"], 200.0);
  EXPECT_EQ(csv_num(kInf), "inf");
  EXPECT_EQ(csv_num(0.1), "0.1");
}
