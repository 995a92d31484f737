#include <gtest/gtest.h>

#include <sstream>

#include "gsat/bench/harness.hpp"

namespace {

using namespace gsat::bench;
using gsat::workload::HotCold;
using gsat::workload::Uniform;

BenchConfig small_config() {
  BenchConfig cfg;
  cfg.trees = {"splay", "sabt"};
  cfg.workloads = {HotCold{99, 1}};
  cfg.keys = 10000;
  cfg.ops = 100000;
  cfg.reps = 1;
  return cfg;
}

TEST(Bench, BaselineRowIsExactlyOne) {
  const auto results = run_matrix(small_config());
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].tree, "splay");
  EXPECT_EQ(results[0].relative, 1.0);
  EXPECT_GT(results[1].relative, 0.0);
  EXPECT_EQ(results[1].workload, "xy:99/01");
  EXPECT_EQ(results[1].mix, "read-only");

  std::ostringstream csv;
  emit_report(results, ReportFormat::csv, csv);
  std::istringstream lines(csv.str());
  std::string header, row;
  std::getline(lines, header);
  EXPECT_EQ(header, "tree,workload,mix,keys,ops_per_sec,relative,depth_mean,nodes_per_op,rebuilds");
  std::getline(lines, row);
  EXPECT_EQ(row.rfind("splay,xy:99/01,read-only,10000,", 0), 0u);
  EXPECT_NE(row.find(",1.0000,"), std::string::npos);

  std::ostringstream md;
  emit_report(results, ReportFormat::markdown, md);
  EXPECT_NE(md.str().find("| tree | xy:99/01 |"), std::string::npos);
  EXPECT_NE(md.str().find("| sabt | x"), std::string::npos);
}

TEST(Bench, BaselineIsAddedWhenMissing) {
  auto cfg = small_config();
  cfg.trees = {"sait"};
  cfg.ops = 20000;
  const auto results = run_matrix(cfg);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].tree, "splay");
  EXPECT_TRUE(results[0].is_baseline);
}

TEST(Bench, NonTimingStatisticsAreDeterministic) {
  auto cfg = small_config();
  cfg.trees = {"sait", "btree", "splay", "lazy-btree-baseline"};
  cfg.mix = gsat::workload::OperationMix::mixed();
  cfg.reps = 2;
  const auto a = run_matrix(cfg);
  const auto b = run_matrix(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].depth_mean, b[i].depth_mean) << a[i].tree;
    EXPECT_EQ(a[i].nodes_per_op, b[i].nodes_per_op) << a[i].tree;
    EXPECT_EQ(a[i].rebuilds, b[i].rebuilds) << a[i].tree;
  }
}

TEST(Bench, SkewMakesSaitShallower) {
  auto cfg = small_config();
  cfg.trees = {"sait"};
  cfg.workloads = {HotCold{99, 1}, Uniform{}};
  const auto results = run_matrix(cfg);
  const std::vector<TrendRule> rules{
      {"sait depth skew", "depth_mean", {"sait", "xy:99/01", ""}, "<", {"sait", "uniform", ""}}};
  const auto out = verify_trends(results, rules);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].passed) << out[0].detail;
}

TEST(Bench, TrendRulesReportMissingCells) {
  const std::vector<BenchResult> none;
  const auto out = verify_trends(none, {TrendRule{"x"}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_FALSE(out[0].passed);
  EXPECT_EQ(out[0].detail, "missing cell");
}

TEST(Bench, ConfigurationErrors) {
  auto cfg = small_config();
  cfg.trees = {"avl"};
  EXPECT_THROW(run_matrix(cfg), config_error);
  cfg = small_config();
  cfg.reps = 0;
  EXPECT_THROW(run_matrix(cfg), config_error);
  cfg = small_config();
  cfg.workloads = {HotCold{90, 100}};
  EXPECT_THROW(run_matrix(cfg), config_error);
  cfg = small_config();
  cfg.baseline = "rbtree";
  EXPECT_THROW(run_matrix(cfg), config_error);
  EXPECT_THROW(parse_format("xml"), config_error);
}

TEST(Bench, HugeUniverseIsAResourceError) {
  auto cfg = small_config();
  cfg.keys = std::size_t{1} << 50;
  cfg.warmup = 0;
  EXPECT_THROW(run_matrix(cfg), resource_error);
}

TEST(Bench, DurationModeRunsAtLeastTheClock) {
  auto cfg = small_config();
  cfg.trees = {"splay"};
  cfg.ops = 1000;
  cfg.duration = 0.05;
  const auto results = run_matrix(cfg);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_GT(results[0].measured_ops, 1000u);
}

}  // namespace
