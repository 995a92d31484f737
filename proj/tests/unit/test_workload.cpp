#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <unordered_map>
#include <vector>

#include "gsat/workload.hpp"

namespace {

using namespace gsat::workload;

// Upper 0.999 quantile of chi-square with k degrees of freedom
// (Wilson-Hilferty approximation).
double chi2_critical(double k) {
  const double z = 3.0902;
  const double t = 1 - 2 / (9 * k) + z * std::sqrt(2 / (9 * k));
  return k * t * t * t;
}

double chi_square(const std::vector<std::uint64_t>& observed, const KeySampler& sampler,
                  std::uint64_t draws) {
  double chi = 0;
  for (std::size_t r = 0; r < observed.size(); ++r) {
    const double expect = sampler.probability(r) * static_cast<double>(draws);
    chi += (observed[r] - expect) * (observed[r] - expect) / expect;
  }
  return chi;
}

std::vector<std::uint64_t> rank_histogram(const KeySampler& s, std::uint64_t draws,
                                          std::uint64_t seed) {
  std::vector<std::uint64_t> hist(s.universe());
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < draws; ++i) ++hist[s.rank(rng)];
  return hist;
}

TEST(Workload, ParsesDistributions) {
  EXPECT_EQ(parse_distribution("uniform"), Distribution{Uniform{}});
  EXPECT_EQ(parse_distribution("xy:99/01"), (Distribution{HotCold{99, 1}}));
  EXPECT_EQ(parse_distribution("xy:90/10"), (Distribution{HotCold{90, 10}}));
  EXPECT_EQ(parse_distribution("zipf:1"), Distribution{Zipf{1.0}});
  EXPECT_EQ(parse_distribution("zipf:0.8"), Distribution{Zipf{0.8}});
  EXPECT_EQ(to_string(parse_distribution("xy:99/01")), "xy:99/01");
  EXPECT_EQ(to_string(parse_distribution("zipf:1")), "zipf:1");
  for (const char* bad : {"", "xy:99", "xy:a/b", "zipf:", "zipf:x", "normal", "xy:9/1/2"}) {
    EXPECT_THROW(parse_distribution(bad), gsat::contract_violation) << bad;
  }
  EXPECT_EQ(parse_mix("mixed"), OperationMix::mixed());
  EXPECT_THROW(parse_mix("write-only"), gsat::contract_violation);
}

TEST(Workload, ValidatesSpecs) {
  WorkloadSpec spec;
  spec.distribution = HotCold{90, 100};
  EXPECT_THROW(spec.validate(), gsat::contract_violation);
  spec.distribution = HotCold{100, 100};
  EXPECT_NO_THROW(spec.validate());
  spec.distribution = HotCold{90, 0};
  EXPECT_THROW(spec.validate(), gsat::contract_violation);
  spec.distribution = Zipf{0};
  EXPECT_THROW(spec.validate(), gsat::contract_violation);
  spec.distribution = Uniform{};
  spec.mix = {50, 30, 30};
  EXPECT_THROW(spec.validate(), gsat::contract_violation);
  spec.mix = OperationMix::mixed();
  spec.universe_size = 0;
  EXPECT_THROW(spec.validate(), gsat::contract_violation);
}

TEST(Workload, UniformFrequenciesOnTenKeys) {
  WorkloadSpec spec{10, Uniform{}, OperationMix::read_only(), gsat::DeleteMode::standard, 10000, 3};
  std::unordered_map<gsat::Key, int> count;
  for (const auto& op : generate(spec)) {
    ASSERT_EQ(op.kind, OpKind::get);
    ++count[op.key];
  }
  ASSERT_EQ(count.size(), 10u);
  // Five points either side of 1/10, and within four standard deviations
  // of a binomial(10^4, 1/10) count.
  const double sigma = std::sqrt(0.1 * 0.9 / 10000);
  for (const auto& [k, c] : count) {
    EXPECT_NEAR(c / 10000.0, 0.1, 0.05) << k;
    EXPECT_NEAR(c / 10000.0, 0.1, 4 * sigma) << k;
  }
}

TEST(Workload, HotSetMass) {
  WorkloadSpec spec{100000, HotCold{90, 10}, OperationMix::read_only(),
                    gsat::DeleteMode::standard, 100000, 4};
  Generator gen(spec);
  const auto& perm = gen.sampler().permutation();
  std::vector<bool> hot(100000);
  for (std::size_t r = 0; r < gen.sampler().hot_size(); ++r) hot[perm[r]] = true;
  EXPECT_EQ(gen.sampler().hot_size(), 10000u);
  int in_hot = 0;
  for (int i = 0; i < 100000; ++i) in_hot += hot[gen.next().key];
  EXPECT_NEAR(in_hot / 100000.0, 0.90, 0.01);
}

TEST(Workload, HotSetIsNotContiguous) {
  const KeySampler s(1000, HotCold{99, 1}, 9);
  const auto& perm = s.permutation();
  std::vector<gsat::Key> hot(perm.begin(), perm.begin() + 10);
  std::sort(hot.begin(), hot.end());
  EXPECT_GT(hot.back() - hot.front(), 9);
}

TEST(Workload, GoodnessOfFit) {
  constexpr std::uint64_t kDraws = 100000;
  for (const Distribution& d : {Distribution{Uniform{}}, Distribution{HotCold{90, 10}},
                                Distribution{Zipf{1.0}}}) {
    const KeySampler s(200, d, 5);
    const auto hist = rank_histogram(s, kDraws, 17);
    EXPECT_LT(chi_square(hist, s, kDraws), chi2_critical(199)) << to_string(d);
  }
}

TEST(Workload, ZipfRankProbabilities) {
  const KeySampler s(4, Zipf{1.0}, 1);
  const double h = 1 + 0.5 + 1.0 / 3 + 0.25;
  EXPECT_NEAR(s.probability(0), 1 / h, 1e-12);
  EXPECT_NEAR(s.probability(3), 0.25 / h, 1e-12);
}

TEST(Workload, MixProportions) {
  WorkloadSpec spec{1000, Uniform{}, OperationMix::mixed(), gsat::DeleteMode::standard, 100000, 6};
  int counts[3] = {};
  for (const auto& op : generate(spec)) ++counts[static_cast<int>(op.kind)];
  EXPECT_NEAR(counts[0] / 100000.0, 0.80, 0.01);
  EXPECT_NEAR(counts[1] / 100000.0, 0.10, 0.01);
  EXPECT_NEAR(counts[2] / 100000.0, 0.10, 0.01);
}

TEST(Workload, SeedDeterminesStream) {
  WorkloadSpec spec{5000, Zipf{1.0}, OperationMix::mixed(), gsat::DeleteMode::standard, 20000, 77};
  const auto a = generate(spec);
  const auto b = generate(spec);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a, b);
  spec.seed = 78;
  EXPECT_NE(generate(spec), a);
}

TEST(Workload, SmoothnessNote) {
  WorkloadSpec spec;
  EXPECT_TRUE(smoothness_note(spec).bounded_density);
  spec.distribution = HotCold{99, 1};
  EXPECT_TRUE(smoothness_note(spec).bounded_density);
  spec.distribution = Zipf{1.0};
  EXPECT_TRUE(smoothness_note(spec).bounded_density);
  EXPECT_FALSE(smoothness_note(spec).text.empty());
}

}  // namespace
