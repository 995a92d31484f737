#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gsat/tree.hpp"

namespace {

using gsat::DegreePolicy;
using gsat::GsatTree;
using gsat::KeyRecord;

std::vector<KeyRecord> four_keys() { return {{1, 10, 1}, {2, 20, 18}, {3, 30, 2}, {4, 40, 3}}; }

TEST(BuildIdeal, SqrtDegreeOverFourKeysMatchesHandBuild) {
  auto root = GsatTree::build_ideal(four_keys(), 1, 5, DegreePolicy::sait());
  ASSERT_TRUE(root);
  EXPECT_EQ(root->rep, (std::vector<gsat::Key>{2, 4}));
  EXPECT_EQ(root->m, 24u);
  ASSERT_EQ(root->child.size(), 3u);
  ASSERT_TRUE(root->child[0]);
  EXPECT_EQ(root->child[0]->rep, std::vector<gsat::Key>{1});
  ASSERT_TRUE(root->child[1]);
  EXPECT_EQ(root->child[1]->rep, std::vector<gsat::Key>{3});
  EXPECT_FALSE(root->child[2]);
  EXPECT_EQ(root->child[0]->lb, 1);
  EXPECT_EQ(root->child[0]->rb, 2);
  EXPECT_EQ(root->child[1]->lb, 2);
  EXPECT_EQ(root->child[1]->rb, 4);
}

TEST(BuildIdeal, EmptyInputGivesEmptyTree) {
  EXPECT_EQ(GsatTree::build_ideal({}, 0, 10, DegreePolicy::sabt()), nullptr);
}

TEST(BuildIdeal, RejectsBadInput) {
  std::vector<KeyRecord> unsorted{{3, 0, 1}, {2, 0, 1}};
  EXPECT_THROW(GsatTree::build_ideal(unsorted, 0, 10, DegreePolicy::sabt()),
               gsat::contract_violation);
  std::vector<KeyRecord> duplicate{{2, 0, 1}, {2, 0, 1}};
  EXPECT_THROW(GsatTree::build_ideal(duplicate, 0, 10, DegreePolicy::sabt()),
               gsat::contract_violation);
  std::vector<KeyRecord> outside{{10, 0, 1}};
  EXPECT_THROW(GsatTree::build_ideal(outside, 0, 10, DegreePolicy::sabt()),
               gsat::contract_violation);
  std::vector<KeyRecord> zero_ac{{1, 0, 0}};
  EXPECT_THROW(GsatTree::build_ideal(zero_ac, 0, 10, DegreePolicy::sabt()),
               gsat::contract_violation);
  EXPECT_THROW(GsatTree::build_ideal({}, 5, 5, DegreePolicy::sabt()), gsat::contract_violation);
}

TEST(BuildIdeal, KeepsEveryRecordInOrder) {
  std::mt19937_64 rng(7);
  std::vector<KeyRecord> records;
  for (gsat::Key k = 0; k < 5000; ++k) {
    records.push_back({3 * k, k * k, 1 + rng() % 50, false});
  }
  for (auto policy : {DegreePolicy::sait(), DegreePolicy::sabt(), DegreePolicy::salt(),
                      DegreePolicy::sa2t()}) {
    GsatTree tree(records, policy, {gsat::DeleteMode::standard, 0, 15000});
    EXPECT_EQ(tree.flatten(), records) << policy.name();
    EXPECT_EQ(tree.size(), records.size());
    EXPECT_TRUE(tree.check_ideal()) << policy.name();
  }
}

TEST(BuildIdeal, NodeHoldsAtMostDegreeRepresentatives) {
  std::vector<KeyRecord> records;
  for (gsat::Key k = 0; k < 2000; ++k) records.push_back({k, 0, 1});
  const auto policy = DegreePolicy::sabt(4);
  auto root = GsatTree::build_ideal(records, 0, 2000, policy);
  std::vector<const GsatTree::Node*> stack{root.get()};
  while (!stack.empty()) {
    const auto* n = stack.back();
    stack.pop_back();
    EXPECT_LE(n->rep.size(), policy.degree(n->m));
    EXPECT_EQ(n->child.size(), n->rep.size() + 1);
    for (const auto& c : n->child) {
      if (c) stack.push_back(c.get());
    }
  }
}

TEST(BuildIdeal, SizeWeightedSaitRootDegreeIgnoresSkew) {
  std::vector<KeyRecord> records;
  for (gsat::Key k = 0; k < 10000; ++k) records.push_back({k, 0, k == 17 ? 1'000'000u : 1u});
  const auto ist = gsat::size_weighted_adapter(DegreePolicy::sait());
  auto root = GsatTree::build_ideal(records, 0, 10000, ist);
  EXPECT_EQ(root->rep.size(), 100u);
  EXPECT_EQ(root->m, 10000u);

  // The access-weighted version puts the hot key at the root instead.
  auto hot = GsatTree::build_ideal(records, 0, 10000, DegreePolicy::sait());
  EXPECT_NE(std::find(hot->rep.begin(), hot->rep.end(), 17), hot->rep.end());
}

TEST(BuildIdeal, HeavyKeyBecomesRepresentativeAtRoot) {
  std::vector<KeyRecord> records;
  for (gsat::Key k = 0; k < 64; ++k) records.push_back({k, 0, k == 40 ? 1000u : 1u});
  for (auto policy : {DegreePolicy::sabt(), DegreePolicy::salt(), DegreePolicy::sa2t()}) {
    GsatTree tree(records, policy, {gsat::DeleteMode::standard, 0, 64});
    EXPECT_EQ(tree.depth_of(40), 0u) << policy.name();
  }
}

TEST(BuildIdeal, RandomInstancesSatisfyIdealBound) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = rng() % 400;
    std::vector<KeyRecord> records;
    gsat::Key k = static_cast<gsat::Key>(rng() % 100);
    for (std::size_t i = 0; i < n; ++i) {
      k += 1 + static_cast<gsat::Key>(rng() % 20);
      const std::uint64_t ac = rng() % 4 == 0 ? 1 + rng() % 10000 : 1 + rng() % 5;
      records.push_back({k, 0, ac});
    }
    const DegreePolicy policies[] = {DegreePolicy::sait(), DegreePolicy::sabt(2 + rng() % 30),
                                     DegreePolicy::salt(), DegreePolicy::sa2t()};
    const auto& policy = policies[round % 4];
    auto root = GsatTree::build_ideal(records, 0, k + 1, policy);
    EXPECT_TRUE(GsatTree::check_ideal(root.get(), policy)) << "round " << round;
  }
}

TEST(NodeSearch, RejectsKeysOutsideTheNode) {
  auto root = GsatTree::build_ideal(four_keys(), 1, 5, DegreePolicy::sait());
  EXPECT_THROW(GsatTree::node_search(*root, 0), gsat::contract_violation);
  EXPECT_THROW(GsatTree::node_search(*root, 5), gsat::contract_violation);
  EXPECT_EQ(GsatTree::node_search(*root, 4), (gsat::Slot{1, true}));
  EXPECT_EQ(GsatTree::node_search(*root, 3), (gsat::Slot{1, false}));
}

}  // namespace
