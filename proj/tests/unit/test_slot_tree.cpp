#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gsat/algebra.hpp"
#include "gsat/slot_tree.hpp"

namespace {

using gsat::CountOps;
using gsat::SlotTree;

// Brute-force model: leaf values plus the tag each leaf has accumulated
// since its last take_tag().
struct CountModel {
  std::vector<CountOps::value_type> value;
  std::vector<std::uint64_t> tag;
};

class SlotTreeLayouts : public ::testing::TestWithParam<bool> {};

TEST_P(SlotTreeLayouts, CountOpsMatchBruteForce) {
  const bool segment = GetParam();
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + rng() % 70;
    CountModel model;
    for (std::size_t i = 0; i < n; ++i) model.value.push_back({rng() % 100, rng() % 5});
    model.tag.assign(n, 0);
    SlotTree<CountOps> tree;
    tree.assign(model.value, segment);
    for (int op = 0; op < 400; ++op) {
      std::size_t l = rng() % n, r = rng() % n;
      if (l > r) std::swap(l, r);
      switch (rng() % 5) {
        case 0: {
          const std::uint64_t p = rng() % 4;
          tree.apply(l, r, p);
          for (std::size_t i = l; i <= r; ++i) {
            model.value[i].m += p * model.value[i].live;
            model.tag[i] += p;
          }
          break;
        }
        case 1: {
          CountOps::value_type expect;
          for (std::size_t i = l; i <= r; ++i) expect = CountOps::combine(expect, model.value[i]);
          ASSERT_EQ(tree.query(l, r), expect);
          break;
        }
        case 2:
          ASSERT_EQ(tree.take_tag(l), model.tag[l]);
          model.tag[l] = 0;
          break;
        case 3: {
          const CountOps::value_type v{rng() % 100, rng() % 5};
          tree.set(l, v);
          model.value[l] = v;
          break;
        }
        case 4:
          ASSERT_EQ(tree.leaf(l), model.value[l]);
          break;
      }
      CountOps::value_type total;
      for (const auto& v : model.value) total = CountOps::combine(total, v);
      ASSERT_EQ(tree.total(), total);
    }
  }
}

TEST_P(SlotTreeLayouts, ApplyAllReachesEveryLeafTag) {
  SlotTree<CountOps> tree;
  tree.assign(std::vector<CountOps::value_type>(9, {1, 1}), GetParam());
  tree.apply_all(3);
  tree.apply(2, 4, 1);
  EXPECT_EQ(tree.take_tag(0), 3u);
  EXPECT_EQ(tree.take_tag(3), 4u);
  EXPECT_EQ(tree.take_tag(3), 0u);
  EXPECT_EQ(tree.total().m, 9u + 27u + 3u);
}

TEST_P(SlotTreeLayouts, SumAssignComposesNewestFirst) {
  using Ops = gsat::ValueOps<gsat::SumAssign>;
  SlotTree<Ops> tree;
  std::vector<Ops::value_type> leaves{{1, 1}, {2, 1}, {0, 0}, {4, 1}, {5, 1}};
  tree.assign(leaves, GetParam());
  tree.apply(0, 4, std::optional<std::int64_t>{10});
  tree.apply(1, 2, std::optional<std::int64_t>{-1});
  EXPECT_EQ(tree.query(0, 4).agg, 10 - 1 + 0 + 10 + 10);
  EXPECT_EQ(tree.take_tag(1), std::optional<std::int64_t>{-1});
  EXPECT_EQ(tree.take_tag(4), std::optional<std::int64_t>{10});
  EXPECT_EQ(tree.leaf(2).agg, 0);
}

INSTANTIATE_TEST_SUITE_P(Layouts, SlotTreeLayouts, ::testing::Values(true, false),
                         [](const auto& info) { return info.param ? "segment" : "flat"; });

TEST(SlotTree, CellsGrowLinearly) {
  for (std::size_t k : {1u, 5u, 100u, 1000u}) {
    SlotTree<CountOps> tree;
    tree.assign(std::vector<CountOps::value_type>(2 * k + 1), true);
    EXPECT_LE(tree.cells(), 8 * (2 * k + 1));
  }
}

template <class A>
void check_laws(const std::vector<typename A::value_type>& values,
                const std::vector<typename A::update_type>& updates) {
  for (const auto& a : values) {
    EXPECT_EQ(A::combine(A::identity(), a), a);
    EXPECT_EQ(A::combine(a, A::identity()), a);
    for (std::uint64_t n : {0u, 1u, 3u}) EXPECT_EQ(A::apply(A::no_update(), a, n), a);
  }
  // apply distributes over combine when sizes add up, and composition
  // matches sequential application.
  for (const auto& u : updates) {
    for (const auto& v : updates) {
      const std::int64_t x = 4, y = -3;
      const auto xy = A::combine(A::lift(x), A::lift(y));
      EXPECT_EQ(A::apply(u, xy, 2), A::combine(A::apply(u, A::lift(x), 1), A::apply(u, A::lift(y), 1)));
      EXPECT_EQ(A::apply(A::compose(v, u), xy, 2), A::apply(v, A::apply(u, xy, 2), 2));
    }
  }
}

TEST(Algebra, Laws) {
  check_laws<gsat::SumAdd>({0, 5, -7}, {0, 3, -2});
  check_laws<gsat::SumAssign>({0, 5, -7}, {std::nullopt, std::optional<std::int64_t>{3},
                                          std::optional<std::int64_t>{-2}});
  check_laws<gsat::MinNoUpdate>({5, -7, gsat::MinNoUpdate::identity()}, {{}});
}

}  // namespace
