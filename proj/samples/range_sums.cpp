// Range sums with range increments over an SABT whose nodes carry slot trees.

#include <cstdio>

#include "gsat/range.hpp"

int main() {
  std::vector<gsat::KeyRecord> records;
  for (gsat::Key k = 0; k < 1000; k += 10) records.push_back({k, 1, 1});
  gsat::RangeTree<gsat::SumAdd> tree(records, gsat::DegreePolicy::sabt(), {gsat::DeleteMode::standard, 0, 1000});

  std::printf("sum[0, 999]   = %lld\n", static_cast<long long>(tree.range_calculate(0, 999)));
  tree.range_update(100, 199, 5);  // ten keys gain 5 each
  std::printf("sum[100, 199] = %lld\n", static_cast<long long>(tree.range_calculate(100, 199)));
  std::printf("sum[0, 999]   = %lld\n", static_cast<long long>(tree.range_calculate(0, 999)));

  tree.erase(150);
  tree.insert(155, 100);
  std::printf("after erase(150), insert(155, 100): sum[100, 199] = %lld\n",
              static_cast<long long>(tree.range_calculate(100, 199)));

  std::printf("keys in [140, 170]:");
  for (gsat::Key k : tree.range_get(140, 170)) std::printf(" %lld", static_cast<long long>(k));
  std::printf("\n");

  // Hammering one window pulls its keys toward the root.
  for (int i = 0; i < 2000; ++i) tree.range_calculate(500, 520);
  std::printf("depth of key 510 after 2000 window queries: %zu\n", *tree.depth_of(510));
}
