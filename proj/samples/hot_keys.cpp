// Skewed point lookups: a small hot set drifts toward the root of an SAIT
// while a splay tree and a static B-tree serve the same stream.

#include <chrono>
#include <cstdio>
#include <random>

#include "gsat/baselines/btree.hpp"
#include "gsat/baselines/splay.hpp"
#include "gsat/tree.hpp"
#include "gsat/workload.hpp"

int main() {
  constexpr std::size_t n = 200'000;
  constexpr std::size_t ops = 2'000'000;
  const gsat::workload::KeySampler sampler(n, gsat::workload::HotCold{99, 1}, 42);

  std::vector<gsat::KeyRecord> records;
  for (std::size_t k = 0; k < n; ++k) records.push_back({static_cast<gsat::Key>(k), gsat::Value(k), 1});

  gsat::GsatTree sait(records, gsat::DegreePolicy::sait(), {gsat::DeleteMode::standard, 0, n});
  gsat::baselines::SplayTree splay;
  gsat::baselines::ClassicBTree btree(16);
  for (gsat::Key k : gsat::workload::key_permutation(n, 7)) {
    splay.insert(k, k);
    btree.insert(k, k);
  }

  const gsat::Key hottest = sampler.permutation()[0];
  std::printf("hot set: %zu of %zu keys; depth of one hot key before: %zu\n", sampler.hot_size(), n,
              *sait.depth_of(hottest));

  auto run = [&](const char* name, auto& tree) {
    std::mt19937_64 rng(1);
    tree.reset_stats();
    std::uint64_t sum = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < ops; ++i) sum += tree.get(sampler(rng)).value_or(0);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%-6s %8.2f Mops/s  %6.2f nodes/op  (checksum %llu)\n", name, ops / s / 1e6,
                double(tree.stats().nodes_visited) / ops, static_cast<unsigned long long>(sum));
  };
  run("sait", sait);
  run("splay", splay);
  run("btree", btree);

  std::printf("depth of the same hot key after: %zu (height %zu, %llu rebuilds)\n",
              *sait.depth_of(hottest), gsat::GsatTree::height(sait.root()),
              static_cast<unsigned long long>(sait.stats().rebuilds));
}
