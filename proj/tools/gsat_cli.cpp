// gsat: benchmark matrix runner and range-query demo.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "gsat/bench/harness.hpp"
#include "gsat/range.hpp"

namespace {

using gsat::bench::BenchConfig;
using gsat::bench::config_error;
using json = nlohmann::json;

struct BenchArgs {
  std::vector<std::string> trees;
  std::vector<std::string> workloads;
  std::string mix = "read-only";
  std::size_t keys = 100'000;
  std::size_t ops = 1'000'000;
  std::optional<std::size_t> warmup;
  std::optional<double> duration;
  unsigned reps = 5;
  std::uint64_t seed = 1;
  bool lazy_delete = false;
  std::string baseline = "splay";
  std::string out;
  std::string format = "csv";
  std::string config;
  std::string rules;
  std::uint64_t B = 16;
  double alpha = 0.5;
};

// Keys in the JSON document mirror the long flag names (dashes or
// underscores). Flags given on the command line win.
void merge_json(const json& doc, BenchArgs& a, const CLI::App& cmd) {
  auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
  auto get = [&](std::initializer_list<const char*> names) -> const json* {
    for (const char* n : names) {
      if (doc.contains(n)) return &doc.at(n);
    }
    return nullptr;
  };
  auto strings = [](const json& j) {
    if (j.is_string()) return std::vector<std::string>{j.get<std::string>()};
    return j.get<std::vector<std::string>>();
  };
  if (auto* j = get({"trees", "tree"}); j && !given("--tree")) a.trees = strings(*j);
  if (auto* j = get({"workloads", "workload"}); j && !given("--workload")) a.workloads = strings(*j);
  if (auto* j = get({"mix"}); j && !given("--mix")) a.mix = j->get<std::string>();
  if (auto* j = get({"keys"}); j && !given("--keys")) a.keys = j->get<std::size_t>();
  if (auto* j = get({"ops"}); j && !given("--ops")) a.ops = j->get<std::size_t>();
  if (auto* j = get({"warmup"}); j && !given("--warmup")) a.warmup = j->get<std::size_t>();
  if (auto* j = get({"duration"}); j && !given("--duration")) a.duration = j->get<double>();
  if (auto* j = get({"reps"}); j && !given("--reps")) a.reps = j->get<unsigned>();
  if (auto* j = get({"seed"}); j && !given("--seed")) a.seed = j->get<std::uint64_t>();
  if (auto* j = get({"lazy-delete", "lazy_delete"}); j && !given("--lazy-delete")) {
    a.lazy_delete = j->get<bool>();
  }
  if (auto* j = get({"baseline"}); j && !given("--baseline")) a.baseline = j->get<std::string>();
  if (auto* j = get({"out"}); j && !given("--out")) a.out = j->get<std::string>();
  if (auto* j = get({"format"}); j && !given("--format")) a.format = j->get<std::string>();
  if (auto* j = get({"rules"}); j && !given("--rules")) a.rules = j->get<std::string>();
  if (auto* j = get({"B"}); j && !given("--B")) a.B = j->get<std::uint64_t>();
  if (auto* j = get({"alpha"}); j && !given("--alpha")) a.alpha = j->get<double>();
}

BenchConfig to_config(const BenchArgs& a) {
  BenchConfig cfg;
  if (!a.trees.empty()) cfg.trees = a.trees;
  if (!a.workloads.empty()) {
    cfg.workloads.clear();
    for (const auto& w : a.workloads) cfg.workloads.push_back(gsat::workload::parse_distribution(w));
  }
  cfg.mix = gsat::workload::parse_mix(a.mix);
  cfg.delete_mode = a.lazy_delete ? gsat::DeleteMode::lazy_delete : gsat::DeleteMode::standard;
  cfg.keys = a.keys;
  cfg.ops = a.ops;
  cfg.warmup = a.warmup;
  cfg.duration = a.duration;
  cfg.reps = a.reps;
  cfg.seed = a.seed;
  cfg.baseline = a.baseline;
  cfg.params.B = a.B;
  cfg.params.alpha = a.alpha;
  return cfg;
}

// Rules file: [{"name": ..., "metric": ..., "lhs": {"tree", "workload", "mix"},
//               "op": "<", "rhs": {...}}, ...]
std::vector<gsat::bench::TrendRule> load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open rules file " + path);
  const json doc = json::parse(in);
  std::vector<gsat::bench::TrendRule> rules;
  auto cell = [](const json& j) {
    return gsat::bench::TrendRule::Cell{j.at("tree").get<std::string>(),
                                        j.at("workload").get<std::string>(),
                                        j.value("mix", std::string{})};
  };
  for (const auto& r : doc) {
    gsat::bench::TrendRule rule;
    rule.name = r.value("name", std::string{"rule"});
    rule.metric = r.value("metric", std::string{"nodes_per_op"});
    rule.op = r.value("op", std::string{"<"});
    rule.lhs = cell(r.at("lhs"));
    rule.rhs = cell(r.at("rhs"));
    rules.push_back(rule);
  }
  return rules;
}

int run_bench(BenchArgs args, const CLI::App& cmd) {
  if (!args.config.empty()) {
    std::ifstream in(args.config);
    if (!in) throw config_error("cannot open config file " + args.config);
    merge_json(json::parse(in), args, cmd);
  }
  const auto cfg = to_config(args);
  const auto format = gsat::bench::parse_format(args.format);
  for (const auto& w : cfg.workloads) {
    const auto note = gsat::workload::smoothness_note(cfg.spec_for(w));
    std::cerr << "# " << gsat::workload::to_string(w) << ": " << note.text << '\n';
  }
  const auto results = gsat::bench::run_matrix(cfg);
  if (args.out.empty()) {
    gsat::bench::emit_report(results, format, std::cout);
  } else {
    std::ofstream out(args.out);
    if (!out) throw config_error("cannot write " + args.out);
    gsat::bench::emit_report(results, format, out);
  }
  if (args.rules.empty()) return 0;
  int failed = 0;
  for (const auto& o : gsat::bench::verify_trends(results, load_rules(args.rules))) {
    std::cerr << (o.passed ? "PASS " : "FAIL ") << o.name << ": " << o.detail << '\n';
    failed += !o.passed;
  }
  return failed == 0 ? 0 : 3;
}

struct RangeArgs {
  std::string tree = "sabt";
  std::string algebra = "sum-add";
  std::size_t keys = 100'000;
  std::size_t ops = 100'000;
  std::uint64_t seed = 1;
  bool lazy_delete = false;
};

template <class A>
int run_range(const RangeArgs& a) {
  std::vector<gsat::KeyRecord> records;
  for (std::size_t k = 0; k < a.keys; ++k) {
    records.push_back({static_cast<gsat::Key>(k), static_cast<gsat::Value>(k % 1000), 1});
  }
  const auto mode = a.lazy_delete ? gsat::DeleteMode::lazy_delete : gsat::DeleteMode::standard;
  gsat::RangeTree<A> tree(records, gsat::policy_from_name(a.tree),
                          {mode, 0, static_cast<gsat::Key>(a.keys)});
  std::mt19937_64 rng(a.seed);
  const gsat::workload::KeySampler sampler(a.keys, gsat::workload::HotCold{90, 10}, a.seed);
  std::int64_t checksum = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < a.ops; ++i) {
    const gsat::Key x = sampler(rng);
    const gsat::Key y = std::min<gsat::Key>(x + static_cast<gsat::Key>(rng() % 64),
                                            static_cast<gsat::Key>(a.keys) - 1);
    if constexpr (std::is_same_v<A, gsat::MinNoUpdate>) {
      checksum ^= tree.range_calculate(x, y);
    } else {
      if (rng() % 4 == 0) {
        tree.range_update(x, y, typename A::update_type{static_cast<std::int64_t>(rng() % 5)});
      } else {
        checksum ^= tree.range_calculate(x, y);
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "tree=" << a.tree << " algebra=" << A::name << " keys=" << a.keys
            << " ops=" << a.ops << " ops_per_sec=" << static_cast<std::uint64_t>(a.ops / secs)
            << " nodes_per_op=" << static_cast<double>(tree.stats().nodes_visited) / a.ops
            << " rebuilds=" << tree.stats().rebuilds << " checksum=" << checksum << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-adjusting multiway search trees: benchmarks and demos"};
  app.require_subcommand(1);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a (tree x workload) throughput matrix");
  b->add_option("--tree", bench.trees, "sait sabt salt sa2t ist-baseline lazy-btree-baseline btree splay");
  b->add_option("--workload", bench.workloads, "uniform | xy:X/Y | zipf:S");
  b->add_option("--mix", bench.mix, "read-only | mixed");
  b->add_option("--keys", bench.keys, "Universe size");
  b->add_option("--ops", bench.ops, "Measured operations per cell");
  b->add_option("--warmup", bench.warmup, "Warmup operations (default 10 x keys)");
  b->add_option("--duration", bench.duration, "Wall-clock seconds per cell instead of --ops");
  b->add_option("--reps", bench.reps, "Repetitions per cell");
  b->add_option("--seed", bench.seed, "Workload seed");
  b->add_flag("--lazy-delete", bench.lazy_delete, "Keep tombstones across rebuilds");
  b->add_option("--baseline", bench.baseline, "Tree the relative column is computed against");
  b->add_option("--out", bench.out, "Output file (default stdout)");
  b->add_option("--format", bench.format, "csv | markdown");
  b->add_option("--config", bench.config, "JSON document mirroring these flags");
  b->add_option("--rules", bench.rules, "JSON trend rules to check after the run");
  b->add_option("--B", bench.B, "SABT branching constant");
  b->add_option("--alpha", bench.alpha, "SAIT hint-array exponent");

  RangeArgs range;
  auto* r = app.add_subcommand("range", "Mixed range-query load on a range tree");
  r->add_option("--tree", range.tree, "sait sabt salt sa2t ist-baseline lazy-btree-baseline");
  r->add_option("--algebra", range.algebra, "sum-add | sum-assign | min");
  r->add_option("--keys", range.keys, "Number of keys");
  r->add_option("--ops", range.ops, "Range operations");
  r->add_option("--seed", range.seed, "Seed");
  r->add_flag("--lazy-delete", range.lazy_delete, "Keep tombstones across rebuilds");

  CLI11_PARSE(app, argc, argv);
  try {
    if (b->parsed()) return run_bench(bench, *b);
    if (range.algebra == "sum-add") return run_range<gsat::SumAdd>(range);
    if (range.algebra == "sum-assign") return run_range<gsat::SumAssign>(range);
    if (range.algebra == "min") return run_range<gsat::MinNoUpdate>(range);
    throw config_error("unknown algebra '" + range.algebra + "'");
  } catch (const gsat::bench::resource_error& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 4;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const gsat::contract_violation& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
}
