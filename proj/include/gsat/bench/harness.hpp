#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "gsat/baselines/btree.hpp"
#include "gsat/baselines/splay.hpp"
#include "gsat/policy.hpp"
#include "gsat/tree.hpp"
#include "gsat/workload.hpp"

namespace gsat::bench {

/// Unknown tree/workload names and other unusable configurations.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested cell would not fit in memory.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform face over every benchmarked structure.
class Subject {
 public:
  virtual ~Subject() = default;
  virtual void load(const std::vector<KeyRecord>& sorted) = 0;
  virtual void run(const workload::Operation& op) = 0;
  virtual OpStats stats() const = 0;
  virtual void reset_stats() = 0;
  Value sink = 0;  // keeps reads observable to the optimizer
};

namespace detail {

class GsatSubject final : public Subject {
 public:
  GsatSubject(DegreePolicy policy, DeleteMode mode) : tree_(policy, TreeOptions{mode}) {}
  void load(const std::vector<KeyRecord>& sorted) override {
    // Bounds hug the universe so interpolation sees the real key density.
    TreeOptions options{tree_.options().delete_mode};
    if (!sorted.empty()) {
      options.lb = sorted.front().key;
      options.rb = sorted.back().key + 1;
    }
    tree_ = GsatTree(sorted, tree_.policy(), options);
  }
  void run(const workload::Operation& op) override {
    switch (op.kind) {
      case workload::OpKind::get:
        if (auto v = tree_.get(op.key)) sink += *v;
        break;
      case workload::OpKind::insert: tree_.insert(op.key, op.value); break;
      case workload::OpKind::erase: tree_.erase(op.key); break;
    }
  }
  OpStats stats() const override { return tree_.stats(); }
  void reset_stats() override { tree_.reset_stats(); }

 private:
  GsatTree tree_;
};

template <class T>
class BaselineSubject final : public Subject {
 public:
  template <class... Args>
  explicit BaselineSubject(std::uint64_t seed, Args&&... args)
      : seed_(seed), tree_(std::forward<Args>(args)...) {}
  void load(const std::vector<KeyRecord>& sorted) override {
    // Shuffled so the splay tree does not start as a sorted chain.
    std::vector<std::size_t> order(sorted.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed_);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) tree_.insert(sorted[i].key, sorted[i].value);
    tree_.reset_stats();
  }
  void run(const workload::Operation& op) override {
    switch (op.kind) {
      case workload::OpKind::get:
        if (auto v = tree_.get(op.key)) sink += *v;
        break;
      case workload::OpKind::insert: tree_.insert(op.key, op.value); break;
      case workload::OpKind::erase: tree_.erase(op.key); break;
    }
  }
  OpStats stats() const override { return tree_.stats(); }
  void reset_stats() override { tree_.reset_stats(); }

 private:
  std::uint64_t seed_;
  T tree_;
};

}  // namespace detail

inline const std::vector<std::string>& tree_names() {
  static const std::vector<std::string> names{"sait", "sabt", "salt", "sa2t", "ist-baseline",
                                              "lazy-btree-baseline", "btree", "splay"};
  return names;
}

/// Builds an empty structure by name. Baselines delete physically and ignore
/// the delete mode.
inline std::unique_ptr<Subject> make_subject(const std::string& name, DeleteMode mode,
                                             const PolicyParams& params, std::uint64_t seed) {
  if (name == "splay") return std::make_unique<detail::BaselineSubject<baselines::SplayTree>>(seed);
  if (name == "btree") {
    return std::make_unique<detail::BaselineSubject<baselines::ClassicBTree>>(seed, 8);
  }
  if (!is_policy_name(name)) throw config_error("unknown tree '" + name + "'");
  return std::make_unique<detail::GsatSubject>(policy_from_name(name, params), mode);
}

struct BenchConfig {
  std::vector<std::string> trees{"splay", "sabt"};
  std::vector<workload::Distribution> workloads{workload::Uniform{}};
  workload::OperationMix mix = workload::OperationMix::read_only();
  DeleteMode delete_mode = DeleteMode::standard;
  std::size_t keys = 100'000;
  std::size_t ops = 1'000'000;
  std::optional<std::size_t> warmup;  // defaults to 10 * keys
  std::optional<double> duration;     // seconds; switches to wall-clock mode
  unsigned reps = 5;
  std::uint64_t seed = 1;
  std::string baseline = "splay";
  PolicyParams params;

  std::size_t warmup_ops() const { return warmup.value_or(10 * keys); }

  void validate() const {
    if (trees.empty()) throw config_error("no trees configured");
    if (workloads.empty()) throw config_error("no workloads configured");
    if (reps < 1) throw config_error("repetitions must be >= 1");
    if (keys == 0) throw config_error("keys must be >= 1");
    if (ops == 0) throw config_error("ops must be >= 1");
    if (duration && !(*duration > 0)) throw config_error("duration must be > 0");
    for (const auto& t : trees) {
      if (std::find(tree_names().begin(), tree_names().end(), t) == tree_names().end()) {
        throw config_error("unknown tree '" + t + "'");
      }
    }
    if (std::find(tree_names().begin(), tree_names().end(), baseline) == tree_names().end()) {
      throw config_error("unknown baseline tree '" + baseline + "'");
    }
    try {
      params.validate();
      for (const auto& w : workloads) spec_for(w).validate();
    } catch (const contract_violation& e) {
      throw config_error(e.what());
    }
  }

  workload::WorkloadSpec spec_for(const workload::Distribution& d) const {
    return {keys, d, mix, delete_mode, warmup_ops() + ops, seed};
  }

  std::string mix_label() const {
    return mix.name() + (delete_mode == DeleteMode::lazy_delete ? "+lazy" : "");
  }
};

struct BenchResult {
  std::string tree;
  std::string workload;
  std::string mix;
  std::size_t keys = 0;
  double ops_per_sec = 0;     // mean over repetitions
  double relative = 0;        // ops_per_sec / baseline ops_per_sec on the same workload
  double depth_mean = 0;      // search-path nodes per measured op
  double nodes_per_op = 0;    // search-path nodes plus rebuilt records per measured op
  std::uint64_t rebuilds = 0;
  std::uint64_t measured_ops = 0;
  bool is_baseline = false;
};

/// Rough bytes needed by one cell, used to refuse hopeless configurations.
inline double estimated_bytes(const BenchConfig& cfg) {
  const double per_key = 256;  // node share, records, rebuild scratch
  const double per_op = sizeof(workload::Operation);
  return per_key * static_cast<double>(cfg.keys) +
         per_op * static_cast<double>(cfg.warmup_ops() + cfg.ops);
}

inline double physical_memory_bytes() {
  const long pages = ::sysconf(_SC_PHYS_PAGES);
  const long page = ::sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) return 0;
  return static_cast<double>(pages) * static_cast<double>(page);
}

/// Runs one (tree, workload) cell: build over the universe with ac = 1,
/// warm up, then time the measured stream. Repetitions replay the same
/// stream, so non-timing statistics are identical across them.
inline BenchResult run_cell(const BenchConfig& cfg, const std::string& tree,
                            const workload::Distribution& dist) {
  const auto spec = cfg.spec_for(dist);
  const auto stream = workload::generate(spec);
  const auto warm_end = stream.begin() + static_cast<std::ptrdiff_t>(cfg.warmup_ops());

  std::vector<KeyRecord> universe(cfg.keys);
  for (std::size_t k = 0; k < cfg.keys; ++k) {
    universe[k] = {static_cast<Key>(k), static_cast<Value>(k), 1, false};
  }

  BenchResult r{tree, workload::to_string(dist), cfg.mix_label(), cfg.keys};
  double total_rate = 0;
  for (unsigned rep = 0; rep < cfg.reps; ++rep) {
    auto subject = make_subject(tree, cfg.delete_mode, cfg.params, cfg.seed);
    subject->load(universe);
    for (auto it = stream.begin(); it != warm_end; ++it) subject->run(*it);
    subject->reset_stats();

    std::uint64_t done = 0;
    const auto start = std::chrono::steady_clock::now();
    double elapsed = 0;
    if (cfg.duration) {
      // Wall-clock mode: cycle through the measured stream until time is up.
      for (auto it = warm_end;; ++it) {
        if (it == stream.end()) it = warm_end;
        subject->run(*it);
        if (++done % 1024 == 0) {
          elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          if (elapsed >= *cfg.duration) break;
        }
      }
    } else {
      for (auto it = warm_end; it != stream.end(); ++it) subject->run(*it);
      done = cfg.ops;
      elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    total_rate += static_cast<double>(done) / std::max(elapsed, 1e-9);

    const OpStats s = subject->stats();
    r.measured_ops = done;
    r.depth_mean = static_cast<double>(s.nodes_visited) / static_cast<double>(done);
    r.nodes_per_op =
        static_cast<double>(s.nodes_visited + s.rebuild_records) / static_cast<double>(done);
    r.rebuilds = s.rebuilds;
  }
  r.ops_per_sec = total_rate / cfg.reps;
  return r;
}

/// Every configured tree on every workload. The baseline is run as well
/// (and reported) when it is not among the configured trees.
inline std::vector<BenchResult> run_matrix(const BenchConfig& cfg) {
  cfg.validate();
  const double need = estimated_bytes(cfg), have = physical_memory_bytes();
  if (have > 0 && need > 0.8 * have) {
    std::ostringstream msg;
    msg << "a cell with " << cfg.keys << " keys and " << cfg.warmup_ops() + cfg.ops
        << " ops needs about " << static_cast<std::uint64_t>(need / (1 << 20))
        << " MiB; only " << static_cast<std::uint64_t>(have / (1 << 20)) << " MiB installed";
    throw resource_error(msg.str());
  }
  std::vector<std::string> trees = cfg.trees;
  if (std::find(trees.begin(), trees.end(), cfg.baseline) == trees.end()) {
    trees.insert(trees.begin(), cfg.baseline);
  }

  std::vector<BenchResult> results;
  for (const auto& dist : cfg.workloads) {
    const std::size_t first = results.size();
    for (const auto& t : trees) results.push_back(run_cell(cfg, t, dist));
    const auto base = std::find_if(results.begin() + static_cast<std::ptrdiff_t>(first),
                                   results.end(),
                                   [&](const BenchResult& x) { return x.tree == cfg.baseline; });
    for (std::size_t i = first; i < results.size(); ++i) {
      results[i].is_baseline = results[i].tree == cfg.baseline;
      results[i].relative =
          results[i].is_baseline ? 1.0 : results[i].ops_per_sec / base->ops_per_sec;
    }
  }
  return results;
}

enum class ReportFormat { csv, markdown };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  throw config_error("unknown format '" + s + "' (csv|markdown)");
}

inline void emit_report(const std::vector<BenchResult>& results, ReportFormat format,
                        std::ostream& out) {
  auto fixed = [](double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
  };
  if (format == ReportFormat::csv) {
    out << "tree,workload,mix,keys,ops_per_sec,relative,depth_mean,nodes_per_op,rebuilds\n";
    for (const auto& r : results) {
      out << r.tree << ',' << r.workload << ',' << r.mix << ',' << r.keys << ','
          << fixed(r.ops_per_sec, 1) << ',' << fixed(r.relative, 4) << ','
          << fixed(r.depth_mean, 4) << ',' << fixed(r.nodes_per_op, 4) << ',' << r.rebuilds
          << '\n';
    }
    return;
  }

  // One row per tree, one column per workload; the baseline shows absolute
  // throughput and everything else is relative to it.
  std::vector<std::string> trees, workloads;
  for (const auto& r : results) {
    if (std::find(trees.begin(), trees.end(), r.tree) == trees.end()) trees.push_back(r.tree);
    if (std::find(workloads.begin(), workloads.end(), r.workload) == workloads.end()) {
      workloads.push_back(r.workload);
    }
  }
  out << "| tree |";
  for (const auto& w : workloads) out << ' ' << w << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < workloads.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& t : trees) {
    out << "| " << t << " |";
    for (const auto& w : workloads) {
      const auto it = std::find_if(results.begin(), results.end(), [&](const BenchResult& r) {
        return r.tree == t && r.workload == w;
      });
      if (it == results.end()) {
        out << " - |";
      } else if (it->is_baseline) {
        out << ' ' << fixed(it->ops_per_sec / 1e6, 2) << "M ops/s |";
      } else {
        out << " x" << fixed(it->relative, 2) << " (" << fixed(it->nodes_per_op, 2)
            << " n/op) |";
      }
    }
    out << '\n';
  }
  if (!results.empty()) {
    out << "\nmix: " << results.front().mix << ", keys: " << results.front().keys
        << ", rebuilds and depth in the CSV output\n";
  }
}

/// A declarative inequality between two result cells, for example
/// nodes_per_op(sabt, xy:99/01) < nodes_per_op(sabt, uniform).
struct TrendRule {
  struct Cell {
    std::string tree;
    std::string workload;
    std::string mix;  // empty matches any mix
  };
  std::string name;
  std::string metric = "nodes_per_op";  // ops_per_sec|relative|depth_mean|nodes_per_op|rebuilds
  Cell lhs{};
  std::string op = "<";  // < <= > >=
  Cell rhs{};
};

struct TrendOutcome {
  std::string name;
  bool passed = false;
  double lhs = 0;
  double rhs = 0;
  std::string detail;
};

inline double metric_of(const BenchResult& r, const std::string& metric) {
  if (metric == "ops_per_sec") return r.ops_per_sec;
  if (metric == "relative") return r.relative;
  if (metric == "depth_mean") return r.depth_mean;
  if (metric == "nodes_per_op") return r.nodes_per_op;
  if (metric == "rebuilds") return static_cast<double>(r.rebuilds);
  throw config_error("unknown metric '" + metric + "'");
}

inline std::vector<TrendOutcome> verify_trends(const std::vector<BenchResult>& results,
                                               const std::vector<TrendRule>& rules) {
  std::vector<TrendOutcome> out;
  for (const auto& rule : rules) {
    TrendOutcome o;
    o.name = rule.name;
    auto find = [&](const TrendRule::Cell& c) -> const BenchResult* {
      for (const auto& r : results) {
        if (r.tree == c.tree && r.workload == c.workload && (c.mix.empty() || r.mix == c.mix)) {
          return &r;
        }
      }
      return nullptr;
    };
    const BenchResult* a = find(rule.lhs);
    const BenchResult* b = find(rule.rhs);
    if (!a || !b) {
      o.detail = "missing cell";
      out.push_back(o);
      continue;
    }
    o.lhs = metric_of(*a, rule.metric);
    o.rhs = metric_of(*b, rule.metric);
    if (rule.op == "<") {
      o.passed = o.lhs < o.rhs;
    } else if (rule.op == "<=") {
      o.passed = o.lhs <= o.rhs;
    } else if (rule.op == ">") {
      o.passed = o.lhs > o.rhs;
    } else if (rule.op == ">=") {
      o.passed = o.lhs >= o.rhs;
    } else {
      throw config_error("unknown comparison '" + rule.op + "'");
    }
    std::ostringstream d;
    d << rule.metric << '(' << a->tree << ',' << a->workload << ',' << a->mix << ")=" << o.lhs
      << ' ' << rule.op << ' ' << rule.metric << '(' << b->tree << ',' << b->workload << ','
      << b->mix << ")=" << o.rhs;
    o.detail = d.str();
    out.push_back(o);
  }
  return out;
}

}  // namespace gsat::bench
