#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsat/algebra.hpp"
#include "gsat/interpolation_index.hpp"
#include "gsat/policy.hpp"
#include "gsat/slot_tree.hpp"
#include "gsat/types.hpp"

namespace gsat {

/// Node extension for trees without range aggregates.
struct NoAggregates {
  static constexpr bool enabled = false;
  struct node_state {};
};

/// Node extension carrying per-node slot trees for range queries. `counts`
/// holds subtree/representative access counts, its tags the access
/// increments still owed to child subtrees; `values` does the same for the
/// algebra's aggregates and pending updates.
template <RangeAlgebra A>
struct Aggregates {
  static constexpr bool enabled = true;
  using algebra = A;
  struct node_state {
    SlotTree<CountOps> counts;
    SlotTree<ValueOps<A>> values;
  };
};

/// Reported to the rebuild observer each time a subtree is rebuilt.
struct RebuildEvent {
  std::size_t depth = 0;  // depth of the rebuilt subtree's root
  Key lb = 0;
  Key rb = 0;
  std::uint64_t counter = 0;  // c at the moment of the rebuild
  std::uint64_t im = 0;
  std::uint64_t m_before = 0;
  std::uint64_t m_after = 0;
  std::size_t records = 0;
};

struct TreeOptions {
  DeleteMode delete_mode = DeleteMode::standard;
  Key lb = kMinKey;  // the tree owns keys in [lb, rb)
  Key rb = kMaxKey;
  SlotLayout slot_layout = SlotLayout::automatic;  // only used with aggregates
};

/// Generic self-adjusting multiway search tree.
///
/// Each node holds up to degree(m) representatives chosen so that every
/// child subtree carries at most m / (degree(m) + 1) of the node's accesses
/// when it is (re)built. Every traversal bumps a per-node counter; when the
/// counter of some node on the path exceeds im / 4 (im = m at its last
/// rebuild), the shallowest such subtree is rebuilt into its ideal shape from
/// the current access counts. Deletes only place tombstones.
///
/// Single writer: one mutating operation at a time.
template <class Ext = NoAggregates>
class BasicTree {
 protected:
  static constexpr bool kRanges = Ext::enabled;

 public:
  struct Entry {
    Value value = 0;
    std::uint64_t ac = 1;
    bool marked = false;
  };

  struct Node {
    std::vector<Key> rep;
    std::vector<Entry> entry;                   // aligned with rep
    std::vector<std::unique_ptr<Node>> child;   // rep.size() + 1 slots, empty ranges are null
    std::uint64_t m = 0;       // accesses to all keys of the subtree
    std::uint64_t im = 0;      // m at the last rebuild
    std::uint64_t c = 0;       // traversals since the last rebuild
    std::uint64_t n_live = 0;  // unmarked keys in the subtree
    Key lb = 0;
    Key rb = 0;
    InterpolationIndex index;
    [[no_unique_address]] typename Ext::node_state agg;

    std::size_t degree() const { return rep.size(); }
    Key child_lb(std::size_t i) const { return i == 0 ? lb : rep[i - 1]; }
    Key child_rb(std::size_t i) const { return i == rep.size() ? rb : rep[i]; }
  };
  using NodePtr = std::unique_ptr<Node>;
  using RebuildObserver = std::function<void(const RebuildEvent&)>;

  explicit BasicTree(DegreePolicy policy = DegreePolicy::sabt(), TreeOptions options = {})
      : policy_(policy), options_(options) {
    if (options_.lb >= options_.rb) throw contract_violation("tree bounds need lb < rb");
  }

  BasicTree(std::span<const KeyRecord> records, DegreePolicy policy, TreeOptions options = {})
      : BasicTree(policy, options) {
    assign(records);
  }

  BasicTree(BasicTree&&) noexcept = default;
  BasicTree& operator=(BasicTree&&) noexcept = default;

  /// Replaces the contents with an ideal tree over `records`.
  void assign(std::span<const KeyRecord> records) {
    root_ = build_ideal(records, options_.lb, options_.rb, policy_, options_.slot_layout);
  }

  std::optional<Value> get(Key key) { return access(Op::get, key, 0); }
  void insert(Key key, Value value) { access(Op::insert, key, value); }
  void erase(Key key) { access(Op::erase, key, 0); }

  bool empty() const { return root_ == nullptr; }
  std::size_t size() const { return root_ ? root_->n_live : 0; }
  std::uint64_t total_accesses() const { return root_ ? root_->m : 0; }
  const Node* root() const { return root_.get(); }
  const DegreePolicy& policy() const { return policy_; }
  const TreeOptions& options() const { return options_; }

  const OpStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }
  void set_rebuild_observer(RebuildObserver observer) { observer_ = std::move(observer); }

  /// Number of nodes above the node holding `key` (root is depth 0), or
  /// nullopt if the key is not physically present. No side effects.
  std::optional<std::size_t> depth_of(Key key) const {
    if (key < options_.lb || key >= options_.rb) return std::nullopt;
    std::size_t depth = 0;
    for (const Node* node = root_.get(); node != nullptr; ++depth) {
      const Slot s = search(*node, key);
      if (s.hit) return depth;
      node = node->child[s.index].get();
    }
    return std::nullopt;
  }

  /// Current record of a physically present key (marked or not). Does not
  /// count as an access.
  std::optional<KeyRecord> find_record(Key key) {
    if (key < options_.lb || key >= options_.rb) return std::nullopt;
    for (Node* node = root_.get(); node != nullptr;) {
      const Slot s = search(*node, key);
      if (s.hit) {
        if constexpr (kRanges) sync_rep(*node, s.index);
        const Entry& e = node->entry[s.index];
        return KeyRecord{key, e.value, e.ac, e.marked};
      }
      if constexpr (kRanges) sync_child(*node, s.index);
      node = node->child[s.index].get();
    }
    return std::nullopt;
  }

  /// In-order records; tombstoned keys are included iff `include_marked`.
  std::vector<KeyRecord> flatten(bool include_marked = false) {
    if constexpr (kRanges) {
      if (root_) materialize(*root_);
    }
    return flatten(root_.get(), include_marked);
  }

  /// Number of node levels (0 for the empty tree).
  std::size_t height() const { return height(root_.get()); }

  bool check_ideal() const { return check_ideal(root_.get(), policy_); }

  // ---- structural helpers usable on any subtree ------------------------

  static std::vector<KeyRecord> flatten(const Node* node, bool include_marked) {
    std::vector<KeyRecord> out;
    if (node != nullptr) {
      out.reserve(node->n_live);
      append_records(*node, include_marked, out);
    }
    return out;
  }

  static std::size_t height(const Node* node) {
    if (node == nullptr) return 0;
    std::size_t h = 0;
    for (const auto& c : node->child) h = std::max(h, height(c.get()));
    return h + 1;
  }

  static std::size_t node_count(const Node* node) {
    if (node == nullptr) return 0;
    std::size_t n = 1;
    for (const auto& c : node->child) n += node_count(c.get());
    return n;
  }

  /// Every child subtree of every node carries at most m / (degree(m) + 1)
  /// accesses. Integer check: m_child * (degree(m) + 1) <= m.
  static bool check_ideal(const Node* node, const DegreePolicy& policy) {
    if (node == nullptr) return true;
    const std::uint64_t d = policy.degree(node->m);
    for (const auto& c : node->child) {
      if (!c) continue;
      if (c->m * (d + 1) > node->m) return false;
      if (!check_ideal(c.get(), policy)) return false;
    }
    return true;
  }

  /// Slot of `key` in `node`: representative index on a hit, otherwise the
  /// child slot whose interval contains the key.
  static Slot node_search(const Node& node, Key key) {
    if (key < node.lb || key >= node.rb) {
      throw contract_violation("node_search: key " + std::to_string(key) + " outside [" +
                               std::to_string(node.lb) + ", " + std::to_string(node.rb) + ")");
    }
    return search(node, key);
  }

  /// Builds an ideal tree over strictly increasing records inside [lb, rb).
  /// Representatives are picked left to right: each is the first element at
  /// which the running access total since the previous representative
  /// reaches ceil(m / (degree(m) + 1)).
  static NodePtr build_ideal(std::span<const KeyRecord> records, Key lb, Key rb,
                             const DegreePolicy& policy,
                             SlotLayout layout = SlotLayout::automatic) {
    if (lb >= rb) throw contract_violation("build_ideal: bounds need lb < rb");
    std::vector<std::uint64_t> prefix(records.size() + 1, 0);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const KeyRecord& r = records[i];
      if (r.key < lb || r.key >= rb) {
        throw contract_violation("build_ideal: key " + std::to_string(r.key) +
                                 " outside bounds");
      }
      if (i > 0 && records[i - 1].key >= r.key) {
        throw contract_violation("build_ideal: keys must be strictly increasing");
      }
      if (policy.access_weighted && r.ac == 0) {
        throw contract_violation("build_ideal: access counts must be >= 1");
      }
      prefix[i + 1] = prefix[i] + (policy.access_weighted ? r.ac : 1);
    }
    Builder builder{records, prefix, policy, layout};
    return builder.build(lb, rb, 0, records.size());
  }

 protected:
  enum class Op { get, insert, erase };

  struct Frame {
    Node* node = nullptr;
    NodePtr* link = nullptr;  // owning slot of `node`
    std::size_t child = 0;    // child slot taken from this node, if any
  };

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  static bool overflows(const Node& node) { return 4 * node.c > node.im; }

  static Slot search(const Node& node, Key key) {
    if (!node.index.empty()) return node.index.search(node.rep, key);
    return binary_slot(node.rep, key);
  }

  static void append_records(const Node& node, bool include_marked, std::vector<KeyRecord>& out) {
    for (std::size_t i = 0; i <= node.rep.size(); ++i) {
      if (const Node* c = node.child[i].get()) append_records(*c, include_marked, out);
      if (i == node.rep.size()) break;
      const Entry& e = node.entry[i];
      if (include_marked || !e.marked) out.push_back({node.rep[i], e.value, e.ac, e.marked});
    }
  }

  struct Builder {
    std::span<const KeyRecord> records;
    std::span<const std::uint64_t> prefix;
    const DegreePolicy& policy;
    SlotLayout layout;

    NodePtr build(Key lb, Key rb, std::size_t lt, std::size_t rt) {
      if (rt <= lt) return nullptr;
      const std::uint64_t m = prefix[rt] - prefix[lt];
      const std::uint64_t d = policy.degree(m);
      const std::uint64_t threshold = std::max<std::uint64_t>(1, (m + d) / (d + 1));

      auto node = std::make_unique<Node>();
      node->lb = lb;
      node->rb = rb;
      node->m = node->im = m;
      const auto reps = static_cast<std::size_t>(std::min<std::uint64_t>(d, rt - lt));
      node->rep.reserve(reps);
      node->entry.reserve(reps);
      node->child.reserve(reps + 1);

      Key a = lb;
      for (std::uint64_t i = 0; i < d && lt < rt; ++i) {
        // first `to` in (lt, rt] whose running total reaches the threshold
        const auto first = prefix.begin() + static_cast<std::ptrdiff_t>(lt + 1);
        const auto last = prefix.begin() + static_cast<std::ptrdiff_t>(rt);
        const auto it = std::lower_bound(first, last, prefix[lt] + threshold);
        const auto to = static_cast<std::size_t>(it - prefix.begin());
        const KeyRecord& r = records[to - 1];
        node->child.push_back(build(a, r.key, lt, to - 1));
        node->rep.push_back(r.key);
        node->entry.push_back({r.value, policy.access_weighted ? r.ac : 1, r.marked});
        a = r.key;
        lt = to;
      }
      node->child.push_back(build(a, rb, lt, rt));

      for (std::size_t i = 0; i < node->rep.size(); ++i) node->n_live += !node->entry[i].marked;
      for (const auto& c : node->child) {
        if (c) node->n_live += c->n_live;
      }
      if (policy.uses_interpolation()) {
        node->index = InterpolationIndex::build(node->rep, lb, rb, m, policy.params.alpha);
      }
      if constexpr (kRanges) init_aggregates(*node, policy, layout);
      return node;
    }
  };

  NodePtr make_leaf(Key key, Value value, Key lb, Key rb) const {
    auto node = std::make_unique<Node>();
    node->rep.push_back(key);
    node->entry.push_back({value, 1, false});
    node->child.resize(2);
    node->m = node->im = 1;
    node->n_live = 1;
    node->lb = lb;
    node->rb = rb;
    if (policy_.uses_interpolation()) {
      node->index = InterpolationIndex::build(node->rep, lb, rb, 1, policy_.params.alpha);
    }
    if constexpr (kRanges) init_aggregates(*node, policy_, options_.slot_layout);
    return node;
  }

  std::optional<Value> access(Op op, Key key, Value value) {
    if (key < options_.lb || key >= options_.rb) {
      if (op == Op::insert) throw contract_violation("insert: key outside tree bounds");
      return std::nullopt;
    }
    // Size-weighted trees only count structural operations.
    const bool counted = policy_.access_weighted || op != Op::get;
    const std::uint64_t credit = policy_.access_weighted ? 1 : 0;

    path_.clear();
    std::size_t target = kNone;
    NodePtr* link = &root_;
    std::optional<Value> result;
    std::uint64_t dm = 0;
    std::int64_t dlive = 0;
    bool found = false;
    std::size_t hit = 0;

    while (Node* node = link->get()) {
      path_.push_back({node, link, 0});
      ++stats_.nodes_visited;
      if (counted) {
        ++node->c;
        if (target == kNone && overflows(*node)) target = path_.size() - 1;
      }
      const Slot s = search(*node, key);
      if (s.hit) {
        if constexpr (kRanges) sync_rep(*node, s.index);
        Entry& e = node->entry[s.index];
        switch (op) {
          case Op::get:
            if (!e.marked) result = e.value;
            break;
          case Op::insert:
            if (e.marked) {
              e.marked = false;
              e.value = value;
              dlive = 1;
            }
            break;
          case Op::erase:
            if (!e.marked) {
              e.marked = true;
              dlive = -1;
            }
            break;
        }
        e.ac += credit;
        dm = credit;
        found = true;
        hit = s.index;
        break;
      }
      if constexpr (kRanges) sync_child(*node, s.index);
      path_.back().child = s.index;
      link = &node->child[s.index];
    }

    if (!found && op == Op::insert) {
      Key lb = options_.lb, rb = options_.rb;
      if (!path_.empty()) {
        const Frame& parent = path_.back();
        lb = parent.node->child_lb(parent.child);
        rb = parent.node->child_rb(parent.child);
      }
      *link = make_leaf(key, value, lb, rb);
      dm = 1;
      dlive = 1;
    }

    for (const Frame& f : path_) {
      f.node->m += dm;
      f.node->n_live = static_cast<std::uint64_t>(static_cast<std::int64_t>(f.node->n_live) + dlive);
    }
    if constexpr (kRanges) {
      if (found) refresh_rep(*path_.back().node, hit);
      const std::size_t descended = found ? path_.size() - 1 : path_.size();
      for (std::size_t i = descended; i-- > 0;) refresh_child(*path_[i].node, path_[i].child);
    }
    if (target != kNone) rebuild_on_path(std::span<Frame>(path_.data(), target + 1));
    return result;
  }

  /// Rebuilds path.back() in place, then repairs the ancestors in `path`.
  void rebuild_on_path(std::span<Frame> path) {
    const Frame& f = path.back();
    Node* old = f.node;
    RebuildEvent event;
    event.depth = path.size() - 1;
    event.lb = old->lb;
    event.rb = old->rb;
    event.counter = old->c;
    event.im = old->im;
    event.m_before = old->m;

    *f.link = rebuild(std::move(*f.link), event.records);
    event.m_after = *f.link ? (*f.link)->m : 0;

    const std::uint64_t dropped = event.m_before - event.m_after;
    for (std::size_t j = path.size() - 1; j-- > 0;) {
      path[j].node->m -= dropped;
      if constexpr (kRanges) refresh_child(*path[j].node, path[j].child);
    }
    ++stats_.rebuilds;
    stats_.rebuild_records += event.records;
    if (observer_) observer_(event);
  }

  /// Flattens a subtree and rebuilds it ideally over the same bounds.
  /// Standard mode keeps only unmarked keys; lazy-delete keeps everything.
  NodePtr rebuild(NodePtr node, std::size_t& records_out) {
    if constexpr (kRanges) materialize(*node);
    const bool keep_marked = options_.delete_mode == DeleteMode::lazy_delete;
    const auto records = flatten(node.get(), keep_marked);
    records_out = records.size();
    const Key lb = node->lb, rb = node->rb;
    node.reset();
    return build_ideal(records, lb, rb, policy_, options_.slot_layout);
  }

  // ---- aggregate maintenance (trees with range support only) -------------

  static void init_aggregates(Node& node, const DegreePolicy& policy, SlotLayout layout) {
    using A = typename Ext::algebra;
    const std::size_t k = node.rep.size();
    std::vector<typename CountOps::value_type> counts(2 * k + 1);
    std::vector<typename ValueOps<A>::value_type> values(2 * k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
      if (const Node* c = node.child[i].get()) {
        counts[2 * i] = {c->m, c->n_live};
        values[2 * i] = {c->agg.values.total().agg, c->n_live};
      }
      if (i == k) break;
      const Entry& e = node.entry[i];
      const std::uint64_t live = e.marked ? 0 : 1;
      counts[2 * i + 1] = {e.ac, live};
      values[2 * i + 1] = {e.marked ? A::identity() : A::lift(e.value), live};
    }
    const bool segment = layout == SlotLayout::segment ||
                         (layout == SlotLayout::automatic && policy.degree(node.m) > 32);
    node.agg.counts.assign(counts, segment);
    node.agg.values.assign(values, segment);
  }

  /// Pulls the representative's pending increments/updates into its entry.
  static void sync_rep(Node& node, std::size_t i) {
    using A = typename Ext::algebra;
    Entry& e = node.entry[i];
    const auto count = node.agg.counts.leaf(2 * i + 1);
    const auto value = node.agg.values.leaf(2 * i + 1);
    if (!e.marked) {
      e.ac = count.m;
      e.value = A::lower(value.agg);
    }
  }

  /// Hands the child slot's pending work to the child subtree root.
  static void sync_child(Node& node, std::size_t i) {
    const auto p = node.agg.counts.take_tag(2 * i);
    const auto u = node.agg.values.take_tag(2 * i);
    if (Node* c = node.child[i].get()) {
      c->m += p * c->n_live;
      c->agg.counts.apply_all(p);
      c->agg.values.apply_all(u);
    }
  }

  static void refresh_child(Node& node, std::size_t i) {
    using A = typename Ext::algebra;
    if (const Node* c = node.child[i].get()) {
      node.agg.counts.set(2 * i, {c->m, c->n_live});
      node.agg.values.set(2 * i, {c->agg.values.total().agg, c->n_live});
    } else {
      node.agg.counts.set(2 * i, {});
      node.agg.values.set(2 * i, {A::identity(), 0});
    }
  }

  static void refresh_rep(Node& node, std::size_t i) {
    using A = typename Ext::algebra;
    const Entry& e = node.entry[i];
    const std::uint64_t live = e.marked ? 0 : 1;
    node.agg.counts.set(2 * i + 1, {e.ac, live});
    node.agg.values.set(2 * i + 1, {e.marked ? A::identity() : A::lift(e.value), live});
  }

  /// Pushes all pending work down to the entries of every key in the subtree.
  static void materialize(Node& node) {
    for (std::size_t i = 0; i <= node.rep.size(); ++i) {
      sync_child(node, i);
      if (Node* c = node.child[i].get()) materialize(*c);
      if (i < node.rep.size()) sync_rep(node, i);
    }
  }

  DegreePolicy policy_;
  TreeOptions options_;
  NodePtr root_;
  OpStats stats_;
  RebuildObserver observer_;
  std::vector<Frame> path_;
};

using GsatTree = BasicTree<NoAggregates>;

}  // namespace gsat
