#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gsat/algebra.hpp"
#include "gsat/tree.hpp"

namespace gsat {

/// Self-adjusting tree with range queries. Every key reported by or
/// updated through a range query gains one access, so ranges that are
/// queried often migrate toward the root like hot point keys do.
///
/// A query [a, b] splits at the first node where a and b fall into
/// different slots. Slots strictly between the two boundary slots are
/// handled through the node's slot trees (aggregate read, lazy update,
/// lazy access increment); only the two boundary children are descended.
template <RangeAlgebra A>
class RangeTree : public BasicTree<Aggregates<A>> {
  using Base = BasicTree<Aggregates<A>>;
  using typename Base::Frame;
  using typename Base::Node;
  using typename Base::NodePtr;

 public:
  using algebra = A;
  using value_type = typename A::value_type;
  using update_type = typename A::update_type;

  using Base::Base;

  /// Unmarked keys in [a, b], ascending.
  std::vector<Key> range_get(Key a, Key b) {
    std::vector<Key> out;
    Walk w{a, b, Mode::get};
    w.out = &out;
    run(w);
    return out;
  }

  /// Combination, in key order, of the values of unmarked keys in [a, b].
  value_type range_calculate(Key a, Key b) {
    Walk w{a, b, Mode::calculate};
    run(w);
    return w.acc;
  }

  /// Applies `update` to the value of every unmarked key in [a, b].
  void range_update(Key a, Key b, const update_type& update) {
    Walk w{a, b, Mode::update};
    w.update = update;
    run(w);
  }

  /// Unmarked keys of the whole tree, flushing pending work on the way.
  std::vector<Key> collect_nonmarked() {
    std::vector<Key> out;
    if (this->root_) collect(*this->root_, out);
    return out;
  }

  /// Total bookkeeping cells held by the per-node slot trees.
  std::size_t aggregate_cells() const { return cells(this->root_.get()); }

 private:
  enum class Mode { get, calculate, update };

  struct Walk {
    Key a;
    Key b;
    Mode mode;
    std::vector<Key>* out = nullptr;
    value_type acc = A::identity();
    update_type update = A::no_update();
    std::vector<Frame> stack{};
    std::vector<std::vector<Frame>> targets{};  // shallowest overflow per path
    std::size_t open_targets = 0;               // targets on the current stack
  };

  void run(Walk& w) {
    if (w.a > w.b) throw contract_violation("range query needs a <= b");
    const Key a = std::max(w.a, this->options_.lb);
    const Key b = std::min(w.b, this->options_.rb - 1);
    if (!this->root_ || a > b) return;
    w.a = a;
    w.b = b;
    visit(this->root_, w);
    // Targets sit on disjoint paths, so each rebuild leaves the others valid.
    for (auto& path : w.targets) this->rebuild_on_path(path);
  }

  /// Returns the number of live keys in range inside this subtree; each of
  /// them has been credited one access.
  std::uint64_t visit(NodePtr& link, Walk& w) {
    Node& node = *link;
    w.stack.push_back({&node, &link, 0});
    ++this->stats_.nodes_visited;
    ++node.c;
    bool is_target = false;
    if (w.open_targets == 0 && Base::overflows(node)) {
      is_target = true;
      ++w.open_targets;
      w.targets.push_back(w.stack);
    }

    const Slot sa = Base::search(node, std::max(w.a, node.lb));
    const Slot sb = Base::search(node, std::min(w.b, node.rb - 1));
    const std::size_t first = sa.hit ? 2 * sa.index + 1 : 2 * sa.index;
    const std::size_t last = sb.hit ? 2 * sb.index + 1 : 2 * sb.index;
    // A boundary child is only entered when the query cuts through it.
    auto cut = [&](std::size_t s) {
      return s % 2 == 0 && (w.a > node.child_lb(s / 2) || w.b < node.child_rb(s / 2) - 1);
    };
    const bool left_cut = cut(first);
    const bool right_cut = last != first && cut(last);

    std::uint64_t counted = 0;
    if (left_cut) counted += descend(node, first / 2, w);
    const std::size_t cl = left_cut ? first + 1 : first;
    const std::size_t cr = right_cut ? last - 1 : last;
    if (cl <= cr) counted += cover(node, cl, cr, w);
    if (right_cut) counted += descend(node, last / 2, w);

    node.m += counted;
    if (is_target) --w.open_targets;
    w.stack.pop_back();
    return counted;
  }

  std::uint64_t descend(Node& node, std::size_t i, Walk& w) {
    Base::sync_child(node, i);
    w.stack.back().child = i;
    if (!node.child[i]) return 0;
    const std::uint64_t counted = visit(node.child[i], w);
    Base::refresh_child(node, i);
    return counted;
  }

  /// Slots [cl, cr] lie entirely inside the query.
  std::uint64_t cover(Node& node, std::size_t cl, std::size_t cr, Walk& w) {
    auto& agg = node.agg;
    switch (w.mode) {
      case Mode::get:
        for (std::size_t s = cl; s <= cr; ++s) {
          if (s % 2 == 1) {
            Base::sync_rep(node, s / 2);
            if (!node.entry[s / 2].marked) w.out->push_back(node.rep[s / 2]);
          } else {
            Base::sync_child(node, s / 2);
            if (Node* c = node.child[s / 2].get()) collect(*c, *w.out);
          }
        }
        break;
      case Mode::calculate:
        w.acc = A::combine(w.acc, agg.values.query(cl, cr).agg);
        break;
      case Mode::update:
        agg.values.apply(cl, cr, w.update);
        break;
    }
    const std::uint64_t live = agg.counts.query(cl, cr).live;
    agg.counts.apply(cl, cr, 1);
    return live;
  }

  void collect(Node& node, std::vector<Key>& out) {
    for (std::size_t i = 0; i <= node.rep.size(); ++i) {
      Base::sync_child(node, i);
      if (Node* c = node.child[i].get()) collect(*c, out);
      if (i == node.rep.size()) break;
      Base::sync_rep(node, i);
      if (!node.entry[i].marked) out.push_back(node.rep[i]);
    }
  }

  static std::size_t cells(const Node* node) {
    if (node == nullptr) return 0;
    std::size_t total = node->agg.counts.cells() + node->agg.values.cells();
    for (const auto& c : node->child) total += cells(c.get());
    return total;
  }
};

}  // namespace gsat
