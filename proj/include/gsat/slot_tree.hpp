#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "gsat/algebra.hpp"

namespace gsat {

enum class SlotLayout {
  automatic,  // flat for small constant-degree nodes, segment tree otherwise
  segment,
  flat,
};

/// Bookkeeping over the 2k+1 slots of a node (child 0, rep 0, child 1, ...,
/// rep k-1, child k) with lazy range tags.
///
/// Each leaf keeps its own tag as well: for a child slot that tag is the
/// pending work not yet handed to the child subtree, retrieved with
/// take_tag() right before the child is entered.
///
/// Ops must provide value_type, tag_type, identity_value(), combine(a, b),
/// identity_tag(), compose(newer, older) and apply(tag, value).
template <class Ops>
class SlotTree {
 public:
  using value_type = typename Ops::value_type;
  using tag_type = typename Ops::tag_type;

  SlotTree() = default;

  void assign(const std::vector<value_type>& leaves, bool segment) {
    n_ = leaves.size();
    segment_ = segment;
    if (!segment_) {
      value_ = leaves;
      tag_.assign(n_, Ops::identity_tag());
      return;
    }
    value_.assign(4 * n_, Ops::identity_value());
    tag_.assign(4 * n_, Ops::identity_tag());
    if (n_ != 0) build(1, 0, n_, leaves);
  }

  std::size_t size() const { return n_; }
  bool is_segment() const { return segment_; }
  std::size_t cells() const { return value_.size() + tag_.size(); }

  value_type total() const {
    if (n_ == 0) return Ops::identity_value();
    if (segment_) return value_[1];
    value_type acc = Ops::identity_value();
    for (const auto& v : value_) acc = Ops::combine(acc, v);
    return acc;
  }

  /// Aggregate over slots [l, r], inclusive.
  value_type query(std::size_t l, std::size_t r) {
    assert(l <= r && r < n_);
    if (!segment_) {
      value_type acc = Ops::identity_value();
      for (std::size_t i = l; i <= r; ++i) acc = Ops::combine(acc, value_[i]);
      return acc;
    }
    return query(1, 0, n_, l, r + 1);
  }

  /// Apply a tag to slots [l, r], inclusive.
  void apply(std::size_t l, std::size_t r, const tag_type& t) {
    assert(l <= r && r < n_);
    if (!segment_) {
      for (std::size_t i = l; i <= r; ++i) apply_at(i, t);
      return;
    }
    update(1, 0, n_, l, r + 1, t);
  }

  void apply_all(const tag_type& t) {
    if (n_ == 0) return;
    if (!segment_) {
      for (std::size_t i = 0; i < n_; ++i) apply_at(i, t);
      return;
    }
    apply_at(1, t);
  }

  /// Current value of a leaf with all tags above it pushed.
  value_type leaf(std::size_t i) { return value_[descend(i)]; }

  /// Removes and returns the pending tag stored on leaf i.
  tag_type take_tag(std::size_t i) {
    const std::size_t x = descend(i);
    return std::exchange(tag_[x], Ops::identity_tag());
  }

  /// Overwrites a leaf value (its pending tag is kept) and re-aggregates.
  void set(std::size_t i, const value_type& v) {
    assert(i < n_);
    if (!segment_) {
      value_[i] = v;
      return;
    }
    set(1, 0, n_, i, v);
  }

 private:
  void apply_at(std::size_t x, const tag_type& t) {
    value_[x] = Ops::apply(t, value_[x]);
    tag_[x] = Ops::compose(t, tag_[x]);
  }

  void push(std::size_t x) {
    apply_at(2 * x, tag_[x]);
    apply_at(2 * x + 1, tag_[x]);
    tag_[x] = Ops::identity_tag();
  }

  void pull(std::size_t x) { value_[x] = Ops::combine(value_[2 * x], value_[2 * x + 1]); }

  void build(std::size_t x, std::size_t lo, std::size_t hi, const std::vector<value_type>& leaves) {
    if (hi - lo == 1) {
      value_[x] = leaves[lo];
      return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    build(2 * x, lo, mid, leaves);
    build(2 * x + 1, mid, hi, leaves);
    pull(x);
  }

  value_type query(std::size_t x, std::size_t lo, std::size_t hi, std::size_t l, std::size_t r) {
    if (l <= lo && hi <= r) return value_[x];
    push(x);
    const std::size_t mid = lo + (hi - lo) / 2;
    if (r <= mid) return query(2 * x, lo, mid, l, r);
    if (l >= mid) return query(2 * x + 1, mid, hi, l, r);
    return Ops::combine(query(2 * x, lo, mid, l, r), query(2 * x + 1, mid, hi, l, r));
  }

  void update(std::size_t x, std::size_t lo, std::size_t hi, std::size_t l, std::size_t r,
              const tag_type& t) {
    if (l <= lo && hi <= r) {
      apply_at(x, t);
      return;
    }
    push(x);
    const std::size_t mid = lo + (hi - lo) / 2;
    if (l < mid) update(2 * x, lo, mid, l, r, t);
    if (r > mid) update(2 * x + 1, mid, hi, l, r, t);
    pull(x);
  }

  void set(std::size_t x, std::size_t lo, std::size_t hi, std::size_t i, const value_type& v) {
    if (hi - lo == 1) {
      value_[x] = v;
      return;
    }
    push(x);
    const std::size_t mid = lo + (hi - lo) / 2;
    if (i < mid) {
      set(2 * x, lo, mid, i, v);
    } else {
      set(2 * x + 1, mid, hi, i, v);
    }
    pull(x);
  }

  // Pushes every tag on the root-to-leaf path and returns the leaf's cell.
  std::size_t descend(std::size_t i) {
    assert(i < n_);
    if (!segment_) return i;
    std::size_t x = 1, lo = 0, hi = n_;
    while (hi - lo > 1) {
      push(x);
      const std::size_t mid = lo + (hi - lo) / 2;
      if (i < mid) {
        x = 2 * x;
        hi = mid;
      } else {
        x = 2 * x + 1;
        lo = mid;
      }
    }
    return x;
  }

  std::vector<value_type> value_;
  std::vector<tag_type> tag_;
  std::size_t n_ = 0;
  bool segment_ = true;
};

/// Access-count cells: total accesses over a slot range and the number of
/// live keys they span. A tag of p adds p accesses to every live key.
struct CountOps {
  struct value_type {
    std::uint64_t m = 0;
    std::uint64_t live = 0;
    friend bool operator==(const value_type&, const value_type&) = default;
  };
  using tag_type = std::uint64_t;

  static value_type identity_value() { return {}; }
  static value_type combine(const value_type& a, const value_type& b) {
    return {a.m + b.m, a.live + b.live};
  }
  static tag_type identity_tag() { return 0; }
  static tag_type compose(tag_type newer, tag_type older) { return newer + older; }
  static value_type apply(tag_type p, const value_type& v) { return {v.m + p * v.live, v.live}; }
};

/// Aggregate cells for an algebra: the combined value of live keys in a slot
/// range plus their count, so updates can be applied size-aware.
template <RangeAlgebra A>
struct ValueOps {
  struct value_type {
    typename A::value_type agg = A::identity();
    std::uint64_t live = 0;
  };
  using tag_type = typename A::update_type;

  static value_type identity_value() { return {A::identity(), 0}; }
  static value_type combine(const value_type& a, const value_type& b) {
    return {A::combine(a.agg, b.agg), a.live + b.live};
  }
  static tag_type identity_tag() { return A::no_update(); }
  static tag_type compose(const tag_type& newer, const tag_type& older) {
    return A::compose(newer, older);
  }
  static value_type apply(const tag_type& u, const value_type& v) {
    return {A::apply(u, v.agg, v.live), v.live};
  }
};

}  // namespace gsat
