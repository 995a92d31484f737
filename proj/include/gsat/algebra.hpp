#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

#include "gsat/types.hpp"

namespace gsat {

/// A value monoid (combine, identity) acted on by an update monoid
/// (compose, no_update). `apply(u, v, n)` maps the aggregate `v` of `n` live
/// keys; it must distribute over combine with sizes adding up, which is what
/// lets a covered subtree take an update without being visited.
///
/// `compose(newer, older)` is the update equivalent to applying `older`
/// first and then `newer`.
template <class A>
concept RangeAlgebra = requires(const typename A::value_type& v, const typename A::update_type& u,
                                std::uint64_t n, Value y) {
  { A::identity() } -> std::same_as<typename A::value_type>;
  { A::combine(v, v) } -> std::same_as<typename A::value_type>;
  { A::no_update() } -> std::same_as<typename A::update_type>;
  { A::compose(u, u) } -> std::same_as<typename A::update_type>;
  { A::apply(u, v, n) } -> std::same_as<typename A::value_type>;
  { A::lift(y) } -> std::same_as<typename A::value_type>;
  { A::lower(v) } -> std::same_as<Value>;
};

/// Sum of values; update adds c to every value.
struct SumAdd {
  using value_type = std::int64_t;
  using update_type = std::int64_t;
  static constexpr std::string_view name = "sum-add";

  static value_type identity() { return 0; }
  static value_type combine(value_type a, value_type b) { return a + b; }
  static update_type no_update() { return 0; }
  static update_type compose(update_type newer, update_type older) { return newer + older; }
  static value_type apply(update_type u, value_type v, std::uint64_t n) {
    return v + u * static_cast<std::int64_t>(n);
  }
  static value_type lift(Value y) { return y; }
  static Value lower(value_type v) { return v; }
};

/// Sum of values; update overwrites every value with c.
struct SumAssign {
  using value_type = std::int64_t;
  using update_type = std::optional<std::int64_t>;
  static constexpr std::string_view name = "sum-assign";

  static value_type identity() { return 0; }
  static value_type combine(value_type a, value_type b) { return a + b; }
  static update_type no_update() { return std::nullopt; }
  static update_type compose(const update_type& newer, const update_type& older) {
    return newer ? newer : older;
  }
  static value_type apply(const update_type& u, value_type v, std::uint64_t n) {
    return u ? *u * static_cast<std::int64_t>(n) : v;
  }
  static value_type lift(Value y) { return y; }
  static Value lower(value_type v) { return v; }
};

/// Minimum of values; the only update is the identity.
struct MinNoUpdate {
  struct Noop {
    friend bool operator==(Noop, Noop) = default;
  };
  using value_type = std::int64_t;
  using update_type = Noop;
  static constexpr std::string_view name = "min";

  static value_type identity() { return std::numeric_limits<std::int64_t>::max(); }
  static value_type combine(value_type a, value_type b) { return std::min(a, b); }
  static update_type no_update() { return {}; }
  static update_type compose(update_type, update_type) { return {}; }
  static value_type apply(update_type, value_type v, std::uint64_t) { return v; }
  static value_type lift(Value y) { return y; }
  static Value lower(value_type v) { return v; }
};

static_assert(RangeAlgebra<SumAdd>);
static_assert(RangeAlgebra<SumAssign>);
static_assert(RangeAlgebra<MinNoUpdate>);

}  // namespace gsat
