#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gsat/algebra.hpp"
#include "gsat/types.hpp"

namespace gsat::testing {

template <class A>
typename A::value_type apply_one(const typename A::update_type& u, Value v) {
  return A::apply(u, A::lift(v), 1);
}

/// Brute-force array model of a range tree: every operation walks all keys.
template <class A>
class RangeOracle {
 public:
  explicit RangeOracle(const std::vector<KeyRecord>& records) {
    for (const auto& r : records) map_[r.key] = r;
  }

  std::vector<Key> range_get(Key a, Key b) {
    std::vector<Key> out;
    for (auto& [k, r] : span(a, b)) {
      out.push_back(k);
    }
    return out;
  }

  typename A::value_type range_calculate(Key a, Key b) {
    typename A::value_type acc = A::identity();
    for (auto& [k, r] : span(a, b)) acc = A::combine(acc, A::lift(r->value));
    return acc;
  }

  void range_update(Key a, Key b, const typename A::update_type& u) {
    for (auto& [k, r] : span(a, b)) r->value = A::lower(apply_one<A>(u, r->value));
  }

  std::optional<Value> get(Key key) {
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    ++it->second.ac;
    if (it->second.marked) return std::nullopt;
    return it->second.value;
  }

  void insert(Key key, Value value) {
    auto [it, fresh] = map_.try_emplace(key, KeyRecord{key, value, 1, false});
    if (fresh) return;
    ++it->second.ac;
    if (it->second.marked) {
      it->second.marked = false;
      it->second.value = value;
    }
  }

  void erase(Key key) {
    auto it = map_.find(key);
    if (it == map_.end()) return;
    ++it->second.ac;
    it->second.marked = true;
  }

  std::vector<KeyRecord> all() const {
    std::vector<KeyRecord> out;
    for (const auto& [k, r] : map_) out.push_back(r);
    return out;
  }

  std::vector<KeyRecord> live() const {
    std::vector<KeyRecord> out;
    for (const auto& [k, r] : map_) {
      if (!r.marked) out.push_back({k, r.value, 0, false});
    }
    return out;
  }

  std::size_t live_in(Key a, Key b) {
    std::size_t n = 0;
    for (const auto& [k, r] : map_) n += k >= a && k <= b && !r.marked;
    return n;
  }

 private:
  // Unmarked keys in [a, b]; each is credited one access.
  std::vector<std::pair<Key, KeyRecord*>> span(Key a, Key b) {
    std::vector<std::pair<Key, KeyRecord*>> out;
    for (auto it = map_.lower_bound(a); it != map_.end() && it->first <= b; ++it) {
      if (it->second.marked) continue;
      ++it->second.ac;
      out.emplace_back(it->first, &it->second);
    }
    return out;
  }

  std::map<Key, KeyRecord> map_;
};

}  // namespace gsat::testing
