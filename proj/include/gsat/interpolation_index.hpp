#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gsat/policy.hpp"
#include "gsat/types.hpp"

namespace gsat {

__extension__ using uint128 = unsigned __int128;

/// Result of searching a node: either the representative `index` equals the
/// key (`hit`), or child slot `index` is the subtree that should contain it.
struct Slot {
  std::size_t index = 0;
  bool hit = false;

  friend bool operator==(const Slot&, const Slot&) = default;
};

inline Slot binary_slot(std::span<const Key> rep, Key key) {
  const auto it = std::lower_bound(rep.begin(), rep.end(), key);
  const auto p = static_cast<std::size_t>(it - rep.begin());
  return {p, it != rep.end() && *it == key};
}

/// Length of the hint array for a node with m accesses: ceil(m^alpha).
inline std::size_t hint_length(std::uint64_t m, double alpha) {
  if (m <= 1) return 1;
  if (alpha == 0.5) return static_cast<std::size_t>(ceil_sqrt(m));
  auto len = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(m), alpha)));
  return static_cast<std::size_t>(std::max<std::uint64_t>(len, 1));
}

/// Per-node interpolation hints. Bucket i covers keys starting at
/// lb + floor(i * (rb - lb) / len) and stores the lower-bound position of
/// that probe key among the representatives, so it never overshoots any key
/// that maps into the bucket.
class InterpolationIndex {
 public:
  InterpolationIndex() = default;

  static InterpolationIndex build(std::span<const Key> rep, Key lb, Key rb, std::uint64_t m,
                                  double alpha) {
    if (lb >= rb) throw contract_violation("interpolation index needs lb < rb");
    InterpolationIndex index;
    index.lb_ = lb;
    index.width_ = static_cast<std::uint64_t>(rb) - static_cast<std::uint64_t>(lb);
    const std::size_t len = hint_length(m, alpha);
    index.id_.resize(len);
    // Probe keys increase with i, so one forward sweep over rep suffices.
    std::size_t pos = 0;
    for (std::size_t i = 0; i < len; ++i) {
      const Key probe = index.probe_key(i);
      while (pos < rep.size() && rep[pos] < probe) ++pos;
      index.id_[i] = static_cast<std::uint32_t>(pos);
    }
    return index;
  }

  bool empty() const { return id_.empty(); }
  std::size_t size() const { return id_.size(); }
  std::span<const std::uint32_t> hints() const { return id_; }

  Key probe_key(std::size_t i) const {
    const auto offset = static_cast<uint128>(i) * width_ / id_.size();
    return static_cast<Key>(static_cast<std::uint64_t>(lb_) + static_cast<std::uint64_t>(offset));
  }

  std::size_t bucket(Key key) const {
    const std::uint64_t offset = static_cast<std::uint64_t>(key) - static_cast<std::uint64_t>(lb_);
    return static_cast<std::size_t>(static_cast<uint128>(offset) * id_.size() / width_);
  }

  /// Interpolate to a bucket, widen exponentially from its hint, then finish
  /// with binary search inside the bracket. Key must lie in [lb, rb).
  Slot search(std::span<const Key> rep, Key key) const {
    const std::size_t k = rep.size();
    std::size_t lo = id_[bucket(key)];
    std::size_t step = 1;
    while (lo + step <= k && rep[lo + step - 1] < key) {
      lo += step;
      step <<= 1;
    }
    const std::size_t hi = std::min(lo + step - 1, k);
    const auto it = std::lower_bound(rep.begin() + static_cast<std::ptrdiff_t>(lo),
                                     rep.begin() + static_cast<std::ptrdiff_t>(hi), key);
    const auto p = static_cast<std::size_t>(it - rep.begin());
    return {p, p < k && rep[p] == key};
  }

 private:
  std::vector<std::uint32_t> id_;
  Key lb_ = 0;
  std::uint64_t width_ = 1;
};

}  // namespace gsat
