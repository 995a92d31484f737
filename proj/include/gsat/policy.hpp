#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "gsat/types.hpp"

namespace gsat {

enum class NodeSearch { binary, interpolation };

enum class Shape { sait, sabt, salt, sa2t };

struct PolicyParams {
  std::uint64_t B = 16;  // branching constant for SABT
  double alpha = 0.5;    // SAIT hint-array exponent, in [1/2, 1)

  void validate() const {
    if (B < 2) throw contract_violation("policy parameter B must be >= 2");
    if (!(alpha >= 0.5 && alpha < 1.0)) {
      throw contract_violation("policy parameter alpha must lie in [0.5, 1)");
    }
  }
};

/// ceil(sqrt(m)) computed exactly on integers.
constexpr std::uint64_t ceil_sqrt(std::uint64_t m) {
  if (m == 0) return 0;
  // floor sqrt by bit-by-bit method; exact for the whole 64-bit range
  std::uint64_t rem = m, root = 0;
  std::uint64_t bit = std::uint64_t{1} << 62;
  while (bit > rem) bit >>= 2;
  while (bit != 0) {
    if (rem >= root + bit) {
      rem -= root + bit;
      root = (root >> 1) + bit;
    } else {
      root >>= 1;
    }
    bit >>= 2;
  }
  return root * root == m ? root : root + 1;
}

/// ceil(log2(m)) for m >= 1.
constexpr std::uint64_t ceil_log2(std::uint64_t m) {
  return m <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(m - 1));
}

constexpr std::uint64_t degree_sait(std::uint64_t m) { return m <= 1 ? 1 : ceil_sqrt(m); }
constexpr std::uint64_t degree_sabt(std::uint64_t /*m*/, std::uint64_t B) { return B; }
constexpr std::uint64_t degree_salt(std::uint64_t m) {
  const auto d = ceil_log2(m);
  return d < 1 ? 1 : d;
}
constexpr std::uint64_t degree_sa2t(std::uint64_t /*m*/) { return 2; }

/// Degree function plus in-node search strategy. A policy is access-weighted
/// (self-adjusting) unless it went through size_weighted_adapter, in which
/// case every key weighs 1 and only structural operations advance counters.
struct DegreePolicy {
  Shape shape = Shape::sabt;
  NodeSearch search = NodeSearch::binary;
  PolicyParams params{};
  bool access_weighted = true;

  static DegreePolicy sait(double alpha = 0.5) {
    DegreePolicy p{Shape::sait, NodeSearch::interpolation, {}, true};
    p.params.alpha = alpha;
    p.params.validate();
    return p;
  }
  static DegreePolicy sabt(std::uint64_t B = 16) {
    DegreePolicy p{Shape::sabt, NodeSearch::binary, {}, true};
    p.params.B = B;
    p.params.validate();
    return p;
  }
  static DegreePolicy salt() { return {Shape::salt, NodeSearch::binary, {}, true}; }
  static DegreePolicy sa2t() {
    DegreePolicy p{Shape::sa2t, NodeSearch::binary, {}, true};
    p.params.B = 2;
    return p;
  }

  /// Integer degree, already rounded up; always >= 1.
  std::uint64_t degree(std::uint64_t m) const {
    switch (shape) {
      case Shape::sait: return degree_sait(m);
      case Shape::sabt: return degree_sabt(m, params.B);
      case Shape::salt: return degree_salt(m);
      case Shape::sa2t: return degree_sa2t(m);
    }
    return 1;
  }

  bool uses_interpolation() const { return search == NodeSearch::interpolation; }

  std::string name() const {
    switch (shape) {
      case Shape::sait: return access_weighted ? "sait" : "ist-baseline";
      case Shape::sabt: return access_weighted ? "sabt" : "lazy-btree-baseline";
      case Shape::salt: return access_weighted ? "salt" : "salt-size-weighted";
      case Shape::sa2t: return access_weighted ? "sa2t" : "sa2t-size-weighted";
    }
    return "unknown";
  }
};

/// Same degree function and search, but weights are sizes instead of
/// accesses: yields the classic IST (from SAIT) and the lazy B-Tree (from SABT).
inline DegreePolicy size_weighted_adapter(DegreePolicy policy) {
  policy.access_weighted = false;
  return policy;
}

/// Policy lookup by harness name. Throws contract_violation for unknown names.
inline DegreePolicy policy_from_name(std::string_view name, const PolicyParams& params = {}) {
  params.validate();
  if (name == "sait") return DegreePolicy::sait(params.alpha);
  if (name == "sabt") return DegreePolicy::sabt(params.B);
  if (name == "salt") return DegreePolicy::salt();
  if (name == "sa2t") return DegreePolicy::sa2t();
  if (name == "ist-baseline") return size_weighted_adapter(DegreePolicy::sait(params.alpha));
  if (name == "lazy-btree-baseline") return size_weighted_adapter(DegreePolicy::sabt(params.B));
  throw contract_violation("unknown policy name: " + std::string(name));
}

inline bool is_policy_name(std::string_view name) {
  return name == "sait" || name == "sabt" || name == "salt" || name == "sa2t" ||
         name == "ist-baseline" || name == "lazy-btree-baseline";
}

}  // namespace gsat
