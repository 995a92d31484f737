#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gsat/types.hpp"

namespace gsat::workload {

struct Uniform {
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

/// x% of draws come from a hot set holding y% of the universe.
struct HotCold {
  unsigned x_pct = 90;
  unsigned y_pct = 10;
  friend bool operator==(const HotCold&, const HotCold&) = default;
};

/// P(rank r) proportional to 1 / r^s over the finite universe.
struct Zipf {
  double s = 1.0;
  friend bool operator==(const Zipf&, const Zipf&) = default;
};

using Distribution = std::variant<Uniform, HotCold, Zipf>;

inline std::string to_string(const Distribution& d) {
  if (std::holds_alternative<Uniform>(d)) return "uniform";
  if (const auto* h = std::get_if<HotCold>(&d)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "xy:%02u/%02u", h->x_pct, h->y_pct);
    return buf;
  }
  std::ostringstream out;
  out << "zipf:" << std::get<Zipf>(d).s;
  return out.str();
}

/// Parses `uniform`, `xy:X/Y` or `zipf:S`.
inline Distribution parse_distribution(std::string_view text) {
  auto fail = [&] { throw contract_violation("bad workload spec '" + std::string(text) + "'"); };
  auto number = [&](std::string_view s) {
    unsigned v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) fail();
    return v;
  };
  if (text == "uniform") return Uniform{};
  if (text.starts_with("xy:")) {
    const auto body = text.substr(3);
    const auto slash = body.find('/');
    if (slash == std::string_view::npos) fail();
    return HotCold{number(body.substr(0, slash)), number(body.substr(slash + 1))};
  }
  if (text.starts_with("zipf:")) {
    const std::string body(text.substr(5));
    std::size_t used = 0;
    double s = 0;
    try {
      s = std::stod(body, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != body.size()) fail();
    return Zipf{s};
  }
  fail();
  return Uniform{};
}

enum class OpKind : std::uint8_t { get, insert, erase };

inline const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::get: return "get";
    case OpKind::insert: return "insert";
    case OpKind::erase: return "erase";
  }
  return "?";
}

struct OperationMix {
  unsigned get_pct = 100;
  unsigned insert_pct = 0;
  unsigned erase_pct = 0;

  static OperationMix read_only() { return {}; }
  static OperationMix mixed() { return {80, 10, 10}; }

  bool is_read_only() const { return get_pct == 100; }
  std::string name() const {
    if (*this == read_only()) return "read-only";
    if (*this == mixed()) return "mixed";
    return "mix:" + std::to_string(get_pct) + "/" + std::to_string(insert_pct) + "/" +
           std::to_string(erase_pct);
  }
  void validate() const {
    if (get_pct + insert_pct + erase_pct != 100) {
      throw contract_violation("operation mix percentages must sum to 100");
    }
  }
  friend bool operator==(const OperationMix&, const OperationMix&) = default;
};

inline OperationMix parse_mix(std::string_view text) {
  if (text == "read-only") return OperationMix::read_only();
  if (text == "mixed") return OperationMix::mixed();
  throw contract_violation("unknown mix '" + std::string(text) + "' (read-only|mixed)");
}

struct WorkloadSpec {
  std::size_t universe_size = 100'000;
  Distribution distribution = Uniform{};
  OperationMix mix = OperationMix::read_only();
  DeleteMode delete_mode = DeleteMode::standard;
  std::size_t op_count = 1'000'000;
  std::uint64_t seed = 1;

  void validate() const {
    if (universe_size == 0) throw contract_violation("universe must hold at least one key");
    mix.validate();
    if (const auto* h = std::get_if<HotCold>(&distribution)) {
      if (h->x_pct > 100) throw contract_violation("xy: x must lie in [0, 100]");
      if (h->y_pct == 0 || h->y_pct > 100) throw contract_violation("xy: y must lie in (0, 100]");
      const std::size_t hot = universe_size * h->y_pct / 100;
      if (hot == 0) throw contract_violation("xy: hot set is empty for this universe");
      if (h->x_pct < 100 && hot == universe_size) {
        throw contract_violation("xy: cold set is empty but x < 100");
      }
    }
    if (const auto* z = std::get_if<Zipf>(&distribution)) {
      if (!(z->s > 0)) throw contract_violation("zipf: s must be > 0");
    }
  }
};

struct Operation {
  OpKind kind = OpKind::get;
  Key key = 0;
  Value value = 0;  // only meaningful for inserts
  friend bool operator==(const Operation&, const Operation&) = default;
};

/// Seeded permutation of the universe 0..n-1 used to place hot keys.
inline std::vector<Key> key_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<Key> perm(n);
  std::iota(perm.begin(), perm.end(), Key{0});
  std::seed_seq seq{seed, std::uint64_t{0x6b65'7973}};
  std::mt19937_64 rng(seq);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

/// Draws keys according to a distribution. Pure after construction apart
/// from the caller-supplied engine.
class KeySampler {
 public:
  KeySampler(std::size_t universe, const Distribution& d, std::uint64_t seed)
      : dist_(d), perm_(key_permutation(universe, seed)) {
    if (const auto* h = std::get_if<HotCold>(&dist_)) {
      hot_ = universe * h->y_pct / 100;
    } else if (const auto* z = std::get_if<Zipf>(&dist_)) {
      cdf_.resize(universe);
      double acc = 0;
      for (std::size_t r = 0; r < universe; ++r) {
        acc += 1.0 / std::pow(static_cast<double>(r + 1), z->s);
        cdf_[r] = acc;
      }
    }
  }

  std::size_t universe() const { return perm_.size(); }
  /// Keys ordered by decreasing probability (hot set first for x/y).
  const std::vector<Key>& permutation() const { return perm_; }
  std::size_t hot_size() const { return hot_; }

  /// Probability mass of the key at permutation rank r.
  double probability(std::size_t r) const {
    const double n = static_cast<double>(perm_.size());
    if (std::holds_alternative<Uniform>(dist_)) return 1.0 / n;
    if (const auto* h = std::get_if<HotCold>(&dist_)) {
      if (r < hot_) return h->x_pct / 100.0 / static_cast<double>(hot_);
      return (100 - h->x_pct) / 100.0 / static_cast<double>(perm_.size() - hot_);
    }
    return (r == 0 ? cdf_[0] : cdf_[r] - cdf_[r - 1]) / cdf_.back();
  }

  template <class Engine>
  Key operator()(Engine& rng) const {
    return perm_[rank(rng)];
  }

  template <class Engine>
  std::size_t rank(Engine& rng) const {
    const std::size_t n = perm_.size();
    if (const auto* h = std::get_if<HotCold>(&dist_)) {
      const bool hot = std::uniform_int_distribution<unsigned>(0, 99)(rng) < h->x_pct;
      if (hot) return std::uniform_int_distribution<std::size_t>(0, hot_ - 1)(rng);
      return hot_ + std::uniform_int_distribution<std::size_t>(0, n - hot_ - 1)(rng);
    }
    if (std::holds_alternative<Zipf>(dist_)) {
      const double u = std::uniform_real_distribution<double>(0, cdf_.back())(rng);
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      return std::min(static_cast<std::size_t>(it - cdf_.begin()), n - 1);
    }
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }

 private:
  Distribution dist_;
  std::vector<Key> perm_;
  std::size_t hot_ = 0;
  std::vector<double> cdf_;
};

/// Streaming generator; the whole stream is a function of the spec.
class Generator {
 public:
  explicit Generator(const WorkloadSpec& spec)
      : spec_(checked(spec)),
        sampler_(spec.universe_size, spec.distribution, spec.seed),
        rng_(seeded(spec.seed)) {}

  Operation next() {
    Operation op;
    const unsigned roll = std::uniform_int_distribution<unsigned>(0, 99)(rng_);
    const OperationMix& mix = spec_.mix;
    op.kind = roll < mix.get_pct                     ? OpKind::get
              : roll < mix.get_pct + mix.insert_pct ? OpKind::insert
                                                    : OpKind::erase;
    op.key = sampler_(rng_);
    if (op.kind == OpKind::insert) op.value = static_cast<Value>(rng_() >> 1);
    return op;
  }

  const KeySampler& sampler() const { return sampler_; }

 private:
  static const WorkloadSpec& checked(const WorkloadSpec& spec) {
    spec.validate();
    return spec;
  }

  static std::mt19937_64 seeded(std::uint64_t seed) {
    std::seed_seq seq{seed, std::uint64_t{0x6f70'73}};
    return std::mt19937_64(seq);
  }

  WorkloadSpec spec_;
  KeySampler sampler_;
  std::mt19937_64 rng_;
};

inline std::vector<Operation> generate(const WorkloadSpec& spec) {
  Generator gen(spec);
  std::vector<Operation> ops(spec.op_count);
  for (auto& op : ops) op = gen.next();
  return ops;
}

struct SmoothnessNote {
  bool bounded_density = false;
  std::string text;
};

/// Whether the key density is bounded above and below on its support,
/// the condition under which interpolation search is expected to stay
/// fast. Annotation only; nothing is verified at runtime.
inline SmoothnessNote smoothness_note(const WorkloadSpec& spec) {
  spec.validate();
  if (std::holds_alternative<Uniform>(spec.distribution)) {
    return {true, "uniform density"};
  }
  if (const auto* h = std::get_if<HotCold>(&spec.distribution)) {
    if (h->y_pct < 100) return {true, "two-level density, hot set placed by seeded permutation"};
    return {true, "hot set is the whole universe"};
  }
  return {true, "zipf on a finite universe, density ratio bounded by |S|^s"};
}

}  // namespace gsat::workload
