#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace gsat {

using Key = std::int64_t;
using Value = std::int64_t;

inline constexpr Key kMinKey = std::numeric_limits<Key>::min();
inline constexpr Key kMaxKey = std::numeric_limits<Key>::max();

/// Thrown when a caller breaks a documented precondition (unsorted input,
/// key outside a node's bounds, inverted range, invalid parameters).
class contract_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One key of a flattened subtree. `marked` is only ever set when a subtree
/// is flattened with tombstones included (lazy-delete rebuilds, debugging).
struct KeyRecord {
  Key key = 0;
  Value value = 0;
  std::uint64_t ac = 1;
  bool marked = false;

  friend bool operator==(const KeyRecord&, const KeyRecord&) = default;
};

enum class DeleteMode {
  standard,     // rebuilds discard tombstoned keys and their accesses
  lazy_delete,  // tombstoned keys survive rebuilds with their access counts
};

inline std::string to_string(DeleteMode mode) {
  return mode == DeleteMode::standard ? "standard" : "lazy-delete";
}

/// Work counters shared by every tree in the library.
struct OpStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t rebuilds = 0;
  std::uint64_t rebuild_records = 0;  // keys flattened into rebuilds
};

}  // namespace gsat
