#pragma once

#include "fraigbmc/node_ref.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>

namespace fraigbmc {

/// Trivial AND-gate simplification. Rules, in order: a constant-false input
/// resolves the gate to false; a constant-true input resolves it to the other
/// input; equal inputs resolve to either; complementary inputs resolve to
/// false. Returns nothing when no rule fires.
std::optional<NodeRef> trivial_simplify(NodeRef i1, NodeRef i2);

/// Canonical fan-in pair of a gate: smaller literal code first, complement
/// flags included. Never contains constants (those resolve trivially).
struct StrashKey {
  uint32_t a; // smaller NodeRef code
  uint32_t b;

  static StrashKey make(NodeRef i1, NodeRef i2) {
    uint32_t x = i1.code(), y = i2.code();
    return x <= y ? StrashKey{x, y} : StrashKey{y, x};
  }
  bool operator==(const StrashKey &) const = default;
};

struct StrashKeyHash {
  size_t operator()(const StrashKey &k) const {
    uint64_t z = (static_cast<uint64_t>(k.a) << 32) | k.b;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<size_t>(z ^ (z >> 31));
  }
};

struct StrashResult {
  bool found;
  NodeRef representative; // valid when found
  NodeRef *slot;          // when inserted: caller stores the final NodeRef here
};

/// Structural-hash table shared across all time frames. Collisions are
/// resolved by full key comparison, never by hash equality alone.
class StrashTable {
public:
  /// Returns the previously registered representative, or registers a slot
  /// the caller fills with the gate's eventual NodeRef.
  StrashResult lookup_or_insert(const StrashKey &key) {
    auto [it, inserted] = table_.try_emplace(key, NodeRef::unresolved());
    if (!inserted)
      return StrashResult{true, it->second, nullptr};
    return StrashResult{false, NodeRef::unresolved(), &it->second};
  }

  size_t size() const { return table_.size(); }

private:
  std::unordered_map<StrashKey, NodeRef, StrashKeyHash> table_;
};

} // namespace fraigbmc
