#pragma once

#include "fraigbmc/solver.hpp"

#include <cstdint>

namespace fraigbmc {

/// A resolved unrolled-node handle: constant false/true or a solver literal.
/// Encoded like an AIGER literal (0 = false, 1 = true, else a Lit code), so
/// complementation is one xor for every case.
class NodeRef {
public:
  constexpr NodeRef() = default;

  static constexpr NodeRef const_false() { return NodeRef(0); }
  static constexpr NodeRef const_true() { return NodeRef(1); }
  static constexpr NodeRef of_lit(Lit l) { return NodeRef(l.code()); }
  static constexpr NodeRef unresolved() { return NodeRef(kUnresolved); }

  constexpr bool is_resolved() const { return code_ != kUnresolved; }
  constexpr bool is_constant() const { return code_ < 2; }
  constexpr bool is_false() const { return code_ == 0; }
  constexpr bool is_true() const { return code_ == 1; }
  constexpr Lit lit() const { return Lit::from_code(code_); }
  constexpr uint32_t code() const { return code_; }

  constexpr NodeRef operator~() const { return NodeRef(code_ ^ 1); }
  constexpr NodeRef operator^(bool flip) const {
    return NodeRef(code_ ^ (flip ? 1u : 0u));
  }
  constexpr bool operator==(const NodeRef &) const = default;

private:
  static constexpr uint32_t kUnresolved = 0xffffffffu;
  constexpr explicit NodeRef(uint32_t code) : code_(code) {}
  uint32_t code_ = kUnresolved;
};

} // namespace fraigbmc
