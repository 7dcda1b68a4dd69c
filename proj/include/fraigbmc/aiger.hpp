#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fraigbmc {

/// An AIGER literal: raw = 2*var + complement. Literal 0 is constant false,
/// literal 1 is constant true.
class AigLiteral {
public:
  constexpr AigLiteral() = default;
  constexpr explicit AigLiteral(uint32_t raw) : raw_(raw) {}
  static constexpr AigLiteral of_var(uint32_t var, bool negated = false) {
    return AigLiteral(2 * var + (negated ? 1 : 0));
  }
  static constexpr AigLiteral constant(bool value) {
    return AigLiteral(value ? 1u : 0u);
  }

  constexpr uint32_t raw() const { return raw_; }
  constexpr uint32_t var() const { return raw_ >> 1; }
  constexpr bool negated() const { return (raw_ & 1) != 0; }
  constexpr bool is_constant() const { return raw_ < 2; }
  constexpr AigLiteral operator~() const { return AigLiteral(raw_ ^ 1); }
  constexpr bool operator==(const AigLiteral &) const = default;

private:
  uint32_t raw_ = 0;
};

enum class LatchReset : uint8_t { Zero, One, Uninitialized };

struct Latch {
  AigLiteral state; // non-complemented literal of the latch variable
  AigLiteral next;
  LatchReset reset = LatchReset::Zero;
};

struct AndGate {
  AigLiteral out; // non-complemented
  AigLiteral in0;
  AigLiteral in1;
};

/// A parsed, validated AIG: inputs, latches, topologically sorted AND gates,
/// and the property roots (bads, invariant constraints, plain outputs).
struct AigNetwork {
  uint32_t maxvar = 0;
  std::vector<AigLiteral> inputs;
  std::vector<Latch> latches;
  std::vector<AndGate> ands; // topologically sorted
  std::vector<AigLiteral> bads;
  std::vector<AigLiteral> constraints;
  std::vector<AigLiteral> outputs;

  /// Set when the file declared no bad literals and its outputs were adopted
  /// as bad properties (pre-1.9 convention).
  bool outputs_adopted_as_bads = false;

  enum class VarKind : uint8_t { Unused, Constant, Input, Latch, Gate };

  VarKind var_kind(uint32_t var) const {
    return var < var_kinds_.size() ? var_kinds_[var] : VarKind::Unused;
  }
  /// Position of `var` within its section (inputs / latches / ands).
  uint32_t var_pos(uint32_t var) const { return var_pos_[var]; }
  const AndGate &gate_of(uint32_t var) const { return ands[var_pos_[var]]; }
  const Latch &latch_of(uint32_t var) const { return latches[var_pos_[var]]; }

  size_t num_uninitialized_latches() const;

  /// Rebuilds the var index and checks the structural invariants. Throws
  /// ParseError on violation. Called by the parser; callers constructing
  /// networks by hand (generators, tests) call it once at the end.
  void finalize();

private:
  std::vector<VarKind> var_kinds_;
  std::vector<uint32_t> var_pos_;
};

enum class ParseErrorKind : uint8_t {
  MalformedHeader,
  UnsupportedSection, // justice/fairness
  OutOfRangeLiteral,
  DuplicateDefinition,
  UndefinedVariable,
  NonTopological, // binary delta violation or combinational cycle
  BadLatch,
  Truncated,
  BadWitness,
};

class ParseError : public std::runtime_error {
public:
  ParseError(ParseErrorKind kind, size_t offset, const std::string &what)
      : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"),
        kind(kind), offset(offset) {}

  ParseErrorKind kind;
  size_t offset; // byte offset into the input
};

/// Parses an AIGER file, ASCII ("aag") or binary ("aig"), format 1.9 with
/// bad/constraint sections. Justice and fairness sections are rejected.
/// When `adopt_outputs_as_bads` is set and the file declares zero bad
/// literals but at least one output, the outputs double as bads.
AigNetwork parse_aiger(std::string_view bytes, bool adopt_outputs_as_bads = true);

AigNetwork load_aiger_file(const std::string &path,
                           bool adopt_outputs_as_bads = true);

std::string write_aiger_ascii(const AigNetwork &net);
std::string write_aiger_binary(const AigNetwork &net);

/// A counterexample trace in AIGER witness terms: one row of initial latch
/// values (chars 0/1/x) and one row of input values per frame.
struct Witness {
  uint32_t bad_index = 0;
  std::string latch_row;
  std::vector<std::string> input_rows; // bound+1 rows
};

/// Serializes the witness grammar exactly: "1", "b<i>", the latch row, one
/// input row per frame, ".".
std::string write_witness(const Witness &w);

/// Parses and validates a witness against the network (row widths, charset).
Witness parse_witness(std::string_view text, const AigNetwork &net);

} // namespace fraigbmc
