#pragma once

#include "fraigbmc/node_ref.hpp"
#include "fraigbmc/solver.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

namespace fraigbmc {

using SimWords = std::vector<uint64_t>;

/// Bitwise AND of two simulation vectors with input complements applied.
void sim_gate_into(std::span<const uint64_t> a, bool neg_a,
                   std::span<const uint64_t> b, bool neg_b,
                   std::span<uint64_t> out);
SimWords sim_gate(std::span<const uint64_t> a, bool neg_a,
                  std::span<const uint64_t> b, bool neg_b);

enum class EquivOutcome : uint8_t { Equivalent, Refuted, Skipped };

struct EquivQueryStats {
  uint64_t sat_calls = 0;
  uint64_t proved = 0;
  uint64_t refuted = 0;
  uint64_t skipped = 0;
};

/// SAT equivalence check between two encoded literals: n ≡ q' where q' is q
/// complemented when the phases differ. Equivalent iff solve([n, ~q']) and
/// solve([~n, q']) are both Unsat. A conflict-budget timeout on either query
/// reports Skipped. On Refuted the solver holds the distinguishing model.
EquivOutcome check_equiv(Solver &solver, Lit n, Lit q, bool same_phase,
                         int64_t conflict_limit, EquivQueryStats &stats);

struct Candidate {
  NodeRef ref;
  bool same_phase;
};

/// Simulation state and equivalence classes for the functional-redundancy
/// stage: one vector per pattern variable (frame inputs, frame-0
/// uninitialized latches) and per encoded gate variable, grouped into classes
/// by phase-normalized vector. Class membership requires bitwise-equal
/// normalized vectors; the digest only indexes the table.
class FraigEngine {
public:
  FraigEngine(uint32_t base_words, uint32_t ec_limit, uint32_t refine_batch,
              uint64_t seed);

  size_t width_words() const { return words_; }
  uint64_t random_word() { return rng_(); }
  bool random_bit() { return (rng_() & 1) != 0; }

  /// Registers an input-like variable: draws a random vector and seeds its
  /// equivalence class. Pattern variables never merge away; they can only be
  /// representatives.
  void register_pattern_var(uint32_t var);

  /// Registers an encoded gate variable with its (reduced) fan-ins; computes
  /// its vector and adds it to its class.
  void register_gate_var(uint32_t var, NodeRef in0, NodeRef in1);

  std::span<const uint64_t> vector_of(uint32_t var) const {
    return vectors_[var];
  }
  SimWords compute_gate_vector(NodeRef in0, NodeRef in1) const;

  struct Lookup {
    bool skipped_by_limit = false;
    std::vector<Candidate> candidates; // oldest member first
  };
  /// Candidates whose phase-normalized vectors equal `vec`'s. A class already
  /// at the membership limit yields no candidates and will not accept the
  /// querying node either.
  Lookup find_candidates(std::span<const uint64_t> vec) const;

  static bool is_all_zero(std::span<const uint64_t> vec);
  static bool is_all_one(std::span<const uint64_t> vec);

  /// Buffers one refinement column read from the solver model (pattern
  /// variables only); re-simulates and rebuilds the classes once a full
  /// refinement batch accumulated.
  void refine_from_model(const Solver &solver);
  /// Flushes a partial refinement batch (padded with random patterns).
  void flush_pending();
  size_t pending_columns() const { return pending_.size(); }

  /// Replaces all pattern vectors with externally generated columns (e.g.
  /// constraint-aware batches) at the given width, then re-simulates and
  /// rebuilds the classes. Every registered pattern variable must appear.
  void reinstall_patterns(
      const std::vector<std::pair<uint32_t, SimWords>> &assignments,
      size_t new_words);

  const std::vector<uint32_t> &pattern_vars() const { return pattern_vars_; }

private:
  struct VecKey {
    SimWords words;
    size_t digest;
  };
  struct VecKeyHash {
    size_t operator()(const VecKey &k) const { return k.digest; }
  };
  struct VecKeyEq {
    bool operator()(const VecKey &a, const VecKey &b) const {
      return a.words == b.words;
    }
  };
  struct Member {
    NodeRef ref;
    bool phase;
  };

  static size_t digest_of(std::span<const uint64_t> words);
  /// Phase-normalizes: complements the vector when pattern bit 0 is set.
  static VecKey normalize(std::span<const uint64_t> vec, bool &phase);

  void add_member(std::span<const uint64_t> vec, NodeRef ref);
  void resimulate();
  void rebuild_classes();
  SimWords random_vector();

  uint32_t base_words_;
  uint32_t ec_limit_;
  uint32_t refine_batch_;
  size_t words_;
  std::mt19937_64 rng_;

  enum class VarKind : uint8_t { None, Pattern, Gate };
  struct VarInfo {
    VarKind kind = VarKind::None;
    NodeRef in0, in1;
  };
  std::vector<VarInfo> info_;    // indexed by solver var
  std::vector<SimWords> vectors_; // indexed by solver var
  std::vector<uint32_t> order_;   // registration order, for re-simulation
  std::vector<uint32_t> pattern_vars_;

  std::unordered_map<VecKey, std::vector<Member>, VecKeyHash, VecKeyEq>
      classes_;
  std::vector<NodeRef> registered_; // class members in registration order

  std::vector<std::vector<uint8_t>> pending_; // refinement columns
};

} // namespace fraigbmc
