#pragma once

#include "fraigbmc/aiger.hpp"
#include "fraigbmc/fraig.hpp"
#include "fraigbmc/node_ref.hpp"
#include "fraigbmc/options.hpp"
#include "fraigbmc/simplify.hpp"
#include "fraigbmc/solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace fraigbmc {

/// Association from (frame, AIG variable) to NodeRef, plus the per-frame
/// input and latch handles.
class FrameMap {
public:
  void begin_frame(uint32_t maxvar) {
    rows_.emplace_back(maxvar + 1, NodeRef::unresolved());
    rows_.back()[0] = NodeRef::const_false();
    input_refs_.emplace_back();
    latch_refs_.emplace_back();
  }

  size_t frames() const { return rows_.size(); }

  NodeRef get(size_t frame, uint32_t var) const { return rows_[frame][var]; }
  void set(size_t frame, uint32_t var, NodeRef ref) { rows_[frame][var] = ref; }

  /// Resolves an AIG literal at a frame, applying the complement.
  NodeRef resolve(size_t frame, AigLiteral lit) const {
    NodeRef ref = rows_[frame][lit.var()];
    assert(ref.is_resolved() && "literal not yet unrolled");
    return ref ^ lit.negated();
  }

  const std::vector<NodeRef> &inputs_at(size_t frame) const {
    return input_refs_[frame];
  }
  const std::vector<NodeRef> &latches_at(size_t frame) const {
    return latch_refs_[frame];
  }
  std::vector<NodeRef> &inputs_at(size_t frame) { return input_refs_[frame]; }
  std::vector<NodeRef> &latches_at(size_t frame) { return latch_refs_[frame]; }

private:
  std::vector<std::vector<NodeRef>> rows_;
  std::vector<std::vector<NodeRef>> input_refs_;
  std::vector<std::vector<NodeRef>> latch_refs_;
};

struct MergeCounts {
  uint64_t trivial = 0;
  uint64_t structural = 0;
  uint64_t functional = 0;
  uint64_t total() const { return trivial + structural + functional; }
};

struct FrameSummary {
  std::vector<NodeRef> bads;
  std::vector<NodeRef> constraints;
  MergeCounts merges;
  uint64_t fresh_gates = 0;
  uint64_t new_vars = 0; // encoding variables (inputs, latches, gates)
  uint64_t skipped_by_ec_limit = 0;
  EquivQueryStats equiv;
  int64_t t_unroll_us = 0;
  int64_t t_fraig_us = 0;
};

/// The original (frame, literal) a solver variable was created for. Merged
/// nodes share their representative's variable; the origin names the first.
struct VarOrigin {
  size_t frame;
  AigLiteral lit;
};

/// Record of one functional merge, for the soundness audit.
struct MergeRecord {
  size_t frame;
  uint32_t aig_var; // the gate that was merged away
  NodeRef bound;    // the representative it was bound to
};

/// Time-frame expansion with on-the-fly reduction. Owns the solver, the
/// cross-frame structural-hash table and the simulation state; single
/// threaded, driven by the BMC loop for the whole run.
class UnrollContext {
public:
  UnrollContext(const AigNetwork &net, const BmcOptions &opts);

  /// Invoked after a frame's inputs and latches exist and before its gates
  /// are swept; installs constraint-aware patterns and may pre-encode the
  /// constraint cone for SAT sampling.
  using PatternHook = std::function<void(UnrollContext &, size_t)>;
  void set_pattern_hook(PatternHook hook) { pattern_hook_ = std::move(hook); }

  /// Unrolls frame k: inputs, latch linkage, then every AND gate through
  /// trivial simplification, structural hashing, functional redundancy
  /// removal, or a fresh Tseitin encoding.
  FrameSummary unroll_frame(size_t k);

  NodeRef resolve_literal(size_t k, AigLiteral lit) const {
    return frames_.resolve(k, lit);
  }

  /// Encodes only the gates of frame k whose output variable is in `vars`
  /// (callers pass a fan-in-closed set). Used to make the constraint cone
  /// available before SAT sampling; stats accrue to the current summary.
  void encode_gate_subset(size_t k, const std::vector<bool> &vars);

  Solver &solver() { return solver_; }
  FrameMap &frames() { return frames_; }
  const FrameMap &frames() const { return frames_; }
  FraigEngine &engine() { return engine_; }
  const AigNetwork &net() const { return net_; }
  const BmcOptions &opts() const { return opts_; }

  const VarOrigin *origin_of(uint32_t var) const {
    return var < origins_.size() && origins_[var].has_value()
               ? &*origins_[var]
               : nullptr;
  }

  /// Audit hook fired on every functional merge (constant or pair).
  std::function<void(const MergeRecord &)> on_functional_merge;

private:
  Lit fresh_var(size_t frame, AigLiteral lit);
  Lit lit_for(NodeRef ref); // no-fraig path: constants get a pinned variable
  void encode_and_clauses(Lit g, Lit a, Lit b);
  void encode_gates(size_t k, const std::vector<bool> *filter,
                    FrameSummary &s);
  void process_gate(size_t k, const AndGate &gate, FrameSummary &s);

  const AigNetwork &net_;
  const BmcOptions &opts_;
  Solver solver_;
  FrameMap frames_;
  StrashTable strash_;
  FraigEngine engine_;
  std::vector<std::optional<VarOrigin>> origins_;
  Lit const_false_var_; // lazily created in no-fraig mode
  PatternHook pattern_hook_;
  FrameSummary *cur_ = nullptr; // summary of the frame being built
};

} // namespace fraigbmc
