#include "fraigbmc/unroll.hpp"

#include <chrono>

namespace fraigbmc {

namespace {
int64_t now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}
} // namespace

UnrollContext::UnrollContext(const AigNetwork &net, const BmcOptions &opts)
    : net_(net), opts_(opts),
      engine_(opts.sim_words, opts.ec_limit, opts.refine_batch, opts.seed) {}

Lit UnrollContext::fresh_var(size_t frame, AigLiteral lit) {
  Lit v = solver_.new_var();
  if (origins_.size() <= v.var())
    origins_.resize(v.var() + 1);
  origins_[v.var()] = VarOrigin{frame, lit};
  ++cur_->new_vars;
  return v;
}

Lit UnrollContext::lit_for(NodeRef ref) {
  if (!ref.is_constant())
    return ref.lit();
  if (!const_false_var_.valid()) {
    const_false_var_ = solver_.new_var();
    ++cur_->new_vars;
    solver_.add_clause({~const_false_var_});
  }
  return ref.is_false() ? const_false_var_ : ~const_false_var_;
}

void UnrollContext::encode_and_clauses(Lit g, Lit a, Lit b) {
  solver_.add_clause({~g, a});
  solver_.add_clause({~g, b});
  solver_.add_clause({g, ~a, ~b});
}

void UnrollContext::process_gate(size_t k, const AndGate &gate,
                                 FrameSummary &s) {
  uint32_t out_var = gate.out.var();
  NodeRef a = frames_.resolve(k, gate.in0);
  NodeRef b = frames_.resolve(k, gate.in1);

  if (!opts_.fraig) {
    Lit g = fresh_var(k, gate.out);
    encode_and_clauses(g, lit_for(a), lit_for(b));
    frames_.set(k, out_var, NodeRef::of_lit(g));
    ++s.fresh_gates;
    return;
  }

  // Stage 1: trivial rules.
  if (auto r = trivial_simplify(a, b)) {
    frames_.set(k, out_var, *r);
    ++s.merges.trivial;
    return;
  }

  // Stage 2: structural hashing, shared across frames.
  StrashResult sr = strash_.lookup_or_insert(StrashKey::make(a, b));
  if (sr.found) {
    frames_.set(k, out_var, sr.representative);
    ++s.merges.structural;
    return;
  }

  // Stage 3: functional redundancy removal.
  int64_t t0 = now_us();
  SimWords vec = engine_.compute_gate_vector(a, b);

  // The node must be encoded before any equivalence query; on a merge the
  // variable is retired and its clauses stay behind as redundant.
  Lit g = fresh_var(k, gate.out);
  encode_and_clauses(g, a.lit(), b.lit());

  NodeRef resolved = NodeRef::unresolved();

  // Constant candidates: an all-zeros/all-ones vector is checked against the
  // constant directly with a single query.
  if (FraigEngine::is_all_zero(vec) || FraigEngine::is_all_one(vec)) {
    bool against_true = FraigEngine::is_all_one(vec);
    ++s.equiv.sat_calls;
    SolveStatus st = solver_.solve({against_true ? ~g : g},
                                   opts_.equiv_conflict_budget);
    if (st == SolveStatus::Unsat) {
      ++s.equiv.proved;
      resolved = against_true ? NodeRef::const_true() : NodeRef::const_false();
    } else if (st == SolveStatus::Sat) {
      ++s.equiv.refuted;
      engine_.refine_from_model(solver_);
    } else {
      ++s.equiv.skipped;
    }
  }

  if (!resolved.is_resolved()) {
    FraigEngine::Lookup lookup = engine_.find_candidates(vec);
    if (lookup.skipped_by_limit)
      ++s.skipped_by_ec_limit;
    for (const Candidate &cand : lookup.candidates) {
      if (opts_.same_phase_only && !cand.same_phase)
        continue;
      EquivOutcome outcome =
          check_equiv(solver_, g, cand.ref.lit(), cand.same_phase,
                      opts_.equiv_conflict_budget, s.equiv);
      if (outcome == EquivOutcome::Equivalent) {
        resolved = cand.ref ^ !cand.same_phase;
        break;
      }
      if (outcome == EquivOutcome::Refuted)
        engine_.refine_from_model(solver_);
      // Skipped: treated as not equivalent.
    }
  }

  if (resolved.is_resolved()) {
    frames_.set(k, out_var, resolved);
    *sr.slot = resolved; // future structural twins canonicalize to the merge
    ++s.merges.functional;
    if (on_functional_merge)
      on_functional_merge(MergeRecord{k, out_var, resolved});
  } else {
    NodeRef gref = NodeRef::of_lit(g);
    frames_.set(k, out_var, gref);
    *sr.slot = gref;
    engine_.register_gate_var(g.var(), a, b);
    ++s.fresh_gates;
  }
  s.t_fraig_us += now_us() - t0;
}

void UnrollContext::encode_gates(size_t k, const std::vector<bool> *filter,
                                 FrameSummary &s) {
  for (const AndGate &gate : net_.ands) {
    if (filter && !(*filter)[gate.out.var()])
      continue;
    if (frames_.get(k, gate.out.var()).is_resolved())
      continue;
    process_gate(k, gate, s);
  }
}

void UnrollContext::encode_gate_subset(size_t k,
                                       const std::vector<bool> &vars) {
  assert(cur_ && "only available while a frame is being unrolled");
  encode_gates(k, &vars, *cur_);
}

FrameSummary UnrollContext::unroll_frame(size_t k) {
  assert(k == frames_.frames() && "frames must be unrolled in order");
  int64_t t0 = now_us();

  FrameSummary s;
  cur_ = &s;
  frames_.begin_frame(net_.maxvar);

  for (AigLiteral in : net_.inputs) {
    Lit v = fresh_var(k, in);
    NodeRef ref = NodeRef::of_lit(v);
    frames_.set(k, in.var(), ref);
    frames_.inputs_at(k).push_back(ref);
    if (opts_.fraig)
      engine_.register_pattern_var(v.var());
  }

  for (const Latch &latch : net_.latches) {
    NodeRef ref;
    if (k == 0) {
      switch (latch.reset) {
      case LatchReset::Zero:
        ref = NodeRef::const_false();
        break;
      case LatchReset::One:
        ref = NodeRef::const_true();
        break;
      case LatchReset::Uninitialized: {
        Lit v = fresh_var(0, latch.state);
        ref = NodeRef::of_lit(v);
        if (opts_.fraig)
          engine_.register_pattern_var(v.var());
        break;
      }
      }
    } else {
      ref = frames_.resolve(k - 1, latch.next);
    }
    frames_.set(k, latch.state.var(), ref);
    frames_.latches_at(k).push_back(ref);
  }

  if (pattern_hook_)
    pattern_hook_(*this, k);

  encode_gates(k, nullptr, s);

  if (opts_.fraig && engine_.pending_columns() > 0) {
    int64_t tf = now_us();
    engine_.flush_pending();
    s.t_fraig_us += now_us() - tf;
  }

  for (AigLiteral bad : net_.bads)
    s.bads.push_back(frames_.resolve(k, bad));
  for (AigLiteral c : net_.constraints)
    s.constraints.push_back(frames_.resolve(k, c));

  s.t_unroll_us = (now_us() - t0) - s.t_fraig_us;
  cur_ = nullptr;
  return s;
}

} // namespace fraigbmc
