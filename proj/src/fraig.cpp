#include "fraigbmc/fraig.hpp"

#include <algorithm>
#include <cassert>

namespace fraigbmc {

void sim_gate_into(std::span<const uint64_t> a, bool neg_a,
                   std::span<const uint64_t> b, bool neg_b,
                   std::span<uint64_t> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  uint64_t ma = neg_a ? ~0ull : 0ull;
  uint64_t mb = neg_b ? ~0ull : 0ull;
  for (size_t w = 0; w < out.size(); ++w)
    out[w] = (a[w] ^ ma) & (b[w] ^ mb);
}

SimWords sim_gate(std::span<const uint64_t> a, bool neg_a,
                  std::span<const uint64_t> b, bool neg_b) {
  SimWords out(a.size());
  sim_gate_into(a, neg_a, b, neg_b, out);
  return out;
}

EquivOutcome check_equiv(Solver &solver, Lit n, Lit q, bool same_phase,
                         int64_t conflict_limit, EquivQueryStats &stats) {
  Lit qp = same_phase ? q : ~q;

  ++stats.sat_calls;
  SolveStatus r1 = solver.solve({n, ~qp}, conflict_limit);
  if (r1 == SolveStatus::Unknown) {
    ++stats.skipped;
    return EquivOutcome::Skipped;
  }
  if (r1 == SolveStatus::Sat) {
    ++stats.refuted;
    return EquivOutcome::Refuted;
  }

  ++stats.sat_calls;
  SolveStatus r2 = solver.solve({~n, qp}, conflict_limit);
  if (r2 == SolveStatus::Unknown) {
    ++stats.skipped;
    return EquivOutcome::Skipped;
  }
  if (r2 == SolveStatus::Sat) {
    ++stats.refuted;
    return EquivOutcome::Refuted;
  }

  ++stats.proved;
  return EquivOutcome::Equivalent;
}

FraigEngine::FraigEngine(uint32_t base_words, uint32_t ec_limit,
                         uint32_t refine_batch, uint64_t seed)
    : base_words_(base_words), ec_limit_(ec_limit),
      refine_batch_(refine_batch), words_(base_words), rng_(seed) {}

size_t FraigEngine::digest_of(std::span<const uint64_t> words) {
  uint64_t h = 0x9e3779b97f4a7c15ull;
  for (uint64_t w : words) {
    h ^= w;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
  }
  return static_cast<size_t>(h);
}

FraigEngine::VecKey FraigEngine::normalize(std::span<const uint64_t> vec,
                                           bool &phase) {
  phase = (vec.empty() ? 0 : vec[0] & 1) != 0;
  SimWords norm(vec.begin(), vec.end());
  if (phase)
    for (uint64_t &w : norm)
      w = ~w;
  size_t digest = digest_of(norm);
  return VecKey{std::move(norm), digest};
}

bool FraigEngine::is_all_zero(std::span<const uint64_t> vec) {
  for (uint64_t w : vec)
    if (w != 0)
      return false;
  return true;
}

bool FraigEngine::is_all_one(std::span<const uint64_t> vec) {
  for (uint64_t w : vec)
    if (w != ~0ull)
      return false;
  return true;
}

SimWords FraigEngine::random_vector() {
  SimWords v(words_);
  for (uint64_t &w : v)
    w = rng_();
  return v;
}

void FraigEngine::register_pattern_var(uint32_t var) {
  assert(pending_.empty() && "flush refinements before adding pattern vars");
  if (info_.size() <= var) {
    info_.resize(var + 1);
    vectors_.resize(var + 1);
  }
  info_[var].kind = VarKind::Pattern;
  vectors_[var] = random_vector();
  order_.push_back(var);
  pattern_vars_.push_back(var);
  add_member(vectors_[var], NodeRef::of_lit(Lit::of_var(var)));
  registered_.push_back(NodeRef::of_lit(Lit::of_var(var)));
}

void FraigEngine::register_gate_var(uint32_t var, NodeRef in0, NodeRef in1) {
  if (info_.size() <= var) {
    info_.resize(var + 1);
    vectors_.resize(var + 1);
  }
  info_[var] = VarInfo{VarKind::Gate, in0, in1};
  vectors_[var] = compute_gate_vector(in0, in1);
  order_.push_back(var);
  add_member(vectors_[var], NodeRef::of_lit(Lit::of_var(var)));
  registered_.push_back(NodeRef::of_lit(Lit::of_var(var)));
}

SimWords FraigEngine::compute_gate_vector(NodeRef in0, NodeRef in1) const {
  assert(!in0.is_constant() && !in1.is_constant());
  return sim_gate(vectors_[in0.lit().var()], in0.lit().negated(),
                  vectors_[in1.lit().var()], in1.lit().negated());
}

FraigEngine::Lookup
FraigEngine::find_candidates(std::span<const uint64_t> vec) const {
  Lookup result;
  bool phase = false;
  VecKey key = normalize(vec, phase);
  auto it = classes_.find(key);
  if (it == classes_.end())
    return result;
  const std::vector<Member> &members = it->second;
  if (members.size() >= ec_limit_) {
    result.skipped_by_limit = true;
    return result;
  }
  result.candidates.reserve(members.size());
  for (const Member &m : members)
    result.candidates.push_back(Candidate{m.ref, m.phase == phase});
  return result;
}

void FraigEngine::add_member(std::span<const uint64_t> vec, NodeRef ref) {
  bool phase = false;
  VecKey key = normalize(vec, phase);
  std::vector<Member> &members = classes_[std::move(key)];
  if (members.size() >= ec_limit_)
    return;
  members.push_back(Member{ref, phase});
}

void FraigEngine::refine_from_model(const Solver &solver) {
  std::vector<uint8_t> column(pattern_vars_.size());
  for (size_t i = 0; i < pattern_vars_.size(); ++i)
    column[i] = solver.model_value(Lit::of_var(pattern_vars_[i])) ? 1 : 0;
  pending_.push_back(std::move(column));
  if (pending_.size() >= refine_batch_)
    flush_pending();
}

void FraigEngine::flush_pending() {
  if (pending_.empty())
    return;
  size_t new_words = (pending_.size() + 63) / 64;
  for (size_t i = 0; i < pattern_vars_.size(); ++i) {
    uint32_t var = pattern_vars_[i];
    for (size_t w = 0; w < new_words; ++w) {
      uint64_t bits = rng_(); // random padding for unused bit positions
      for (size_t j = 0; j < 64; ++j) {
        size_t col = w * 64 + j;
        if (col >= pending_.size())
          break;
        uint64_t mask = 1ull << j;
        bits = pending_[col][i] ? (bits | mask) : (bits & ~mask);
      }
      vectors_[var].push_back(bits);
    }
  }
  words_ += new_words;
  pending_.clear();
  resimulate();
  rebuild_classes();
}

void FraigEngine::reinstall_patterns(
    const std::vector<std::pair<uint32_t, SimWords>> &assignments,
    size_t new_words) {
  pending_.clear();
  words_ = new_words;
  size_t assigned = 0;
  for (const auto &[var, words] : assignments) {
    assert(info_[var].kind == VarKind::Pattern);
    assert(words.size() == new_words);
    vectors_[var] = words;
    ++assigned;
  }
  assert(assigned == pattern_vars_.size());
  resimulate();
  rebuild_classes();
}

void FraigEngine::resimulate() {
  for (uint32_t var : order_) {
    VarInfo &vi = info_[var];
    if (vi.kind == VarKind::Gate) {
      vectors_[var] = compute_gate_vector(vi.in0, vi.in1);
    } else if (vectors_[var].size() != words_) {
      // Pattern variable not covered at the current width: extend randomly.
      while (vectors_[var].size() < words_)
        vectors_[var].push_back(rng_());
      vectors_[var].resize(words_);
    }
  }
}

void FraigEngine::rebuild_classes() {
  classes_.clear();
  for (NodeRef ref : registered_)
    add_member(vectors_[ref.lit().var()], ref);
}

} // namespace fraigbmc
