#include "fraigbmc/solver.hpp"

#include <algorithm>
#include <ostream>

namespace fraigbmc {

namespace {
constexpr double kVarDecay = 1.0 / 0.95;
constexpr double kClauseDecay = 1.0 / 0.999;
constexpr double kActivityRescale = 1e100;
constexpr float kClauseActivityRescale = 1e20f;
constexpr int64_t kRestartFirst = 100;
constexpr double kRestartGrow = 1.5;
} // namespace

Solver::Solver() {
  // Slot 0 is unused: variables are 1-indexed.
  assigns_.push_back(Value::Undef);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  phase_.push_back(0);
  seen_.push_back(0);
  model_.push_back(Value::Undef);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  watches_.resize(2);
}

Lit Solver::new_var() {
  ++num_vars_;
  assigns_.push_back(Value::Undef);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  phase_.push_back(0);
  seen_.push_back(0);
  model_.push_back(Value::Undef);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  watches_.resize(2 * (num_vars_ + 1));
  heap_insert(num_vars_);
  return Lit::of_var(num_vars_);
}

// ---------------------------------------------------------------------------
// Decision heap
// ---------------------------------------------------------------------------

void Solver::heap_insert(uint32_t v) {
  if (heap_contains(v))
    return;
  heap_pos_[v] = static_cast<int32_t>(heap_.size());
  heap_.push_back(v);
  heap_sift_up(heap_.size() - 1);
}

void Solver::heap_sift_up(size_t i) {
  uint32_t v = heap_[i];
  double a = activity_[v];
  while (i > 0) {
    size_t parent = (i - 1) / 2;
    if (activity_[heap_[parent]] >= a)
      break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<int32_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int32_t>(i);
}

void Solver::heap_sift_down(size_t i) {
  uint32_t v = heap_[i];
  double a = activity_[v];
  size_t n = heap_.size();
  for (;;) {
    size_t child = 2 * i + 1;
    if (child >= n)
      break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]])
      ++child;
    if (a >= activity_[heap_[child]])
      break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<int32_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int32_t>(i);
}

uint32_t Solver::heap_pop() {
  uint32_t top = heap_[0];
  heap_pos_[top] = -1;
  if (heap_.size() > 1) {
    heap_[0] = heap_.back();
    heap_pos_[heap_[0]] = 0;
    heap_.pop_back();
    heap_sift_down(0);
  } else {
    heap_.pop_back();
  }
  return top;
}

void Solver::bump_var(uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > kActivityRescale) {
    for (uint32_t i = 1; i <= num_vars_; ++i)
      activity_[i] /= kActivityRescale;
    var_inc_ /= kActivityRescale;
  }
  if (heap_contains(v))
    heap_sift_up(static_cast<size_t>(heap_pos_[v]));
}

void Solver::bump_clause(Clause &c) {
  c.activity += static_cast<float>(cla_inc_);
  if (c.activity > kClauseActivityRescale) {
    for (Clause &cl : learnts_)
      cl.activity /= kClauseActivityRescale;
    cla_inc_ /= kClauseActivityRescale;
  }
}

// ---------------------------------------------------------------------------
// Assignment and propagation
// ---------------------------------------------------------------------------

bool Solver::enqueue(Lit p, ClauseRef reason) {
  Value v = value(p);
  if (v != Value::Undef)
    return v == Value::True;
  assigns_[p.var()] = p.negated() ? Value::False : Value::True;
  level_[p.var()] = decision_level();
  reason_[p.var()] = reason;
  trail_.push_back(p);
  return true;
}

void Solver::backtrack(int target) {
  if (decision_level() <= target)
    return;
  size_t floor = trail_lim_[target];
  for (size_t i = trail_.size(); i-- > floor;) {
    uint32_t v = trail_[i].var();
    phase_[v] = trail_[i].negated() ? 1 : 0;
    assigns_[v] = Value::Undef;
    reason_[v] = kNoReason;
    if (!heap_contains(v))
      heap_insert(v);
  }
  trail_.resize(floor);
  trail_lim_.resize(target);
  qhead_ = trail_.size();
}

Solver::ClauseRef Solver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit false_lit = ~p;
    std::vector<Watch> &ws = watches_[false_lit.code()];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watch w = ws[i];
      if (value(w.blocker) == Value::True) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause &c = clause(w.cref);
      Lit *lits = c.lits.data();
      if (lits[0] == false_lit)
        std::swap(lits[0], lits[1]);
      assert(lits[1] == false_lit);
      if (value(lits[0]) == Value::True) {
        ws[j++] = Watch{w.cref, lits[0]};
        ++i;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (value(lits[k]) != Value::False) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1].code()].push_back(Watch{w.cref, lits[0]});
          moved = true;
          break;
        }
      }
      if (moved) {
        ++i;
        continue;
      }
      // Unit or conflicting.
      ws[j++] = Watch{w.cref, lits[0]};
      ++i;
      if (!enqueue(lits[0], w.cref)) {
        while (i < ws.size())
          ws[j++] = ws[i++];
        ws.resize(j);
        return w.cref;
      }
    }
    ws.resize(j);
  }
  return kNoReason;
}

// ---------------------------------------------------------------------------
// Conflict analysis (first UIP)
// ---------------------------------------------------------------------------

void Solver::analyze(ClauseRef confl, std::vector<Lit> &out_learnt,
                     int &out_level) {
  out_learnt.clear();
  out_learnt.push_back(Lit()); // slot for the asserting literal
  int counter = 0;
  Lit p;
  size_t index = trail_.size();

  ClauseRef reason = confl;
  for (;;) {
    Clause &c = clause(reason);
    if (reason & kLearntTag)
      bump_clause(c);
    for (Lit q : c.lits) {
      if (p.valid() && q == p)
        continue;
      uint32_t v = q.var();
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        bump_var(v);
        if (level_[v] >= decision_level())
          ++counter;
        else
          out_learnt.push_back(q);
      }
    }
    while (!seen_[trail_[index - 1].var()])
      --index;
    p = trail_[--index];
    seen_[p.var()] = 0;
    if (--counter == 0)
      break;
    reason = reason_[p.var()];
    assert(reason != kNoReason);
  }
  out_learnt[0] = ~p;

  // Backtrack level = second-highest level in the clause.
  out_level = 0;
  size_t max_idx = 1;
  for (size_t i = 1; i < out_learnt.size(); ++i) {
    int lv = level_[out_learnt[i].var()];
    if (lv > out_level) {
      out_level = lv;
      max_idx = i;
    }
  }
  if (out_learnt.size() > 1)
    std::swap(out_learnt[1], out_learnt[max_idx]);

  for (Lit l : out_learnt)
    seen_[l.var()] = 0;
}

void Solver::record_learnt(const std::vector<Lit> &learnt) {
  if (learnt.size() == 1) {
    enqueue(learnt[0], kNoReason);
    saved_units_.push_back(learnt[0]);
    return;
  }
  ClauseRef ref = static_cast<ClauseRef>(learnts_.size()) | kLearntTag;
  learnts_.push_back(Clause{learnt, static_cast<float>(cla_inc_), false});
  ++alive_learnts_;
  watches_[learnt[0].code()].push_back(Watch{ref, learnt[1]});
  watches_[learnt[1].code()].push_back(Watch{ref, learnt[0]});
  enqueue(learnt[0], ref);
}

void Solver::reduce_learnts() {
  std::vector<uint32_t> order;
  order.reserve(learnts_.size());
  for (uint32_t i = 0; i < learnts_.size(); ++i)
    if (!learnts_[i].deleted)
      order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return learnts_[a].activity < learnts_[b].activity;
  });

  size_t removed = 0, target = order.size() / 2;
  for (uint32_t idx : order) {
    if (removed >= target)
      break;
    Clause &c = learnts_[idx];
    if (c.lits.size() <= 2)
      continue;
    // Keep clauses that are the reason for a current assignment.
    uint32_t v = c.lits[0].var();
    if (assigns_[v] != Value::Undef && reason_[v] == (idx | kLearntTag))
      continue;
    c.deleted = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
    ++removed;
  }
  alive_learnts_ -= removed;

  if (removed > 0) {
    for (auto &ws : watches_) {
      std::erase_if(ws, [&](const Watch &w) {
        return (w.cref & kLearntTag) && clause(w.cref).deleted;
      });
    }
  }
  max_learnts_ = max_learnts_ + max_learnts_ / 10;
}

// ---------------------------------------------------------------------------
// Clause addition
// ---------------------------------------------------------------------------

void Solver::add_clause(std::span<const Lit> lits) {
  ++num_clauses_added_;
  if (record_clauses_)
    recorded_.emplace_back(lits.begin(), lits.end());
  if (!ok_)
    return;
  assert(decision_level() == 0);

  std::vector<Lit> cl(lits.begin(), lits.end());
  for (Lit l : cl)
    assert(l.valid() && l.var() <= num_vars_);
  std::sort(cl.begin(), cl.end(),
            [](Lit a, Lit b) { return a.code() < b.code(); });
  size_t w = 0;
  for (size_t i = 0; i < cl.size(); ++i) {
    if (w > 0 && cl[i] == cl[w - 1])
      continue; // duplicate
    if (w > 0 && cl[i] == ~cl[w - 1])
      return; // tautology
    if (value(cl[i]) == Value::True)
      return; // satisfied at root
    if (value(cl[i]) == Value::False)
      continue; // falsified at root
    cl[w++] = cl[i];
  }
  cl.resize(w);

  if (cl.empty()) {
    ok_ = false;
    return;
  }
  if (cl.size() == 1) {
    if (!enqueue(cl[0], kNoReason) || propagate() != kNoReason)
      ok_ = false;
    return;
  }
  ClauseRef ref = static_cast<ClauseRef>(problem_.size());
  problem_.push_back(Clause{std::move(cl), 0.0f, false});
  const Clause &c = problem_.back();
  watches_[c.lits[0].code()].push_back(Watch{ref, c.lits[1]});
  watches_[c.lits[1].code()].push_back(Watch{ref, c.lits[0]});
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

Lit Solver::pick_decision() {
  while (!heap_.empty()) {
    uint32_t v = heap_pop();
    if (assigns_[v] == Value::Undef)
      return Lit::of_var(v, phase_[v] != 0);
  }
  return Lit();
}

SolveStatus Solver::search(int64_t conflict_limit) {
  int64_t conflicts = 0;
  int64_t restart_budget = kRestartFirst;
  double restart_limit = static_cast<double>(kRestartFirst);
  std::vector<Lit> learnt;

  for (;;) {
    ClauseRef confl = propagate();
    if (confl != kNoReason) {
      ++conflicts;
      ++total_conflicts_;
      if (decision_level() <= root_level_)
        return SolveStatus::Unsat;
      int bt_level = 0;
      analyze(confl, learnt, bt_level);
      backtrack(std::max(bt_level, root_level_));
      record_learnt(learnt);
      var_inc_ *= kVarDecay;
      cla_inc_ *= kClauseDecay;
      if (conflict_limit >= 0 && conflicts >= conflict_limit)
        return SolveStatus::Unknown;
      if (--restart_budget <= 0) {
        restart_limit *= kRestartGrow;
        restart_budget = static_cast<int64_t>(restart_limit);
        backtrack(root_level_);
      }
    } else {
      if (alive_learnts_ > max_learnts_ + num_vars_)
        reduce_learnts();
      Lit next = pick_decision();
      if (!next.valid()) {
        for (uint32_t v = 1; v <= num_vars_; ++v)
          model_[v] = assigns_[v];
        return SolveStatus::Sat;
      }
      new_decision_level();
      enqueue(next, kNoReason);
    }
  }
}

void Solver::flush_saved_units() {
  assert(decision_level() == 0);
  for (Lit u : saved_units_) {
    if (!enqueue(u, kNoReason) || propagate() != kNoReason) {
      ok_ = false;
      break;
    }
  }
  saved_units_.clear();
}

SolveStatus Solver::solve(std::span<const Lit> assumptions,
                          int64_t conflict_limit) {
  if (!ok_)
    return SolveStatus::Unsat;
  assert(decision_level() == 0);
  if (propagate() != kNoReason) {
    ok_ = false;
    return SolveStatus::Unsat;
  }

  root_level_ = 0;
  SolveStatus result = SolveStatus::Unknown;
  bool assumptions_failed = false;
  for (Lit a : assumptions) {
    assert(a.valid() && a.var() <= num_vars_);
    if (value(a) == Value::True)
      continue;
    if (value(a) == Value::False) {
      assumptions_failed = true;
      break;
    }
    new_decision_level();
    enqueue(a, kNoReason);
    if (propagate() != kNoReason) {
      assumptions_failed = true;
      break;
    }
  }

  if (assumptions_failed) {
    result = SolveStatus::Unsat;
  } else {
    root_level_ = decision_level();
    result = search(conflict_limit);
  }

  backtrack(0);
  root_level_ = 0;
  flush_saved_units();
  return result;
}

bool Solver::model_value(Lit lit) const {
  if (lit.var() >= model_.size() || model_[lit.var()] == Value::Undef)
    return lit.negated(); // default polarity: variable is false
  bool v = model_[lit.var()] == Value::True;
  return lit.negated() ? !v : v;
}

void Solver::dump_dimacs(std::ostream &os) const {
  os << "p cnf " << num_vars_ << ' ' << recorded_.size() << '\n';
  for (const auto &cl : recorded_) {
    for (Lit l : cl)
      os << (l.negated() ? "-" : "") << l.var() << ' ';
    os << "0\n";
  }
}

} // namespace fraigbmc
