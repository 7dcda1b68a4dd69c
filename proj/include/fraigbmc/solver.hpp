#pragma once

#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace fraigbmc {

/// A solver literal. Variables are 1-indexed; the code is 2*var + sign so
/// negation is one xor.
class Lit {
public:
  constexpr Lit() = default;
  static constexpr Lit of_var(uint32_t var, bool negated = false) {
    return Lit(2 * var + (negated ? 1 : 0));
  }
  static constexpr Lit from_code(uint32_t code) { return Lit(code); }

  constexpr uint32_t code() const { return code_; }
  constexpr uint32_t var() const { return code_ >> 1; }
  constexpr bool negated() const { return (code_ & 1) != 0; }
  constexpr bool valid() const { return code_ >= 2; }
  constexpr Lit operator~() const { return Lit(code_ ^ 1); }
  constexpr bool operator==(const Lit &) const = default;

private:
  constexpr explicit Lit(uint32_t code) : code_(code) {}
  uint32_t code_ = 0;
};

enum class SolveStatus : uint8_t { Sat, Unsat, Unknown };

/// Incremental CDCL SAT solver: two-watched-literal propagation, first-UIP
/// conflict learning, activity-based decisions with phase saving, geometric
/// restarts. Clauses are permanent once added; retirement is done by callers
/// through activation literals. Satisfying assignments are total over the
/// allocated variables and default unconstrained variables to false.
class Solver {
public:
  Solver();

  Lit new_var();
  uint32_t num_vars() const { return num_vars_; }

  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  /// Solves under the given assumptions. A non-negative conflict_limit makes
  /// the call give up with Unknown once that many conflicts occurred.
  SolveStatus solve(std::span<const Lit> assumptions = {},
                    int64_t conflict_limit = -1);
  SolveStatus solve(std::initializer_list<Lit> assumptions,
                    int64_t conflict_limit = -1) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()),
                 conflict_limit);
  }

  /// Value of `lit` in the last Sat model. Variables allocated after that
  /// solve report their default polarity (false).
  bool model_value(Lit lit) const;

  uint64_t num_clauses_added() const { return num_clauses_added_; }
  uint64_t num_conflicts() const { return total_conflicts_; }

  /// When enabled, add_clause records every clause verbatim so the database
  /// can be dumped as DIMACS for external cross-checking.
  void set_record_clauses(bool on) { record_clauses_ = on; }
  void dump_dimacs(std::ostream &os) const;

private:
  enum class Value : int8_t { Undef = 0, True = 1, False = 2 };

  using ClauseRef = uint32_t;
  static constexpr ClauseRef kNoReason = 0xffffffffu;
  static constexpr ClauseRef kLearntTag = 0x80000000u;

  struct Clause {
    std::vector<Lit> lits;
    float activity = 0.0f;
    bool deleted = false;
  };

  struct Watch {
    ClauseRef cref;
    Lit blocker;
  };

  Clause &clause(ClauseRef ref) {
    return (ref & kLearntTag) ? learnts_[ref & ~kLearntTag] : problem_[ref];
  }
  const Clause &clause(ClauseRef ref) const {
    return (ref & kLearntTag) ? learnts_[ref & ~kLearntTag] : problem_[ref];
  }

  Value value(Lit l) const {
    Value v = assigns_[l.var()];
    if (v == Value::Undef || !l.negated())
      return v;
    return v == Value::True ? Value::False : Value::True;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  bool enqueue(Lit p, ClauseRef reason);
  void new_decision_level() { trail_lim_.push_back(trail_.size()); }
  void backtrack(int level);

  ClauseRef propagate();
  void analyze(ClauseRef confl, std::vector<Lit> &out_learnt, int &out_level);
  void record_learnt(const std::vector<Lit> &learnt);
  void reduce_learnts();
  Lit pick_decision();
  SolveStatus search(int64_t conflict_limit);
  void flush_saved_units();

  void bump_var(uint32_t v);
  void bump_clause(Clause &c);

  // Decision-order heap: indexed binary max-heap over variable activity.
  void heap_insert(uint32_t v);
  void heap_sift_up(size_t i);
  void heap_sift_down(size_t i);
  uint32_t heap_pop();
  bool heap_contains(uint32_t v) const {
    return v < heap_pos_.size() && heap_pos_[v] >= 0;
  }

  uint32_t num_vars_ = 0;
  bool ok_ = true;
  uint64_t num_clauses_added_ = 0;
  uint64_t total_conflicts_ = 0;

  std::vector<Clause> problem_;
  std::vector<Clause> learnts_;
  size_t alive_learnts_ = 0;
  size_t max_learnts_ = 4000;

  std::vector<std::vector<Watch>> watches_; // indexed by literal code
  std::vector<Value> assigns_;              // indexed by var
  std::vector<int> level_;                  // indexed by var
  std::vector<ClauseRef> reason_;           // indexed by var
  std::vector<uint8_t> phase_;              // saved polarity, indexed by var
  std::vector<uint8_t> seen_;               // analyze scratch, indexed by var
  std::vector<Value> model_;                // indexed by var

  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;
  int root_level_ = 0;

  std::vector<double> activity_; // indexed by var
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::vector<uint32_t> heap_;
  std::vector<int32_t> heap_pos_; // indexed by var, -1 = absent

  std::vector<Lit> saved_units_; // unit learnts to re-assert at level 0

  bool record_clauses_ = false;
  std::vector<std::vector<Lit>> recorded_;
};

} // namespace fraigbmc
