#pragma once

#include <optional>
#include <vector>

#include "csat/atoms.hpp"
#include "csat/cnf.hpp"
#include "csat/model.hpp"

namespace csat {

enum class Heuristic { Activity, FixedOrder };

struct SolverConfig {
    Heuristic heuristic = Heuristic::Activity;
    bool phase_saving = true;
    int luby_base = 64;                  // conflicts per restart unit
    std::optional<long long> conflict_limit;
    unsigned seed = 0;                   // tie-breaking jitter on activities
};

struct SolveResult {
    enum Status { Sat, Unsat, Unknown } status;
    std::vector<bool> model; // indexed by var-1, meaningful for Sat
};

/// Conflict-driven clause learning over watched literals: 1UIP learning,
/// activity decisions, Luby restarts, phase saving. No preprocessing.
class Solver {
public:
    explicit Solver(const CnfDocument& cnf, SolverConfig cfg = {});

    SolveResult solve();

    struct PropResult {
        bool conflict = false;
        std::vector<int> fixed; // DIMACS literals fixed at decision level 0
    };
    /// Exhaustive unit propagation at level 0, no decisions.
    PropResult propagate_only();

private:
    struct Watcher {
        int clause;
        int blocker;
    };

    int nvars_;
    SolverConfig cfg_;
    std::vector<std::vector<int>> clauses_; // internal literals
    std::vector<std::vector<Watcher>> watches_;
    std::vector<signed char> assign_; // by var: -1 undef, 0 false, 1 true
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::vector<int> reason_; // by var: clause index or -1
    std::vector<int> level_;  // by var
    std::vector<double> activity_;
    double var_inc_ = 1.0;
    size_t qhead_ = 0;
    bool unsat_root_ = false;
    long long conflicts_ = 0;

    bool value_true(int lit) const;
    bool value_false(int lit) const;
    bool assigned(int lit) const;
    void enqueue(int lit, int reason);
    int propagate(); // returns conflicting clause index or -1
    void attach(int ci);
    int analyze(int confl, std::vector<int>& learnt);
    void backtrack(int level);
    void bump(int var);
    void decay();
    int pick_branch();
    std::vector<bool> extract_model() const;
};

/// Maps a satisfying CNF model back to a CSP assignment: each integer
/// variable takes the greatest domain value whose Less atom is false,
/// Booleans read their BoolVal atom.
Assignment decode(const std::vector<bool>& model, const VarMap& varmap, const Instance& inst);

/// Solve/decode/block loop. Blocking clauses range over the value atoms of
/// non-auxiliary variables, so CNF-level model multiplicity never duplicates
/// CSP solutions. limit < 0 enumerates everything.
std::vector<Assignment> enumerate_solutions(const CnfDocument& cnf, const VarMap& varmap,
                                            const Instance& inst, Int limit = -1,
                                            SolverConfig cfg = {});

} // namespace csat
