#include "csat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace csat {

namespace {

// internal literal encoding: var v (0-based) -> 2v positive, 2v+1 negative
inline int to_internal(int dimacs) {
    int v = std::abs(dimacs) - 1;
    return 2 * v + (dimacs < 0 ? 1 : 0);
}

inline int to_dimacs(int lit) {
    int v = lit / 2 + 1;
    return (lit & 1) ? -v : v;
}

inline int lit_var(int lit) { return lit / 2; }
inline int lit_neg(int lit) { return lit ^ 1; }

// finite Luby sequence generator
long long luby(long long i) {
    long long size = 1, seq = 0;
    while (size < i + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != i) {
        size = (size - 1) >> 1;
        --seq;
        i = i % size;
    }
    return 1LL << seq;
}

} // namespace

Solver::Solver(const CnfDocument& cnf, SolverConfig cfg) : nvars_(cnf.num_vars), cfg_(cfg) {
    cnf.validate();
    watches_.resize(2 * nvars_);
    assign_.assign(nvars_, -1);
    reason_.assign(nvars_, -1);
    level_.assign(nvars_, 0);
    activity_.assign(nvars_, 0.0);
    if (cfg_.seed != 0) {
        // small deterministic jitter so ties break differently per seed
        unsigned h = cfg_.seed;
        for (int v = 0; v < nvars_; ++v) {
            h = h * 1664525u + 1013904223u;
            activity_[v] = (h % 1024) * 1e-9;
        }
    }

    for (const auto& clause : cnf.clauses) {
        std::vector<int> lits;
        bool tautology = false;
        std::set<int> seen;
        for (int dl : clause) {
            int lit = to_internal(dl);
            if (seen.count(lit_neg(lit))) {
                tautology = true;
                break;
            }
            if (seen.insert(lit).second) lits.push_back(lit);
        }
        if (tautology) continue;
        if (lits.empty()) {
            unsat_root_ = true;
            continue;
        }
        clauses_.push_back(std::move(lits));
        attach((int)clauses_.size() - 1);
    }
}

bool Solver::value_true(int lit) const {
    signed char a = assign_[lit_var(lit)];
    return a != -1 && (a == 1) == !(lit & 1);
}

bool Solver::value_false(int lit) const {
    signed char a = assign_[lit_var(lit)];
    return a != -1 && (a == 1) == bool(lit & 1);
}

bool Solver::assigned(int lit) const { return assign_[lit_var(lit)] != -1; }

void Solver::enqueue(int lit, int reason) {
    int v = lit_var(lit);
    assign_[v] = (lit & 1) ? 0 : 1;
    reason_[v] = reason;
    level_[v] = (int)trail_lim_.size();
    trail_.push_back(lit);
}

void Solver::attach(int ci) {
    auto& c = clauses_[ci];
    if (c.size() == 1) return; // units handled at solve start
    watches_[lit_neg(c[0])].push_back({ci, c[1]});
    watches_[lit_neg(c[1])].push_back({ci, c[0]});
}

int Solver::propagate() {
    while (qhead_ < trail_.size()) {
        int lit = trail_[qhead_++];
        auto& ws = watches_[lit];
        size_t i = 0, j = 0;
        while (i < ws.size()) {
            Watcher w = ws[i];
            if (value_true(w.blocker)) {
                ws[j++] = ws[i++];
                continue;
            }
            auto& c = clauses_[w.clause];
            // make c[0] the other watched literal
            if (c[0] == lit_neg(lit)) std::swap(c[0], c[1]);
            if (value_true(c[0])) {
                ws[j++] = {w.clause, c[0]};
                ++i;
                continue;
            }
            // look for a new watch
            bool moved = false;
            for (size_t k = 2; k < c.size(); ++k) {
                if (!value_false(c[k])) {
                    std::swap(c[1], c[k]);
                    watches_[lit_neg(c[1])].push_back({w.clause, c[0]});
                    moved = true;
                    break;
                }
            }
            if (moved) {
                ++i;
                continue;
            }
            // unit or conflict
            ws[j++] = {w.clause, c[0]};
            ++i;
            if (value_false(c[0])) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                return w.clause;
            }
            enqueue(c[0], w.clause);
        }
        ws.resize(j);
    }
    return -1;
}

void Solver::bump(int var) {
    activity_[var] += var_inc_;
    if (activity_[var] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
}

void Solver::decay() { var_inc_ /= 0.95; }

int Solver::analyze(int confl, std::vector<int>& learnt) {
    learnt.clear();
    learnt.push_back(0); // slot for the asserting literal
    std::vector<bool> seen(nvars_, false);
    int counter = 0;
    int lit = -1;
    size_t index = trail_.size();
    int current_level = (int)trail_lim_.size();

    do {
        const auto& c = clauses_[confl];
        for (size_t k = (lit == -1 ? 0 : 1); k < c.size(); ++k) {
            int q = c[k];
            int v = lit_var(q);
            if (!seen[v] && level_[v] > 0) {
                seen[v] = true;
                bump(v);
                if (level_[v] == current_level)
                    ++counter;
                else
                    learnt.push_back(q);
            }
        }
        // pick the next clause to look at
        while (!seen[lit_var(trail_[--index])]) {}
        lit = trail_[index];
        seen[lit_var(lit)] = false;
        confl = reason_[lit_var(lit)];
        --counter;
    } while (counter > 0);
    learnt[0] = lit_neg(lit);

    int back_level = 0;
    if (learnt.size() > 1) {
        size_t max_i = 1;
        for (size_t k = 2; k < learnt.size(); ++k)
            if (level_[lit_var(learnt[k])] > level_[lit_var(learnt[max_i])]) max_i = k;
        std::swap(learnt[1], learnt[max_i]);
        back_level = level_[lit_var(learnt[1])];
    }
    return back_level;
}

void Solver::backtrack(int level) {
    if ((int)trail_lim_.size() <= level) return;
    for (size_t k = trail_.size(); k-- > (size_t)trail_lim_[level];) {
        int v = lit_var(trail_[k]);
        assign_[v] = -1;
        reason_[v] = -1;
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
}

int Solver::pick_branch() {
    if (cfg_.heuristic == Heuristic::FixedOrder) {
        for (int v = 0; v < nvars_; ++v)
            if (assign_[v] == -1) return v;
        return -1;
    }
    int best = -1;
    for (int v = 0; v < nvars_; ++v)
        if (assign_[v] == -1 && (best == -1 || activity_[v] > activity_[best])) best = v;
    return best;
}

std::vector<bool> Solver::extract_model() const {
    std::vector<bool> model(nvars_);
    for (int v = 0; v < nvars_; ++v) model[v] = assign_[v] == 1;
    return model;
}

SolveResult Solver::solve() {
    if (unsat_root_) return {SolveResult::Unsat, {}};

    // root-level units
    for (size_t ci = 0; ci < clauses_.size(); ++ci) {
        if (clauses_[ci].size() != 1) continue;
        int lit = clauses_[ci][0];
        if (value_false(lit)) return {SolveResult::Unsat, {}};
        if (!assigned(lit)) enqueue(lit, -1);
    }

    std::vector<bool> phase(nvars_, false);
    long long restart_unit = 0;
    long long conflicts_until_restart = cfg_.luby_base * luby(restart_unit);

    while (true) {
        int confl = propagate();
        if (confl != -1) {
            ++conflicts_;
            if (trail_lim_.empty()) return {SolveResult::Unsat, {}};
            if (cfg_.conflict_limit && conflicts_ >= *cfg_.conflict_limit)
                return {SolveResult::Unknown, {}};
            std::vector<int> learnt;
            int back_level = analyze(confl, learnt);
            backtrack(back_level);
            clauses_.push_back(learnt);
            if (learnt.size() > 1) attach((int)clauses_.size() - 1);
            enqueue(learnt[0], learnt.size() > 1 ? (int)clauses_.size() - 1 : -1);
            decay();
            if (--conflicts_until_restart <= 0) {
                ++restart_unit;
                conflicts_until_restart = cfg_.luby_base * luby(restart_unit);
                backtrack(0);
            }
            continue;
        }
        int v = pick_branch();
        if (v == -1) {
            auto model = extract_model();
            // the model must satisfy every original clause
            for (const auto& c : clauses_) {
                bool ok = false;
                for (int lit : c)
                    if (model[lit_var(lit)] == !(lit & 1)) {
                        ok = true;
                        break;
                    }
                if (!ok)
                    throw Error(ErrorKind::Decode, "internal: model fails self-check");
            }
            return {SolveResult::Sat, model};
        }
        trail_lim_.push_back((int)trail_.size());
        bool ph = cfg_.phase_saving ? phase[v] : false;
        enqueue(2 * v + (ph ? 0 : 1), -1);
        if (cfg_.phase_saving)
            for (int u = 0; u < nvars_; ++u)
                if (assign_[u] != -1) phase[u] = assign_[u] == 1;
    }
}

Solver::PropResult Solver::propagate_only() {
    PropResult res;
    if (unsat_root_) {
        res.conflict = true;
        return res;
    }
    for (size_t ci = 0; ci < clauses_.size(); ++ci) {
        if (clauses_[ci].size() != 1) continue;
        int lit = clauses_[ci][0];
        if (value_false(lit)) {
            res.conflict = true;
            return res;
        }
        if (!assigned(lit)) enqueue(lit, -1);
    }
    res.conflict = propagate() != -1;
    if (!res.conflict)
        for (int lit : trail_) res.fixed.push_back(to_dimacs(lit));
    return res;
}

Assignment decode(const std::vector<bool>& model, const VarMap& varmap, const Instance& inst) {
    Assignment out;
    auto lit_true = [&](const AtomKey& key) -> bool {
        int id = varmap.id_of(key);
        if (id == 0 || id > (int)model.size())
            throw Error(ErrorKind::Decode, "model misses atom " + key.render());
        return model[id - 1];
    };
    for (const auto& var : inst.vars) {
        if (var.is_boolean()) {
            out.bools[var.name] = lit_true({AtomKey::BoolVal, var.name});
            continue;
        }
        auto values = var.domain.values(); // ascending
        Int decoded = values.front();      // all Less true: smallest value
        for (auto it = values.rbegin(); it != values.rend(); ++it) {
            if (*it == values.front()) break; // no Less atom for the smallest
            if (!lit_true({AtomKey::Less, var.name, *it})) {
                decoded = *it;
                break;
            }
        }
        out.ints[var.name] = decoded;
    }
    return out;
}

std::vector<Assignment> enumerate_solutions(const CnfDocument& cnf, const VarMap& varmap,
                                            const Instance& inst, Int limit, SolverConfig cfg) {
    CnfDocument work = cnf;
    std::vector<Assignment> out;
    while (limit < 0 || (Int)out.size() < limit) {
        Solver solver(work, cfg);
        SolveResult res = solver.solve();
        if (res.status != SolveResult::Sat) break;
        Assignment a = decode(res.model, varmap, inst);
        out.push_back(a);
        // block this CSP solution (not just this propositional model)
        std::vector<int> blocking;
        for (const auto& var : inst.vars) {
            if (var.is_aux()) continue;
            if (var.is_boolean()) {
                int id = varmap.id_of({AtomKey::BoolVal, var.name});
                blocking.push_back(a.bools.at(var.name) ? -id : id);
            } else {
                int id = varmap.id_of({AtomKey::Eq, var.name, a.ints.at(var.name)});
                if (id != 0) blocking.push_back(-id);
            }
        }
        work.clauses.push_back(std::move(blocking));
    }
    // reported assignments hide auxiliary switch variables
    for (auto& a : out)
        for (auto it = a.bools.begin(); it != a.bools.end();)
            it = it->first.starts_with("_") ? a.bools.erase(it) : std::next(it);
    return out;
}

} // namespace csat
