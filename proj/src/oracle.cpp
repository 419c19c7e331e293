#include "csat/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace csat {
namespace oracle {

namespace {

Int value_of(const Assignment& v, const std::string& name) {
    auto it = v.ints.find(name);
    if (it == v.ints.end())
        throw Error(ErrorKind::Decode, "assignment misses integer variable " + name);
    return it->second;
}

bool bool_of(const Assignment& v, const std::string& name) {
    auto it = v.bools.find(name);
    if (it == v.bools.end())
        throw Error(ErrorKind::Decode, "assignment misses Boolean variable " + name);
    return it->second;
}

bool eval_cmp(const LinearCmp& c, const Assignment& v) {
    Int s = eval_terms(c.sum.terms(), v);
    switch (c.op) {
    case CmpOp::Le: return s <= c.bound;
    case CmpOp::Ge: return s >= c.bound;
    case CmpOp::Eq: return s == c.bound;
    case CmpOp::Ne: return s != c.bound;
    case CmpOp::Lt: return s < c.bound;
    case CmpOp::Gt: return s > c.bound;
    }
    return false;
}

// Sweep the argument indexes 1..n keeping the set of seen values; a
// recurrence means failure. When all union values must be assigned
// (|union| == n), a value whose last possible index has passed unseen is a
// gap and also fails.
bool eval_alldifferent(const Instance& inst, const AllDifferent& ad, const Assignment& v) {
    std::set<Int> union_values;
    std::map<Int, size_t> lastindex; // value -> 1-based final feasible position
    for (size_t i = 0; i < ad.args.size(); ++i)
        for (Int d : inst.domain_of(ad.args[i]).values()) {
            union_values.insert(d);
            lastindex[d] = i + 1;
        }
    bool difall = union_values.size() == ad.args.size();

    std::set<Int> seen;
    for (size_t i = 0; i < ad.args.size(); ++i) {
        Int d = value_of(v, ad.args[i]);
        if (seen.count(d)) return false;
        seen.insert(d);
        if (difall)
            for (const auto& [val, last] : lastindex)
                if (last == i + 1 && !seen.count(val)) return false;
    }
    return true;
}

bool eval_table(const Instance& inst, const TableRef& t, const Assignment& v) {
    const Relation* rel = inst.find_rel(t.rel);
    if (!rel)
        throw Error(ErrorKind::UndeclaredVariable, "unknown relation " + t.rel);
    if ((int)t.args.size() != rel->arity)
        throw Error(ErrorKind::ArityMismatch, "table arity mismatch for " + t.rel);
    bool any_complete = false;
    for (const auto& tuple : rel->tuples) {
        size_t matched = 0;
        while (matched < t.args.size() && value_of(v, t.args[matched]) == tuple[matched])
            ++matched;
        if (matched == t.args.size()) any_complete = true;
    }
    return rel->kind == RelKind::Supports ? any_complete : !any_complete;
}

} // namespace

Int eval_terms(std::span<const Term> terms, const Assignment& v) {
    Int s = 0;
    for (const auto& t : terms)
        s = checked_add(s, checked_mul(t.coeff, value_of(v, t.var)));
    return s;
}

bool eval_literal(const Instance& inst, const LiteralExpr& lit, const Assignment& v) {
    bool value = false;
    if (const auto* b = std::get_if<BoolRef>(&lit.node))
        value = bool_of(v, b->name);
    else if (const auto* c = std::get_if<LinearCmp>(&lit.node))
        value = eval_cmp(*c, v);
    else if (const auto* a = std::get_if<AllDifferent>(&lit.node))
        value = eval_alldifferent(inst, *a, v);
    else if (const auto* t = std::get_if<TableRef>(&lit.node))
        value = eval_table(inst, *t, v);
    return lit.negated ? !value : value;
}

CheckReport check(const Instance& inst, const Assignment& v) {
    for (const auto& var : inst.vars) {
        if (var.is_boolean()) {
            if (!v.bools.count(var.name))
                throw Error(ErrorKind::Decode, "partial assignment: missing " + var.name);
        } else {
            auto it = v.ints.find(var.name);
            if (it == v.ints.end())
                throw Error(ErrorKind::Decode, "partial assignment: missing " + var.name);
            if (!var.domain.contains(it->second))
                throw Error(ErrorKind::Decode, "value of " + var.name + " outside its domain");
        }
    }
    CheckReport report;
    report.overall = true;
    for (size_t ci = 0; ci < inst.clauses.size(); ++ci) {
        const auto& clause = inst.clauses[ci];
        ClauseReport cr;
        cr.clause_id = clause.id;
        for (size_t li = 0; li < clause.literals.size(); ++li) {
            if (eval_literal(inst, clause.literals[li], v)) {
                cr.satisfied = true;
                break;
            }
        }
        if (!cr.satisfied) {
            report.overall = false;
            for (size_t li = 0; li < clause.literals.size(); ++li)
                cr.failed_literals.push_back("literal " + std::to_string(li + 1) + " false");
        }
        report.clauses.push_back(std::move(cr));
    }
    return report;
}

std::vector<Assignment> enumerate_bruteforce(const Instance& inst, Int limit) {
    std::vector<const Variable*> vars;
    for (const auto& v : inst.vars) vars.push_back(&v);
    std::sort(vars.begin(), vars.end(),
              [](const Variable* a, const Variable* b) { return a->name < b->name; });

    Int space = 1;
    for (const auto* v : vars) {
        Int sz = v->is_boolean() ? 2 : v->domain.size();
        space = checked_mul(space, sz);
        if (space > 10'000'000)
            throw Error(ErrorKind::Guard, "search space exceeds brute-force guard");
    }

    std::vector<Assignment> out;
    Assignment current;
    auto recurse = [&](auto&& self, size_t i) -> bool {
        if (limit >= 0 && (Int)out.size() >= limit) return false;
        if (i == vars.size()) {
            if (check(inst, current).overall) out.push_back(current);
            return limit < 0 || (Int)out.size() < limit;
        }
        const Variable* v = vars[i];
        if (v->is_boolean()) {
            for (bool b : {false, true}) {
                current.bools[v->name] = b;
                if (!self(self, i + 1)) return false;
            }
            current.bools.erase(v->name);
        } else {
            for (Int d : v->domain.values()) {
                current.ints[v->name] = d;
                if (!self(self, i + 1)) return false;
            }
            current.ints.erase(v->name);
        }
        return true;
    };
    recurse(recurse, 0);
    return out;
}

} // namespace oracle
} // namespace csat
