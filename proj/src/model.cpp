#include "csat/model.hpp"

#include <algorithm>

namespace csat {

Domain Domain::boolean() {
    Domain d;
    d.boolean_ = true;
    return d;
}

Domain Domain::interval(Int lo, Int hi) {
    return from_intervals({{lo, hi}});
}

Domain Domain::from_intervals(std::vector<Interval> pieces) {
    if (pieces.empty())
        throw Error(ErrorKind::EmptyDomain, "integer domain must be non-empty");
    for (const auto& p : pieces)
        if (p.lo > p.hi)
            throw Error(ErrorKind::EmptyDomain, "interval with lo > hi");
    std::sort(pieces.begin(), pieces.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& p : pieces) {
        if (!merged.empty() && p.lo <= checked_add(merged.back().hi, 1))
            merged.back().hi = std::max(merged.back().hi, p.hi);
        else
            merged.push_back(p);
    }
    Domain d;
    d.intervals_ = std::move(merged);
    return d;
}

Domain Domain::from_values(std::vector<Int> values) {
    if (values.empty())
        throw Error(ErrorKind::EmptyDomain, "integer domain must be non-empty");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<Interval> pieces;
    for (Int v : values) {
        if (!pieces.empty() && v == pieces.back().hi + 1)
            pieces.back().hi = v;
        else
            pieces.push_back({v, v});
    }
    Domain d;
    d.intervals_ = std::move(pieces);
    return d;
}

const std::vector<Interval>& Domain::intervals() const {
    if (boolean_)
        throw Error(ErrorKind::KindMismatch, "Boolean domain has no intervals");
    return intervals_;
}

Int Domain::min() const { return intervals().front().lo; }
Int Domain::max() const { return intervals().back().hi; }

bool Domain::contains(Int v) const {
    for (const auto& p : intervals())
        if (p.lo <= v && v <= p.hi) return true;
    return false;
}

Int Domain::size() const {
    Int n = 0;
    for (const auto& p : intervals())
        n = checked_add(n, checked_add(checked_sub(p.hi, p.lo), 1));
    return n;
}

std::vector<Int> Domain::values() const {
    std::vector<Int> out;
    for (const auto& p : intervals())
        for (Int v = p.lo; v <= p.hi; ++v)
            out.push_back(v);
    return out;
}

LinearSum LinearSum::normalize(std::vector<Term> terms) {
    std::map<std::string, Int> merged;
    for (const auto& t : terms)
        merged[t.var] = checked_add(merged.count(t.var) ? merged[t.var] : 0, t.coeff);
    LinearSum s;
    for (const auto& [name, coeff] : merged)
        if (coeff != 0) s.terms_.push_back({coeff, name});
    if (s.terms_.empty())
        throw Error(ErrorKind::EmptySum, "all terms of the sum cancel");
    return s;
}

std::string cmp_op_name(CmpOp op) {
    switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    }
    return "?";
}

const Variable* Instance::find_var(const std::string& name) const {
    for (const auto& v : vars)
        if (v.name == name) return &v;
    return nullptr;
}

const Relation* Instance::find_rel(const std::string& id) const {
    for (const auto& r : relations)
        if (r.id == id) return &r;
    return nullptr;
}

const Domain& Instance::domain_of(const std::string& name) const {
    const Variable* v = find_var(name);
    if (!v)
        throw Error(ErrorKind::UndeclaredVariable, "unknown variable " + name);
    return v->domain;
}

std::string render_sum_term(const LinearSum& sum) {
    auto leaf = [](const Term& t) {
        return "op(mul," + std::to_string(t.coeff) + "," + t.var + ")";
    };
    std::string acc = leaf(sum.term(0));
    for (size_t i = 1; i < sum.size(); ++i)
        acc = "op(add," + acc + "," + leaf(sum.term(i)) + ")";
    return acc;
}

} // namespace csat
