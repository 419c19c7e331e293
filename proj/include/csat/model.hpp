#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "csat/types.hpp"

namespace csat {

struct Interval {
    Int lo;
    Int hi;
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite variable domain: either the Boolean domain or a non-empty union of
/// disjoint, gap-separated integer intervals in ascending order.
class Domain {
public:
    static Domain boolean();
    static Domain interval(Int lo, Int hi);
    /// Builds an integer domain from arbitrary intervals: sorts, merges
    /// overlapping/adjacent pieces, rejects empty input or lo > hi.
    static Domain from_intervals(std::vector<Interval> pieces);
    static Domain from_values(std::vector<Int> values);

    bool is_boolean() const { return boolean_; }
    const std::vector<Interval>& intervals() const;
    Int min() const;
    Int max() const;
    bool contains(Int v) const;
    Int size() const;
    /// Exact ascending enumeration of the domain. KindMismatch on Booleans.
    std::vector<Int> values() const;

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    Domain() = default;
    bool boolean_ = false;
    std::vector<Interval> intervals_;
};

inline std::vector<Int> domain_values(const Domain& d) { return d.values(); }

struct Variable {
    std::string name;
    Domain domain;
    bool is_boolean() const { return domain.is_boolean(); }
    /// Names starting with '_' are reserved for normalization-introduced
    /// switch variables; they are hidden from reported solutions.
    bool is_aux() const { return !name.empty() && name[0] == '_'; }
};

struct Term {
    Int coeff;
    std::string var;
    friend bool operator==(const Term&, const Term&) = default;
};

/// A normalized linear sum: one term per variable, nonzero coefficients,
/// ordered ascending by variable name. This is the flat form of the
/// left-nested addition tree (((a1*x1)+(a2*x2))+...); prefix i corresponds to
/// the subtree over the first i terms.
class LinearSum {
public:
    /// Merges duplicate variables, drops cancelled terms, sorts by name.
    /// Throws EmptySum when everything cancels.
    static LinearSum normalize(std::vector<Term> terms);

    std::span<const Term> terms() const { return terms_; }
    size_t size() const { return terms_.size(); }
    const Term& term(size_t i) const { return terms_[i]; }

    friend bool operator==(const LinearSum&, const LinearSum&) = default;

private:
    std::vector<Term> terms_;
};

enum class CmpOp { Le, Ge, Eq, Ne, Lt, Gt };

std::string cmp_op_name(CmpOp op);

struct BoolRef {
    std::string name;
    friend bool operator==(const BoolRef&, const BoolRef&) = default;
};

struct LinearCmp {
    LinearSum sum;
    CmpOp op;
    Int bound;
    friend bool operator==(const LinearCmp&, const LinearCmp&) = default;
};

struct AllDifferent {
    std::vector<std::string> args;
    friend bool operator==(const AllDifferent&, const AllDifferent&) = default;
};

struct TableRef {
    std::string rel;
    std::vector<std::string> args;
    friend bool operator==(const TableRef&, const TableRef&) = default;
};

struct LiteralExpr {
    bool negated = false;
    std::variant<BoolRef, LinearCmp, AllDifferent, TableRef> node;
    friend bool operator==(const LiteralExpr&, const LiteralExpr&) = default;
};

struct ConstraintClause {
    std::string id;
    std::vector<LiteralExpr> literals; // non-empty, input order preserved
};

enum class RelKind { Supports, Conflicts };

struct Relation {
    std::string id;
    int arity = 0;
    RelKind kind = RelKind::Supports;
    std::vector<std::vector<Int>> tuples; // each of length arity
};

struct Instance {
    std::vector<Variable> vars;          // declaration order
    std::vector<ConstraintClause> clauses;
    std::vector<Relation> relations;     // declaration order

    const Variable* find_var(const std::string& name) const;
    const Relation* find_rel(const std::string& id) const;
    const Domain& domain_of(const std::string& name) const;
};

/// Total assignment: integer values for integer variables, truth values for
/// Booleans.
struct Assignment {
    std::map<std::string, Int> ints;
    std::map<std::string, bool> bools;

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend bool operator<(const Assignment& a, const Assignment& b) {
        if (a.ints != b.ints) return a.ints < b.ints;
        return a.bools < b.bools;
    }
};

inline LinearSum normalize_sum(std::vector<Term> terms) {
    return LinearSum::normalize(std::move(terms));
}

/// Renders a sum in the nested function-term notation used by the fact
/// format, e.g. op(add,op(add,op(mul,4,x),op(mul,-3,y)),op(mul,1,z)).
std::string render_sum_term(const LinearSum& sum);

} // namespace csat
