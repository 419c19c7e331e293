#pragma once

#include <string>
#include <vector>

#include "csat/model.hpp"

namespace csat {
namespace oracle {

struct ClauseReport {
    std::string clause_id;
    bool satisfied = false;
    std::vector<std::string> failed_literals; // detail, filled for failing clauses
};

struct CheckReport {
    bool overall = false;
    std::vector<ClauseReport> clauses;
};

/// Plain evaluation of a raw coefficient/variable list (no normalization).
Int eval_terms(std::span<const Term> terms, const Assignment& v);

/// Direct satisfaction test for a single literal (polarity applied last).
/// Handles all comparison operators, so pre-normalization instances can be
/// checked too. Alldifferent runs the index sweep with recurrence/gap
/// detection; tables advance per-tuple match prefixes.
bool eval_literal(const Instance& inst, const LiteralExpr& lit, const Assignment& v);

CheckReport check(const Instance& inst, const Assignment& v);

/// Exhaustive enumeration over the cartesian product of all domains,
/// filtered by check(). Order: variables by name, integer values ascending,
/// Boolean false before true. Guard: product of domain sizes <= 10^7.
std::vector<Assignment> enumerate_bruteforce(const Instance& inst, Int limit = -1);

} // namespace oracle
} // namespace csat
