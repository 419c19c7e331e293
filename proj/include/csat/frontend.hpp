#pragma once

#include <string>

#include "csat/model.hpp"

namespace csat {
namespace frontend {

/// Parses the native text format (one statement per line, '%' comments):
///
///   bool NAME
///   int NAME LO HI [LO HI ...]
///   rel NAME ARITY supports|conflicts
///   tuple NAME v1 ... vARITY
///   clause LIT ; LIT ; ...
///
/// LIT is `[-] NAME` (Boolean), `[-] sum(a1*x1 + a2*x2 + ...) OP m` with
/// OP in {<=,>=,<,>,=,!=}, `[-] alldifferent(x,y,z)`, or
/// `[-] table(REL, x, y)`. Variables must be declared before use;
/// identifiers match [a-z][a-zA-Z0-9_]* (the '_' prefix is reserved).
Instance parse_native(const std::string& src);

/// Rewrites every linear comparison to <=-form:
///   sum >= m        ->  -sum <= -m
///   sum <  m        ->   sum <= m-1
///   sum >  m        ->  -sum <= -m-1
///   sum != m        ->  two literals  sum <= m-1 , -sum <= -m-1
///   sum  = m  sole  ->  two clauses   sum <= m   , -sum <= -m
///   sum  = m  in a disjunction -> fresh Boolean s replaces the literal,
///                  clauses {~s, sum <= m} and {~s, -sum <= -m} are added
/// Negations are folded into the operator first, so the result carries only
/// positive <=-literals. Clause ids are reassigned c1..cN afterwards.
Instance normalize_comparisons(const Instance& inst);

/// Serializes a normalized instance as ground facts (one per line, LF):
/// var/1, var/3 with range(l,u) terms, constraint/2 with op/global/rel
/// function terms, rel/4 and tuple/4 for table relations. Relation ids are
/// canonicalized to r, r2, r3, ... and clause ids to c1, c2, ...
std::string emit_facts(const Instance& inst);

/// Inverse of emit_facts up to fact ordering. Accepts only op(le,...)
/// comparisons (optionally under op(neg,...)).
Instance parse_facts(const std::string& doc);

} // namespace frontend
} // namespace csat
