#pragma once

#include <map>
#include <string>
#include <vector>

#include "csat/types.hpp"

namespace csat {

/// Propositional CNF with DIMACS-style literals (variable ids 1..num_vars,
/// negative means negated). Clauses keep insertion order; annotations map
/// variable ids to their semantic atom names and travel as `c map` comments.
struct CnfDocument {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    std::map<int, std::string> annotations;

    int add_var() { return ++num_vars; }

    /// Adds a clause after dropping duplicate literals; tautologies are not
    /// emitted. Returns false for a skipped tautology.
    bool add_clause(std::vector<int> lits);

    void validate() const;

    friend bool operator==(const CnfDocument&, const CnfDocument&) = default;
};

std::string write_dimacs(const CnfDocument& cnf);
CnfDocument parse_dimacs(const std::string& text);

} // namespace csat
