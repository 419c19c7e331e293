#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "csat/model.hpp"

namespace csat {
namespace analysis {

/// Multiplies an integer domain by a nonzero constant. For a < 0 the
/// interval list is reversed so the result is again sorted and disjoint;
/// adjacent pieces are merged.
std::vector<Interval> scale_range(const Domain& d, Int a);

struct BoundsPair {
    Int low;
    Int upp;
    friend bool operator==(const BoundsPair&, const BoundsPair&) = default;
};

struct ThresholdPair {
    Int blow;
    Int bupp;
    friend bool operator==(const ThresholdPair&, const ThresholdPair&) = default;
};

struct AddTriple {
    Int e1;   // upper bound of the left prefix
    Int e2;   // product contributed by the rightmost addend
    Int erg;  // smallest relevant upper bound dominating e1+e2
    friend bool operator==(const AddTriple&, const AddTriple&) = default;
    friend auto operator<=>(const AddTriple&, const AddTriple&) = default;
};

/// Per-prefix results of the static threshold analysis, prefix i covering
/// the first i+1 addends of the normalized sum.
struct PrefixTables {
    Int low = 0, upp = 0;
    Int blow = 0, bupp = 0;
    std::vector<Int> bounds;         // relevant upper bounds, ascending
    std::vector<AddTriple> adds;     // maximal addend pairs with their erg
    std::vector<Int> leaf_products;  // admissible products of the rightmost
                                     // addend, ascending (atom candidates)
};

struct LinearAnalysis {
    bool trivial_true = false;   // m >= upp(full sum): holds everywhere
    bool trivial_false = false;  // empty bound set: cannot hold
    Int total_ub = 0;            // upp of the full sum (trivial comparisons)
    std::vector<PrefixTables> prefixes;
};

/// low/upp per prefix (componentwise interval sums).
std::vector<BoundsPair> prefix_bounds(const LinearSum& s, const Instance& inst);

/// blow/bupp per prefix: the comparison bound m pushed right-to-left.
std::vector<ThresholdPair> push_thresholds(const LinearSum& s, Int m, const Instance& inst);

/// Full analysis of one <=-comparison. Results depend only on the
/// coefficient/domain sequence and m; callers sharing that shape receive the
/// same object (see relevant_values).
LinearAnalysis analyze_linear(const LinearSum& s, Int m, const Instance& inst);

/// Identifies a literal inside an instance.
struct LitRef {
    size_t clause = 0;
    size_t literal = 0;
    friend auto operator<=>(const LitRef&, const LitRef&) = default;
};

struct AllDiffTables {
    std::map<std::string, int> index;  // argument variable -> 1-based position
    std::map<Int, int> lastindex;      // value -> final position it can take
    std::vector<Int> union_values;     // ascending union of argument domains
    bool difall = false;               // |union| == #args: every value needed
};

struct TableTables {
    std::map<std::string, int> index;  // argument variable -> 1-based position
};

struct LookupTables {
    /// Three-stage relevant values per variable, descending:
    /// (i) inequality addend products, (ii) alldifferent release,
    /// (iii) table white/black list values. Variables in no constraint keep
    /// their domain minimum.
    std::map<std::string, std::vector<Int>> relevant;
    /// Descending full-domain value lists driving the order encoding and
    /// decoding (every solution must stay decodable).
    std::map<std::string, std::vector<Int>> order_values;

    std::map<LitRef, std::shared_ptr<const LinearAnalysis>> linear;
    std::map<LitRef, AllDiffTables> alldiff;
    std::map<LitRef, TableTables> table;
};

/// Runs the whole static analysis over a normalized instance.
LookupTables relevant_values(const Instance& inst);

/// Prints the derived tables as ground facts (look/order/index/lastindex/
/// difall style) for golden-file tests.
void dump_analysis(const Instance& inst, const LookupTables& tables, std::ostream& out);

} // namespace analysis
} // namespace csat
