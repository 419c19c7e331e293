#include "csat/analysis.hpp"

#include <algorithm>
#include <set>

namespace csat {
namespace analysis {

std::vector<Interval> scale_range(const Domain& d, Int a) {
    if (a == 0) throw Error(ErrorKind::KindMismatch, "zero coefficient");
    const auto& pieces = d.intervals();
    std::vector<Interval> out;
    if (a >= 0) {
        for (const auto& p : pieces)
            out.push_back({checked_mul(a, p.lo), checked_mul(a, p.hi)});
    } else {
        for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
            out.push_back({checked_mul(a, it->hi), checked_mul(a, it->lo)});
    }
    // merge pieces that became adjacent or overlapping (|a| = 1 keeps gaps)
    std::vector<Interval> merged;
    for (const auto& p : out) {
        if (!merged.empty() && p.lo <= checked_add(merged.back().hi, 1))
            merged.back().hi = std::max(merged.back().hi, p.hi);
        else
            merged.push_back(p);
    }
    return merged;
}

namespace {

struct LeafInfo {
    Int coeff;
    std::vector<Interval> range;   // range(a*x)
    std::vector<Int> products;     // ascending a*d for d in dom(x)
    Int low, upp;
};

std::vector<LeafInfo> leaf_infos(const LinearSum& s, const Instance& inst) {
    std::vector<LeafInfo> leaves;
    for (const auto& t : s.terms()) {
        const Domain& d = inst.domain_of(t.var);
        LeafInfo li;
        li.coeff = t.coeff;
        li.range = scale_range(d, t.coeff);
        for (Int v : d.values()) li.products.push_back(checked_mul(t.coeff, v));
        std::sort(li.products.begin(), li.products.end());
        li.low = li.range.front().lo;
        li.upp = li.range.back().hi;
        leaves.push_back(std::move(li));
    }
    return leaves;
}

} // namespace

std::vector<BoundsPair> prefix_bounds(const LinearSum& s, const Instance& inst) {
    auto leaves = leaf_infos(s, inst);
    std::vector<BoundsPair> out;
    Int low = 0, upp = 0;
    for (size_t i = 0; i < leaves.size(); ++i) {
        low = checked_add(i == 0 ? 0 : low, leaves[i].low);
        upp = checked_add(i == 0 ? 0 : upp, leaves[i].upp);
        out.push_back({low, upp});
    }
    return out;
}

std::vector<ThresholdPair> push_thresholds(const LinearSum& s, Int m, const Instance& inst) {
    auto leaves = leaf_infos(s, inst);
    auto bounds = prefix_bounds(s, inst);
    size_t n = leaves.size();
    std::vector<ThresholdPair> out(n);
    out[n - 1] = {std::max(m, bounds[n - 1].low), std::min(m, bounds[n - 1].upp)};
    for (size_t i = n - 1; i > 0; --i) {
        out[i - 1].blow =
            std::max(checked_sub(out[i].blow, leaves[i].upp), bounds[i - 1].low);
        out[i - 1].bupp =
            std::min(checked_sub(out[i].bupp, leaves[i].low), bounds[i - 1].upp);
    }
    return out;
}

LinearAnalysis analyze_linear(const LinearSum& s, Int m, const Instance& inst) {
    auto leaves = leaf_infos(s, inst);
    size_t n = leaves.size();
    LinearAnalysis res;
    res.prefixes.resize(n);

    auto lowupp = prefix_bounds(s, inst);
    for (size_t i = 0; i < n; ++i) {
        res.prefixes[i].low = lowupp[i].low;
        res.prefixes[i].upp = lowupp[i].upp;
    }
    res.total_ub = lowupp[n - 1].upp;

    auto thresholds = push_thresholds(s, m, inst);
    for (size_t i = 0; i < n; ++i) {
        res.prefixes[i].blow = thresholds[i].blow;
        res.prefixes[i].bupp = thresholds[i].bupp;
    }

    if (m >= lowupp[n - 1].upp) {
        res.trivial_true = true; // satisfied by the total upper bound alone
        return res;
    }
    if (m < lowupp[n - 1].low) {
        res.trivial_false = true;
        return res;
    }

    // relevant upper bounds per prefix, left to right
    std::vector<Int> prev = {0};
    for (size_t i = 0; i < n; ++i) {
        PrefixTables& pt = res.prefixes[i];
        std::set<Int> bounds;
        for (Int j : prev) {
            Int cap = checked_sub(pt.bupp, j);
            for (Int p : leaves[i].products) {
                if (p > cap) break;
                bounds.insert(std::max(checked_add(j, p), pt.blow));
            }
        }
        if (bounds.empty()) {
            res.trivial_false = true;
            return res;
        }
        pt.bounds.assign(bounds.begin(), bounds.end());
        prev = pt.bounds;
    }

    // maximal addend pairs and their erg values
    for (size_t i = 0; i < n; ++i) {
        PrefixTables& pt = res.prefixes[i];
        const std::vector<Int>& left = i == 0 ? std::vector<Int>{0} : res.prefixes[i - 1].bounds;
        std::set<std::pair<Int, Int>> pairs;
        for (Int j : left) {
            for (Int ub : pt.bounds) {
                Int cap = checked_sub(ub, j);
                if (cap < leaves[i].low) continue;
                // largest product <= cap
                auto it = std::upper_bound(leaves[i].products.begin(),
                                           leaves[i].products.end(), cap);
                if (it == leaves[i].products.begin()) continue;
                pairs.insert({j, *std::prev(it)});
            }
        }
        for (const auto& [e1, e2] : pairs) {
            Int sum = checked_add(e1, e2);
            auto it = std::lower_bound(pt.bounds.begin(), pt.bounds.end(), sum);
            // the generating ub dominates e1+e2, so an erg always exists
            pt.adds.push_back({e1, e2, *it});
        }
        std::sort(pt.adds.begin(), pt.adds.end());

        // admissible products of the rightmost addend (atom candidates):
        // everything up to bupp_i - min bound(P_{i-1})
        Int cap = checked_sub(pt.bupp, *std::min_element(left.begin(), left.end()));
        for (Int p : leaves[i].products) {
            if (p > cap) break;
            pt.leaf_products.push_back(p);
        }
    }
    return res;
}

namespace {

// cache key: coefficient/domain sequence plus the comparison bound
std::string analysis_key(const LinearSum& s, Int m, const Instance& inst) {
    std::string key = "m" + std::to_string(m);
    for (const auto& t : s.terms()) {
        key += "|" + std::to_string(t.coeff) + ":";
        for (const auto& p : inst.domain_of(t.var).intervals())
            key += "[" + std::to_string(p.lo) + "," + std::to_string(p.hi) + "]";
    }
    return key;
}

void mark_relevant(std::map<std::string, std::set<Int>>& rel, const std::string& var, Int value) {
    rel[var].insert(value);
}

} // namespace

LookupTables relevant_values(const Instance& inst) {
    LookupTables tables;
    std::map<std::string, std::set<Int>> rel;
    std::map<std::string, std::shared_ptr<const LinearAnalysis>> cache;

    for (size_t ci = 0; ci < inst.clauses.size(); ++ci) {
        const auto& clause = inst.clauses[ci];
        for (size_t li = 0; li < clause.literals.size(); ++li) {
            const auto& lit = clause.literals[li];
            LitRef ref{ci, li};
            if (const auto* cmp = std::get_if<LinearCmp>(&lit.node)) {
                if (cmp->op != CmpOp::Le)
                    throw Error(ErrorKind::NotNormalized,
                                "analysis requires <=-normalized comparisons");
                std::string key = analysis_key(cmp->sum, cmp->bound, inst);
                auto it = cache.find(key);
                if (it == cache.end()) {
                    it = cache
                             .emplace(key, std::make_shared<LinearAnalysis>(
                                               analyze_linear(cmp->sum, cmp->bound, inst)))
                             .first;
                }
                tables.linear[ref] = it->second;
                const LinearAnalysis& an = *it->second;
                if (!an.trivial_true && !an.trivial_false) {
                    // stage (i): values whose products appear in addend pairs
                    for (size_t i = 0; i < an.prefixes.size(); ++i) {
                        Int coeff = cmp->sum.term(i).coeff;
                        for (const auto& triple : an.prefixes[i].adds)
                            mark_relevant(rel, cmp->sum.term(i).var, triple.e2 / coeff);
                    }
                }
            } else if (const auto* ad = std::get_if<AllDifferent>(&lit.node)) {
                AllDiffTables t;
                std::set<Int> unioned;
                for (size_t i = 0; i < ad->args.size(); ++i) {
                    t.index[ad->args[i]] = (int)i + 1;
                    // stage (ii): release all domain values of the arguments
                    for (Int v : inst.domain_of(ad->args[i]).values()) {
                        mark_relevant(rel, ad->args[i], v);
                        unioned.insert(v);
                        t.lastindex[v] = (int)i + 1;
                    }
                }
                t.union_values.assign(unioned.begin(), unioned.end());
                t.difall = t.union_values.size() == ad->args.size();
                tables.alldiff[ref] = std::move(t);
            } else if (const auto* tr = std::get_if<TableRef>(&lit.node)) {
                const Relation* relation = inst.find_rel(tr->rel);
                if (!relation)
                    throw Error(ErrorKind::UndeclaredVariable,
                                "dangling relation reference " + tr->rel);
                TableTables t;
                for (size_t i = 0; i < tr->args.size(); ++i) {
                    t.index[tr->args[i]] = (int)i + 1;
                    const Domain& dom = inst.domain_of(tr->args[i]);
                    if (relation->kind == RelKind::Supports) {
                        // stage (iii): white list values within the domain
                        for (const auto& tuple : relation->tuples)
                            if (dom.contains(tuple[i]))
                                mark_relevant(rel, tr->args[i], tuple[i]);
                    } else {
                        // black list: any domain value can dodge a tuple
                        for (Int v : dom.values()) mark_relevant(rel, tr->args[i], v);
                    }
                }
                tables.table[ref] = std::move(t);
            }
        }
    }

    for (const auto& v : inst.vars) {
        if (v.is_boolean()) continue;
        auto values = v.domain.values();
        tables.order_values[v.name].assign(values.rbegin(), values.rend());
        auto it = rel.find(v.name);
        if (it == rel.end() || it->second.empty()) {
            // untouched by any integer constraint: keep the domain minimum
            tables.relevant[v.name] = {v.domain.min()};
        } else {
            tables.relevant[v.name].assign(it->second.rbegin(), it->second.rend());
        }
    }
    return tables;
}

void dump_analysis(const Instance& inst, const LookupTables& tables, std::ostream& out) {
    for (const auto& [var, values] : tables.relevant) {
        out << "var(" << var << ").\n";
        for (Int v : values) out << "look(" << var << "," << v << ").\n";
        for (size_t i = 0; i + 1 < values.size(); ++i)
            out << "order(" << var << "," << values[i] << "," << values[i + 1] << ").\n";
    }
    for (size_t ci = 0; ci < inst.clauses.size(); ++ci) {
        const auto& clause = inst.clauses[ci];
        for (size_t li = 0; li < clause.literals.size(); ++li) {
            LitRef ref{ci, li};
            auto lin = tables.linear.find(ref);
            if (lin != tables.linear.end()) {
                const auto& cmp = std::get<LinearCmp>(clause.literals[li].node);
                const LinearAnalysis& an = *lin->second;
                std::string sum_term = render_sum_term(cmp.sum);
                out << "upper(" << sum_term << "," << an.total_ub << ").\n";
                if (an.trivial_true || an.trivial_false) continue;
                for (size_t i = 0; i < an.prefixes.size(); ++i) {
                    const Term& t = cmp.sum.term(i);
                    std::set<Int> values;
                    for (const auto& triple : an.prefixes[i].adds)
                        values.insert(triple.e2 / t.coeff);
                    for (auto it = values.rbegin(); it != values.rend(); ++it)
                        out << "look(op(mul," << t.coeff << "," << t.var << ")," << *it << ","
                            << (t.coeff > 0 ? 1 : -1) << ").\n";
                }
                for (size_t i = 1; i < an.prefixes.size(); ++i) {
                    std::vector<Term> prefix_terms(cmp.sum.terms().begin(),
                                                   cmp.sum.terms().begin() + i + 1);
                    std::string prefix_term = render_sum_term(LinearSum::normalize(prefix_terms));
                    for (const auto& triple : an.prefixes[i].adds)
                        out << "look(" << prefix_term << "," << triple.e1 << "," << triple.e2
                            << "," << triple.erg << ").\n";
                    const auto& bounds = an.prefixes[i].bounds;
                    for (size_t k = bounds.size(); k-- > 1;)
                        out << "order(" << prefix_term << "," << bounds[k] << ","
                            << bounds[k - 1] << ").\n";
                }
            }
            auto ad = tables.alldiff.find(ref);
            if (ad != tables.alldiff.end()) {
                const auto& info = ad->second;
                const auto& args = std::get<AllDifferent>(clause.literals[li].node).args;
                for (size_t i = 0; i < args.size(); ++i)
                    out << "index(" << clause.id << "," << li + 1 << "," << args[i] << ","
                        << i + 1 << ").\n";
                for (const auto& [value, last] : info.lastindex)
                    out << "lastindex(" << clause.id << "," << li + 1 << "," << value << ","
                        << last << ").\n";
                if (info.difall) out << "difall(" << clause.id << "," << li + 1 << ").\n";
            }
            auto tb = tables.table.find(ref);
            if (tb != tables.table.end()) {
                const auto& args = std::get<TableRef>(clause.literals[li].node).args;
                for (size_t i = 0; i < args.size(); ++i)
                    out << "index(" << clause.id << "," << li + 1 << "," << args[i] << ","
                        << i + 1 << ").\n";
            }
        }
    }
}

} // namespace analysis
} // namespace csat
