#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "csat/frontend.hpp"

namespace csat {
namespace frontend {

namespace {

std::string render_args(const std::vector<std::string>& args) {
    std::string s = "nil";
    for (auto it = args.rbegin(); it != args.rend(); ++it)
        s = "arg(" + *it + "," + s + ")";
    return s;
}

// ---- fact term parser ------------------------------------------------

struct FactTerm {
    std::string functor; // empty for plain integers
    bool is_int = false;
    Int value = 0;
    std::vector<FactTerm> args;

    bool is_atom() const { return !is_int && args.empty(); }
};

class FactParser {
public:
    explicit FactParser(const std::string& text) : text_(text) {}

    // returns false at end of input
    bool next_fact(std::string& pred, std::vector<FactTerm>& args) {
        skip_ws();
        if (pos_ >= text_.size()) return false;
        FactTerm t = parse_term();
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '.')
            fail("expected '.' after fact");
        ++pos_;
        if (t.is_int || t.functor.empty())
            fail("fact must be a predicate");
        pred = t.functor;
        args = std::move(t.args);
        return true;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        size_t line = 1;
        for (size_t i = 0; i < pos_ && i < text_.size(); ++i)
            if (text_[i] == '\n') ++line;
        throw Error(ErrorKind::Parse, "facts, line " + std::to_string(line) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            if (std::isspace((unsigned char)text_[pos_])) {
                ++pos_;
            } else if (text_[pos_] == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    FactTerm parse_term() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '-' || std::isdigit((unsigned char)c)) {
            size_t start = pos_;
            ++pos_;
            while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
            FactTerm t;
            t.is_int = true;
            try {
                t.value = std::stoll(text_.substr(start, pos_ - start));
            } catch (const std::exception&) {
                fail("integer out of range");
            }
            return t;
        }
        if (!std::isalpha((unsigned char)c) && c != '_') fail("expected term");
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            ++pos_;
        FactTerm t;
        t.functor = text_.substr(start, pos_ - start);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            while (true) {
                t.args.push_back(parse_term());
                skip_ws();
                if (pos_ >= text_.size()) fail("unterminated argument list");
                if (text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                if (text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ')'");
            }
        }
        return t;
    }

    const std::string& text_;
    size_t pos_ = 0;
};

std::vector<std::string> parse_arg_list(const FactTerm& t) {
    std::vector<std::string> out;
    const FactTerm* cur = &t;
    while (true) {
        if (cur->is_atom() && cur->functor == "nil") return out;
        if (cur->functor != "arg" || cur->args.size() != 2)
            throw Error(ErrorKind::Parse, "malformed argument list");
        if (!cur->args[0].is_atom())
            throw Error(ErrorKind::Parse, "argument list entries must be variable names");
        out.push_back(cur->args[0].functor);
        cur = &cur->args[1];
    }
}

// flattens op(add,...)/op(mul,...) nesting into coefficient/variable terms
void parse_sum_term(const FactTerm& t, std::vector<Term>& out) {
    if (t.functor != "op" || t.args.empty())
        throw Error(ErrorKind::Parse, "expected op(add,...) or op(mul,...) term");
    const std::string& kind = t.args[0].functor;
    if (kind == "mul") {
        if (t.args.size() != 3 || !t.args[1].is_int || !t.args[2].is_atom())
            throw Error(ErrorKind::Parse, "malformed op(mul,A,X) term");
        out.push_back({t.args[1].value, t.args[2].functor});
        return;
    }
    if (kind == "add") {
        if (t.args.size() != 3)
            throw Error(ErrorKind::Parse, "malformed op(add,S,T) term");
        parse_sum_term(t.args[1], out);
        parse_sum_term(t.args[2], out);
        return;
    }
    throw Error(ErrorKind::Parse, "unknown sum operator '" + kind + "'");
}

LiteralExpr parse_literal_term(const FactTerm& t, bool negated) {
    LiteralExpr lit;
    lit.negated = negated;
    if (t.is_atom()) {
        lit.node = BoolRef{t.functor};
        return lit;
    }
    if (t.functor == "op") {
        if (t.args.empty()) throw Error(ErrorKind::Parse, "malformed op term");
        const std::string& kind = t.args[0].functor;
        if (kind == "neg") {
            if (negated)
                throw Error(ErrorKind::Parse, "doubly negated literal");
            if (t.args.size() != 2) throw Error(ErrorKind::Parse, "malformed op(neg,E)");
            return parse_literal_term(t.args[1], true);
        }
        if (kind == "le") {
            if (t.args.size() != 3 || !t.args[2].is_int)
                throw Error(ErrorKind::Parse, "malformed op(le,S,M)");
            std::vector<Term> terms;
            parse_sum_term(t.args[1], terms);
            lit.node = LinearCmp{LinearSum::normalize(std::move(terms)), CmpOp::Le,
                                 t.args[2].value};
            return lit;
        }
        throw Error(ErrorKind::Parse, "unsupported comparison '" + kind + "' in facts");
    }
    if (t.functor == "global") {
        if (t.args.size() != 2 || !t.args[0].is_atom() || t.args[0].functor != "alldifferent")
            throw Error(ErrorKind::Parse, "unsupported global constraint");
        lit.node = AllDifferent{parse_arg_list(t.args[1])};
        return lit;
    }
    if (t.functor == "rel") {
        if (t.args.size() != 2 || !t.args[0].is_atom())
            throw Error(ErrorKind::Parse, "malformed rel(R,Args) term");
        lit.node = TableRef{t.args[0].functor, parse_arg_list(t.args[1])};
        return lit;
    }
    throw Error(ErrorKind::Parse, "unknown literal functor '" + t.functor + "'");
}

} // namespace

std::string emit_facts(const Instance& inst) {
    // pre-condition: <=-only, positive comparison literals
    for (const auto& c : inst.clauses)
        for (const auto& lit : c.literals)
            if (const auto* cmp = std::get_if<LinearCmp>(&lit.node))
                if (cmp->op != CmpOp::Le || lit.negated)
                    throw Error(ErrorKind::NotNormalized,
                                "emit_facts requires a normalized (<=-only) instance");

    std::ostringstream out;
    for (const auto& v : inst.vars) {
        if (v.is_boolean()) {
            out << "var(" << v.name << ").\n";
        } else {
            int k = 0;
            for (const auto& piece : v.domain.intervals())
                out << "var(" << v.name << "," << k++ << ",range(" << piece.lo << ","
                    << piece.hi << ")).\n";
        }
    }

    // canonical relation ids: r, r2, r3, ... in declaration order
    std::map<std::string, std::string> rel_name;
    for (size_t i = 0; i < inst.relations.size(); ++i)
        rel_name[inst.relations[i].id] =
            i == 0 ? "r" : "r" + std::to_string(i + 1);

    for (size_t ci = 0; ci < inst.clauses.size(); ++ci) {
        const auto& clause = inst.clauses[ci];
        std::string cid = "c" + std::to_string(ci + 1);
        for (const auto& lit : clause.literals) {
            std::string term;
            if (const auto* b = std::get_if<BoolRef>(&lit.node)) {
                term = b->name;
            } else if (const auto* cmp = std::get_if<LinearCmp>(&lit.node)) {
                term = "op(le," + render_sum_term(cmp->sum) + "," +
                       std::to_string(cmp->bound) + ")";
            } else if (const auto* ad = std::get_if<AllDifferent>(&lit.node)) {
                term = "global(alldifferent," + render_args(ad->args) + ")";
            } else if (const auto* tr = std::get_if<TableRef>(&lit.node)) {
                term = "rel(" + rel_name.at(tr->rel) + "," + render_args(tr->args) + ")";
            }
            if (lit.negated) term = "op(neg," + term + ")";
            out << "constraint(" << cid << "," << term << ").\n";
        }
    }

    for (const auto& rel : inst.relations) {
        const std::string& rid = rel_name.at(rel.id);
        out << "rel(" << rid << "," << rel.arity << "," << rel.tuples.size() << ","
            << (rel.kind == RelKind::Supports ? "supports" : "conflicts") << ").\n";
        for (size_t t = 0; t < rel.tuples.size(); ++t)
            for (int i = 0; i < rel.arity; ++i)
                out << "tuple(" << rid << "," << t + 1 << "," << i + 1 << ","
                    << rel.tuples[t][i] << ").\n";
    }
    return out.str();
}

Instance parse_facts(const std::string& doc) {
    FactParser parser(doc);
    std::string pred;
    std::vector<FactTerm> args;

    struct RelDecl {
        int arity;
        Int count;
        RelKind kind;
        std::map<std::pair<Int, Int>, Int> cells; // (tuple,arg) -> value
    };
    std::map<std::string, std::vector<std::pair<Int, Interval>>> int_vars; // piece idx order
    std::vector<std::string> var_order;
    std::map<std::string, bool> is_bool;
    std::map<std::string, RelDecl> rels;
    std::vector<std::string> rel_order;
    std::vector<std::pair<std::string, LiteralExpr>> raw_literals; // (clause id, literal)

    while (parser.next_fact(pred, args)) {
        if (pred == "var" && args.size() == 1) {
            if (!args[0].is_atom()) throw Error(ErrorKind::Parse, "malformed var/1 fact");
            const std::string& name = args[0].functor;
            if (!is_bool.count(name)) {
                var_order.push_back(name);
                is_bool[name] = true;
            } else if (!is_bool[name]) {
                throw Error(ErrorKind::Parse, "variable " + name + " declared twice");
            }
        } else if (pred == "var" && args.size() == 3) {
            if (!args[0].is_atom() || !args[1].is_int || args[2].functor != "range" ||
                args[2].args.size() != 2 || !args[2].args[0].is_int || !args[2].args[1].is_int)
                throw Error(ErrorKind::Parse, "malformed var/3 fact");
            const std::string& name = args[0].functor;
            if (!is_bool.count(name)) {
                var_order.push_back(name);
                is_bool[name] = false;
            } else if (is_bool[name]) {
                throw Error(ErrorKind::Parse, "variable " + name + " declared twice");
            }
            int_vars[name].push_back(
                {args[1].value, {args[2].args[0].value, args[2].args[1].value}});
        } else if (pred == "constraint" && args.size() == 2) {
            if (!args[0].is_atom()) throw Error(ErrorKind::Parse, "malformed constraint id");
            raw_literals.push_back({args[0].functor, parse_literal_term(args[1], false)});
        } else if (pred == "rel" && args.size() == 4) {
            if (!args[0].is_atom() || !args[1].is_int || !args[2].is_int || !args[3].is_atom())
                throw Error(ErrorKind::Parse, "malformed rel/4 fact");
            RelDecl decl;
            decl.arity = (int)args[1].value;
            decl.count = args[2].value;
            if (args[3].functor == "supports") decl.kind = RelKind::Supports;
            else if (args[3].functor == "conflicts") decl.kind = RelKind::Conflicts;
            else throw Error(ErrorKind::Parse, "rel/4 kind must be supports or conflicts");
            if (rels.count(args[0].functor))
                throw Error(ErrorKind::Parse, "relation " + args[0].functor + " declared twice");
            rel_order.push_back(args[0].functor);
            rels[args[0].functor] = std::move(decl);
        } else if (pred == "tuple" && args.size() == 4) {
            if (!args[0].is_atom() || !args[1].is_int || !args[2].is_int || !args[3].is_int)
                throw Error(ErrorKind::Parse, "malformed tuple/4 fact");
            auto it = rels.find(args[0].functor);
            if (it == rels.end())
                throw Error(ErrorKind::Parse, "tuple for undeclared relation " + args[0].functor);
            Int t = args[1].value, i = args[2].value;
            if (t < 1 || t > it->second.count)
                throw Error(ErrorKind::Parse, "tuple id out of range for " + args[0].functor);
            if (i < 1 || i > it->second.arity)
                throw Error(ErrorKind::ArityMismatch,
                            "tuple argument index out of range for " + args[0].functor);
            if (!it->second.cells.emplace(std::make_pair(t, i), args[3].value).second)
                throw Error(ErrorKind::Parse, "duplicate tuple cell for " + args[0].functor);
        } else {
            throw Error(ErrorKind::Parse, "unknown fact " + pred + "/" +
                                              std::to_string(args.size()));
        }
    }

    Instance inst;
    for (const auto& name : var_order) {
        if (is_bool[name]) {
            inst.vars.push_back({name, Domain::boolean()});
        } else {
            auto pieces = int_vars[name];
            std::sort(pieces.begin(), pieces.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (size_t k = 0; k < pieces.size(); ++k)
                if (pieces[k].first != (Int)k)
                    throw Error(ErrorKind::Parse,
                                "var/3 piece indexes for " + name + " are not 0..n-1");
            std::vector<Interval> ivs;
            for (const auto& p : pieces) ivs.push_back(p.second);
            inst.vars.push_back({name, Domain::from_intervals(std::move(ivs))});
        }
    }

    for (const auto& rid : rel_order) {
        const RelDecl& decl = rels[rid];
        if ((Int)decl.cells.size() != decl.count * decl.arity)
            throw Error(ErrorKind::ArityMismatch,
                        "relation " + rid + " expects " +
                            std::to_string(decl.count * decl.arity) + " tuple cells, got " +
                            std::to_string(decl.cells.size()));
        Relation rel;
        rel.id = rid;
        rel.arity = decl.arity;
        rel.kind = decl.kind;
        for (Int t = 1; t <= decl.count; ++t) {
            std::vector<Int> tuple;
            for (int i = 1; i <= decl.arity; ++i)
                tuple.push_back(decl.cells.at({t, i}));
            rel.tuples.push_back(std::move(tuple));
        }
        inst.relations.push_back(std::move(rel));
    }

    // group literals by clause id, first-occurrence order
    std::map<std::string, size_t> clause_index;
    for (auto& [cid, lit] : raw_literals) {
        if (!clause_index.count(cid)) {
            clause_index[cid] = inst.clauses.size();
            inst.clauses.push_back({cid, {}});
        }
        inst.clauses[clause_index[cid]].literals.push_back(std::move(lit));
    }

    // validate references
    auto check_int_var = [&](const std::string& name) {
        const Variable* v = inst.find_var(name);
        if (!v)
            throw Error(ErrorKind::UndeclaredVariable, "undeclared variable " + name);
        if (v->is_boolean())
            throw Error(ErrorKind::KindMismatch, name + " is Boolean, expected Integer");
    };
    for (const auto& clause : inst.clauses) {
        for (const auto& lit : clause.literals) {
            if (const auto* b = std::get_if<BoolRef>(&lit.node)) {
                const Variable* v = inst.find_var(b->name);
                if (!v)
                    throw Error(ErrorKind::UndeclaredVariable,
                                "undeclared variable " + b->name);
                if (!v->is_boolean())
                    throw Error(ErrorKind::KindMismatch,
                                b->name + " is Integer, expected Boolean literal");
            } else if (const auto* cmp = std::get_if<LinearCmp>(&lit.node)) {
                for (const auto& t : cmp->sum.terms()) check_int_var(t.var);
            } else if (const auto* ad = std::get_if<AllDifferent>(&lit.node)) {
                if (ad->args.empty())
                    throw Error(ErrorKind::Parse, "alldifferent without arguments");
                for (const auto& a : ad->args) check_int_var(a);
            } else if (const auto* tr = std::get_if<TableRef>(&lit.node)) {
                const Relation* rel = inst.find_rel(tr->rel);
                if (!rel)
                    throw Error(ErrorKind::UndeclaredVariable,
                                "dangling relation reference " + tr->rel);
                if ((int)tr->args.size() != rel->arity)
                    throw Error(ErrorKind::ArityMismatch,
                                "rel(" + tr->rel + ",...) argument list does not match arity");
                for (const auto& a : tr->args) check_int_var(a);
            }
        }
    }
    return inst;
}

} // namespace frontend
} // namespace csat
