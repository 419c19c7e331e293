#include "csat/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace csat {
namespace frontend {

namespace {

struct Token {
    enum Kind { Ident, Number, Symbol, End } kind;
    std::string text;
    Int value = 0;
    int col = 0;
};

class LineLexer {
public:
    LineLexer(const std::string& line, int lineno) : line_(line), lineno_(lineno) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, int col) const {
        throw Error(ErrorKind::Parse, "line " + std::to_string(lineno_) + ", col " +
                                          std::to_string(col) + ": " + msg);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, tok_.col); }

    int lineno() const { return lineno_; }

    Token expect_ident(const std::string& what) {
        if (tok_.kind != Token::Ident) fail("expected " + what);
        return next();
    }

    Int expect_number(const std::string& what) {
        if (tok_.kind != Token::Number) fail("expected " + what);
        return next().value;
    }

    void expect_symbol(const std::string& sym) {
        if (tok_.kind != Token::Symbol || tok_.text != sym) fail("expected '" + sym + "'");
        next();
    }

    bool eat_symbol(const std::string& sym) {
        if (tok_.kind == Token::Symbol && tok_.text == sym) {
            next();
            return true;
        }
        return false;
    }

    void expect_end() {
        if (tok_.kind != Token::End) fail("unexpected trailing input");
    }

private:
    void advance() {
        while (pos_ < line_.size() && std::isspace((unsigned char)line_[pos_])) ++pos_;
        tok_.col = (int)pos_ + 1;
        if (pos_ >= line_.size() || line_[pos_] == '%') {
            tok_ = {Token::End, "", 0, (int)pos_ + 1};
            return;
        }
        char c = line_[pos_];
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos_;
            while (pos_ < line_.size() &&
                   (std::isalnum((unsigned char)line_[pos_]) || line_[pos_] == '_'))
                ++pos_;
            tok_ = {Token::Ident, line_.substr(start, pos_ - start), 0, (int)start + 1};
            return;
        }
        if (std::isdigit((unsigned char)c) ||
            (c == '-' && pos_ + 1 < line_.size() && std::isdigit((unsigned char)line_[pos_ + 1]))) {
            size_t start = pos_;
            ++pos_;
            while (pos_ < line_.size() && std::isdigit((unsigned char)line_[pos_])) ++pos_;
            Token t{Token::Number, line_.substr(start, pos_ - start), 0, (int)start + 1};
            try {
                t.value = std::stoll(t.text);
            } catch (const std::exception&) {
                fail("integer literal out of range", (int)start + 1);
            }
            tok_ = t;
            return;
        }
        for (const char* op : {"<=", ">=", "!="}) {
            if (line_.compare(pos_, 2, op) == 0) {
                tok_ = {Token::Symbol, op, 0, (int)pos_ + 1};
                pos_ += 2;
                return;
            }
        }
        tok_ = {Token::Symbol, std::string(1, c), 0, (int)pos_ + 1};
        ++pos_;
    }

    const std::string& line_;
    int lineno_;
    size_t pos_ = 0;
    Token tok_;
};

bool valid_user_name(const std::string& s) {
    if (s.empty() || !std::islower((unsigned char)s[0])) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

struct ParseState {
    Instance inst;
    std::map<std::string, size_t> var_index;
    std::map<std::string, size_t> rel_index;
    int next_clause = 1;
};

// A parsed literal, or the constant it folded to (a sum whose terms cancel
// compares 0 against m; polarity already applied). fold_var names the
// smallest variable of the cancelled sum, used to materialize an
// unsatisfiable literal if a whole clause folds away false.
struct ParsedLit {
    std::optional<LiteralExpr> lit;
    std::optional<bool> constant;
    std::string fold_var;
};

bool eval_const_cmp(CmpOp op, Int m) {
    switch (op) {
    case CmpOp::Le: return 0 <= m;
    case CmpOp::Ge: return 0 >= m;
    case CmpOp::Eq: return 0 == m;
    case CmpOp::Ne: return 0 != m;
    case CmpOp::Lt: return 0 < m;
    case CmpOp::Gt: return 0 > m;
    }
    return false;
}

ParsedLit parse_literal(LineLexer& lex, ParseState& st) {
    int lineno = lex.lineno();
    bool negated = lex.eat_symbol("-");

    Token head = lex.expect_ident("a literal");
    auto need_int_var = [&](const Token& t) -> const Variable& {
        auto it = st.var_index.find(t.text);
        if (it == st.var_index.end())
            throw Error(ErrorKind::UndeclaredVariable,
                        "line " + std::to_string(lineno) + ": undeclared variable " + t.text);
        const Variable& v = st.inst.vars[it->second];
        if (v.is_boolean())
            throw Error(ErrorKind::KindMismatch, "line " + std::to_string(lineno) + ": " +
                                                     t.text + " is Boolean, expected Integer");
        return v;
    };

    if (head.text == "sum") {
        lex.expect_symbol("(");
        std::vector<Term> terms;
        bool first = true;
        while (!lex.eat_symbol(")")) {
            Int sign = 1;
            if (!first) {
                // separator: '+', '-', or a negative number acting as both
                if (lex.eat_symbol("-"))
                    sign = -1;
                else if (!(lex.peek().kind == Token::Number && lex.peek().text[0] == '-'))
                    lex.expect_symbol("+");
            } else if (lex.eat_symbol("-")) {
                sign = -1;
            }
            first = false;
            Int coeff = 1;
            if (lex.peek().kind == Token::Number) {
                coeff = lex.expect_number("coefficient");
                lex.expect_symbol("*");
            }
            Token var = lex.expect_ident("variable");
            need_int_var(var);
            terms.push_back({checked_mul(sign, coeff), var.text});
        }
        if (terms.empty()) lex.fail("empty sum");
        CmpOp op;
        Token opt = lex.next();
        if (opt.kind != Token::Symbol) lex.fail("expected comparison operator");
        if (opt.text == "<=") op = CmpOp::Le;
        else if (opt.text == ">=") op = CmpOp::Ge;
        else if (opt.text == "<") op = CmpOp::Lt;
        else if (opt.text == ">") op = CmpOp::Gt;
        else if (opt.text == "=") op = CmpOp::Eq;
        else if (opt.text == "!=") op = CmpOp::Ne;
        else lex.fail("unknown comparison operator '" + opt.text + "'");
        Int m = lex.expect_number("comparison bound");
        ParsedLit out;
        try {
            LiteralExpr lit;
            lit.negated = negated;
            lit.node = LinearCmp{LinearSum::normalize(terms), op, m};
            out.lit = std::move(lit);
        } catch (const Error& e) {
            if (e.kind != ErrorKind::EmptySum) throw;
            bool value = eval_const_cmp(op, m);
            out.constant = negated ? !value : value;
            out.fold_var = std::min_element(terms.begin(), terms.end(),
                                            [](const Term& a, const Term& b) {
                                                return a.var < b.var;
                                            })
                               ->var;
        }
        return out;
    }
    if (head.text == "alldifferent") {
        lex.expect_symbol("(");
        AllDifferent ad;
        while (true) {
            Token var = lex.expect_ident("variable");
            need_int_var(var);
            ad.args.push_back(var.text);
            if (lex.eat_symbol(")")) break;
            lex.expect_symbol(",");
        }
        LiteralExpr lit;
        lit.negated = negated;
        lit.node = std::move(ad);
        return {lit, std::nullopt, ""};
    }
    if (head.text == "table") {
        lex.expect_symbol("(");
        Token rel = lex.expect_ident("relation name");
        auto it = st.rel_index.find(rel.text);
        if (it == st.rel_index.end())
            throw Error(ErrorKind::UndeclaredVariable,
                        "line " + std::to_string(lineno) + ": undeclared relation " + rel.text);
        TableRef tr;
        tr.rel = rel.text;
        while (lex.eat_symbol(",")) {
            Token var = lex.expect_ident("variable");
            need_int_var(var);
            tr.args.push_back(var.text);
        }
        lex.expect_symbol(")");
        if ((int)tr.args.size() != st.inst.relations[it->second].arity)
            throw Error(ErrorKind::ArityMismatch,
                        "line " + std::to_string(lineno) + ": table(" + rel.text + ",...) has " +
                            std::to_string(tr.args.size()) + " arguments, relation arity is " +
                            std::to_string(st.inst.relations[it->second].arity));
        LiteralExpr lit;
        lit.negated = negated;
        lit.node = std::move(tr);
        return {lit, std::nullopt, ""};
    }
    // Boolean literal
    auto it = st.var_index.find(head.text);
    if (it == st.var_index.end())
        throw Error(ErrorKind::UndeclaredVariable,
                    "line " + std::to_string(lineno) + ": undeclared variable " + head.text);
    if (!st.inst.vars[it->second].is_boolean())
        throw Error(ErrorKind::KindMismatch,
                    "line " + std::to_string(lineno) + ": " + head.text +
                        " is an Integer variable, not a Boolean literal");
    LiteralExpr lit;
    lit.negated = negated;
    lit.node = BoolRef{head.text};
    return {lit, std::nullopt, ""};
}

} // namespace

Instance parse_native(const std::string& src) {
    ParseState st;
    std::istringstream in(src);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        LineLexer lex(line, lineno);
        if (lex.peek().kind == Token::End) continue;
        Token head = lex.expect_ident("a statement");

        auto declare = [&](const std::string& name, Domain dom) {
            if (!valid_user_name(name))
                throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) +
                                                  ": invalid identifier '" + name +
                                                  "' (must match [a-z][a-zA-Z0-9_]*)");
            if (st.var_index.count(name))
                throw Error(ErrorKind::DuplicateDeclaration,
                            "line " + std::to_string(lineno) + ": variable " + name +
                                " declared twice");
            st.var_index[name] = st.inst.vars.size();
            st.inst.vars.push_back({name, std::move(dom)});
        };

        if (head.text == "bool") {
            Token name = lex.expect_ident("variable name");
            lex.expect_end();
            declare(name.text, Domain::boolean());
        } else if (head.text == "int") {
            Token name = lex.expect_ident("variable name");
            std::vector<Interval> pieces;
            while (lex.peek().kind == Token::Number) {
                Int lo = lex.expect_number("interval lower bound");
                Int hi = lex.expect_number("interval upper bound");
                if (lo > hi)
                    throw Error(ErrorKind::EmptyDomain,
                                "line " + std::to_string(lineno) + ": empty interval");
                pieces.push_back({lo, hi});
            }
            lex.expect_end();
            if (pieces.empty())
                throw Error(ErrorKind::EmptyDomain,
                            "line " + std::to_string(lineno) + ": empty domain for " + name.text);
            declare(name.text, Domain::from_intervals(std::move(pieces)));
        } else if (head.text == "rel") {
            Token name = lex.expect_ident("relation name");
            if (!valid_user_name(name.text))
                throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) +
                                                  ": invalid identifier '" + name.text + "'");
            if (st.rel_index.count(name.text))
                throw Error(ErrorKind::DuplicateDeclaration,
                            "line " + std::to_string(lineno) + ": relation " + name.text +
                                " declared twice");
            Int arity = lex.expect_number("arity");
            if (arity < 1)
                throw Error(ErrorKind::Parse,
                            "line " + std::to_string(lineno) + ": arity must be positive");
            Token kind = lex.expect_ident("supports|conflicts");
            lex.expect_end();
            RelKind rk;
            if (kind.text == "supports") rk = RelKind::Supports;
            else if (kind.text == "conflicts") rk = RelKind::Conflicts;
            else lex.fail("expected supports or conflicts");
            st.rel_index[name.text] = st.inst.relations.size();
            st.inst.relations.push_back({name.text, (int)arity, rk, {}});
        } else if (head.text == "tuple") {
            Token name = lex.expect_ident("relation name");
            auto it = st.rel_index.find(name.text);
            if (it == st.rel_index.end())
                throw Error(ErrorKind::UndeclaredVariable,
                            "line " + std::to_string(lineno) + ": undeclared relation " +
                                name.text);
            Relation& rel = st.inst.relations[it->second];
            std::vector<Int> tuple;
            while (lex.peek().kind == Token::Number)
                tuple.push_back(lex.expect_number("tuple value"));
            lex.expect_end();
            if ((int)tuple.size() != rel.arity)
                throw Error(ErrorKind::ArityMismatch,
                            "line " + std::to_string(lineno) + ": tuple has " +
                                std::to_string(tuple.size()) + " values, arity is " +
                                std::to_string(rel.arity));
            rel.tuples.push_back(std::move(tuple));
        } else if (head.text == "clause") {
            std::vector<LiteralExpr> lits;
            bool satisfied = false;
            std::string fold_var;
            bool saw_literal = false;
            while (true) {
                ParsedLit pl = parse_literal(lex, st);
                saw_literal = true;
                if (pl.lit)
                    lits.push_back(std::move(*pl.lit));
                else if (*pl.constant)
                    satisfied = true;
                else
                    fold_var = pl.fold_var;
                if (!lex.eat_symbol(";")) break;
            }
            lex.expect_end();
            if (!saw_literal)
                throw Error(ErrorKind::Parse,
                            "line " + std::to_string(lineno) + ": clause without literals");
            if (satisfied) continue;
            if (lits.empty()) {
                // every literal folded to false: keep an unsatisfiable
                // stand-in over a variable of the cancelled sums
                const Domain& d = st.inst.domain_of(fold_var);
                LiteralExpr lit;
                lit.node = LinearCmp{LinearSum::normalize({{1, fold_var}}), CmpOp::Le,
                                     checked_sub(d.min(), 1)};
                lits.push_back(std::move(lit));
            }
            ConstraintClause clause;
            clause.id = "c" + std::to_string(st.next_clause++);
            clause.literals = std::move(lits);
            st.inst.clauses.push_back(std::move(clause));
        } else {
            lex.fail("unknown statement '" + head.text + "'");
        }
    }
    return st.inst;
}

namespace {

LinearSum negate_sum(const LinearSum& s) {
    std::vector<Term> terms;
    for (const auto& t : s.terms()) terms.push_back({checked_mul(-1, t.coeff), t.var});
    return LinearSum::normalize(std::move(terms));
}

LiteralExpr make_le(LinearSum sum, Int m) {
    LiteralExpr lit;
    lit.node = LinearCmp{std::move(sum), CmpOp::Le, m};
    return lit;
}

} // namespace

Instance normalize_comparisons(const Instance& inst) {
    Instance out;
    out.vars = inst.vars;
    out.relations = inst.relations;
    int next_aux = 1;
    for (const auto& v : inst.vars)
        if (v.is_aux()) ++next_aux; // keep fresh names fresh on re-normalization

    std::vector<ConstraintClause> pending; // auxiliary definition clauses

    for (const auto& clause : inst.clauses) {
        ConstraintClause nc;
        bool sole = clause.literals.size() == 1;
        bool dropped_clause = false;
        for (const auto& lit : clause.literals) {
            const auto* cmp = std::get_if<LinearCmp>(&lit.node);
            if (!cmp) {
                nc.literals.push_back(lit);
                continue;
            }
            CmpOp op = cmp->op;
            if (lit.negated) {
                switch (op) {
                case CmpOp::Le: op = CmpOp::Gt; break;
                case CmpOp::Ge: op = CmpOp::Lt; break;
                case CmpOp::Lt: op = CmpOp::Ge; break;
                case CmpOp::Gt: op = CmpOp::Le; break;
                case CmpOp::Eq: op = CmpOp::Ne; break;
                case CmpOp::Ne: op = CmpOp::Eq; break;
                }
            }
            const LinearSum& s = cmp->sum;
            Int m = cmp->bound;
            switch (op) {
            case CmpOp::Le:
                nc.literals.push_back(make_le(s, m));
                break;
            case CmpOp::Ge:
                nc.literals.push_back(make_le(negate_sum(s), checked_mul(-1, m)));
                break;
            case CmpOp::Lt:
                nc.literals.push_back(make_le(s, checked_sub(m, 1)));
                break;
            case CmpOp::Gt:
                nc.literals.push_back(make_le(negate_sum(s), checked_sub(checked_mul(-1, m), 1)));
                break;
            case CmpOp::Ne:
                nc.literals.push_back(make_le(s, checked_sub(m, 1)));
                nc.literals.push_back(make_le(negate_sum(s), checked_sub(checked_mul(-1, m), 1)));
                break;
            case CmpOp::Eq:
                if (sole) {
                    out.clauses.push_back({"", {make_le(s, m)}});
                    out.clauses.push_back({"", {make_le(negate_sum(s), checked_mul(-1, m))}});
                    dropped_clause = true;
                } else {
                    std::string aux = "_eq" + std::to_string(next_aux++);
                    out.vars.push_back({aux, Domain::boolean()});
                    LiteralExpr pos;
                    pos.node = BoolRef{aux};
                    nc.literals.push_back(pos);
                    LiteralExpr neg = pos;
                    neg.negated = true;
                    pending.push_back({"", {neg, make_le(s, m)}});
                    pending.push_back({"", {neg, make_le(negate_sum(s), checked_mul(-1, m))}});
                }
                break;
            }
        }
        if (!nc.literals.empty() && !dropped_clause) out.clauses.push_back(std::move(nc));
    }
    for (auto& c : pending) out.clauses.push_back(std::move(c));
    for (size_t i = 0; i < out.clauses.size(); ++i)
        out.clauses[i].id = "c" + std::to_string(i + 1);
    return out;
}

} // namespace frontend
} // namespace csat
