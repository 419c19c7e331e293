#include "csat/cnf.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace csat {

bool CnfDocument::add_clause(std::vector<int> lits) {
    std::vector<int> out;
    for (int lit : lits) {
        if (std::find(out.begin(), out.end(), -lit) != out.end()) return false; // tautology
        if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(lit);
    }
    clauses.push_back(std::move(out));
    return true;
}

void CnfDocument::validate() const {
    for (const auto& clause : clauses)
        for (int lit : clause) {
            int v = std::abs(lit);
            if (lit == 0 || v > num_vars)
                throw Error(ErrorKind::Parse,
                            "clause references variable " + std::to_string(v) +
                                " beyond declared count " + std::to_string(num_vars));
        }
}

std::string write_dimacs(const CnfDocument& cnf) {
    std::ostringstream out;
    out << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
    for (const auto& [id, name] : cnf.annotations)
        out << "c map " << id << " " << name << "\n";
    for (const auto& clause : cnf.clauses) {
        for (int lit : clause) out << lit << " ";
        out << "0\n";
    }
    return out.str();
}

CnfDocument parse_dimacs(const std::string& text) {
    CnfDocument cnf;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    size_t declared_clauses = 0;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == 'c') {
            std::istringstream ls(line);
            std::string c, tag;
            ls >> c >> tag;
            if (tag == "map") {
                int id;
                std::string name;
                if (!(ls >> id)) throw Error(ErrorKind::Parse, "malformed c map line");
                std::getline(ls, name);
                size_t start = name.find_first_not_of(' ');
                cnf.annotations[id] = start == std::string::npos ? "" : name.substr(start);
            }
            continue;
        }
        if (line[0] == 'p') {
            std::istringstream ls(line);
            std::string p, fmt;
            long long v, c;
            if (!(ls >> p >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
                throw Error(ErrorKind::Parse, "malformed DIMACS header");
            cnf.num_vars = (int)v;
            declared_clauses = (size_t)c;
            have_header = true;
            continue;
        }
        if (!have_header)
            throw Error(ErrorKind::Parse, "clause data before DIMACS header");
        std::istringstream ls(line);
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                cnf.clauses.push_back(current);
                current.clear();
            } else {
                if (std::abs(lit) > cnf.num_vars)
                    throw Error(ErrorKind::Parse,
                                "literal " + std::to_string(lit) +
                                    " exceeds declared variable count");
                current.push_back((int)lit);
            }
        }
        if (!ls.eof()) throw Error(ErrorKind::Parse, "malformed clause line");
    }
    if (!have_header) throw Error(ErrorKind::Parse, "missing DIMACS header");
    if (!current.empty()) throw Error(ErrorKind::Parse, "clause not 0-terminated");
    if (cnf.clauses.size() != declared_clauses)
        throw Error(ErrorKind::Parse, "clause count does not match header");
    return cnf;
}

} // namespace csat
