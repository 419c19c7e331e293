#pragma once

#include <map>
#include <string>
#include <vector>

#include "csat/types.hpp"

namespace csat {

/// Semantic identity of a propositional variable.
struct AtomKey {
    enum Kind {
        Less,      // a = variable, v1 = value: "variable < value"
        Eq,        // a = variable, v1 = value: direct value atom
        BoolVal,   // a = variable
        Leq,       // a = sum term, v1 = comparison bound m, v2 = bound: "sum <= bound"
        TupPrefix, // a = clause id, v1 = literal idx, v2 = tuple id, v3 = arg idx
        PhCount,   // a = "cid:lit:window", v1 = position, v2 = count
        Hold,      // a = clause id, v1 = literal idx
        Aux,       // a = tag, v1 = counter
    } kind;
    std::string a;
    Int v1 = 0, v2 = 0, v3 = 0;

    friend auto operator<=>(const AtomKey&, const AtomKey&) = default;

    std::string render() const {
        switch (kind) {
        case Less: return "less(" + a + "," + std::to_string(v1) + ")";
        case Eq: return "value(" + a + "," + std::to_string(v1) + ")";
        case BoolVal: return "bvar(" + a + ")";
        case Leq:
            return "leq(" + a + "," + std::to_string(v1) + "," + std::to_string(v2) + ")";
        case TupPrefix:
            return "tup(" + a + "," + std::to_string(v1) + "," + std::to_string(v2) + "," +
                   std::to_string(v3) + ")";
        case PhCount:
            return "ph(" + a + "," + std::to_string(v1) + "," + std::to_string(v2) + ")";
        case Hold: return "hold(" + a + "," + std::to_string(v1) + ")";
        case Aux: return "aux(" + a + "," + std::to_string(v1) + ")";
        }
        return "?";
    }
};

/// Bijection between atom keys and CNF variable ids (1-based).
class VarMap {
public:
    /// Returns the id of the key, allocating the next id when new.
    int intern(const AtomKey& key) {
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        keys_.push_back(key);
        int id = (int)keys_.size();
        ids_.emplace(key, id);
        return id;
    }

    /// 0 when the key has no variable.
    int id_of(const AtomKey& key) const {
        auto it = ids_.find(key);
        return it == ids_.end() ? 0 : it->second;
    }

    const AtomKey* key_of(int id) const {
        if (id < 1 || id > (int)keys_.size()) return nullptr;
        return &keys_[id - 1];
    }

    size_t size() const { return keys_.size(); }

private:
    std::map<AtomKey, int> ids_;
    std::vector<AtomKey> keys_;
};

} // namespace csat
