#pragma once

#include <functional>
#include <map>
#include <vector>

#include "mondet/atom.hpp"

namespace mondet::detail {

// Union-find over terms. A class holds at most one constant; rank orders
// the candidates for the class representative (lower wins, ties by name).
class TermUnifier {
public:
    explicit TermUnifier(std::function<int(const Term&)> rank) : rank_(std::move(rank)) {}

    Term find(const Term& t) {
        auto it = parent_.find(t);
        if (it == parent_.end()) {
            parent_.emplace(t, t);
            return t;
        }
        if (it->second == t) return t;
        Term root = find(it->second);
        parent_[t] = root;
        return root;
    }

    // False when two distinct constants would meet.
    bool unite(const Term& a, const Term& b) {
        Term ra = find(a), rb = find(b);
        if (ra == rb) return true;
        if (ra.isConstant() && rb.isConstant()) return false;
        if (better(rb, ra)) std::swap(ra, rb);
        parent_[rb] = ra;
        return true;
    }

    bool unifyAtoms(const Atom& a, const Atom& b) {
        if (a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
        for (size_t i = 0; i < a.args.size(); ++i)
            if (!unite(a.args[i], b.args[i])) return false;
        return true;
    }

    // Members grouped by representative.
    std::map<Term, std::vector<Term>> classes() {
        std::map<Term, std::vector<Term>> out;
        std::vector<Term> keys;
        for (const auto& [t, _] : parent_) keys.push_back(t);
        for (const auto& t : keys) out[find(t)].push_back(t);
        return out;
    }

    Substitution substitution() {
        Substitution s;
        std::vector<Term> keys;
        for (const auto& [t, _] : parent_) keys.push_back(t);
        for (const auto& t : keys) {
            Term r = find(t);
            if (t.isVariable() && r != t) s.set(t, r);
        }
        return s;
    }

private:
    bool better(const Term& a, const Term& b) const {
        if (a.isConstant() != b.isConstant()) return a.isConstant();
        int ra = rank_(a), rb = rank_(b);
        if (ra != rb) return ra < rb;
        return presentationLess(a, b);
    }

    std::function<int(const Term&)> rank_;
    std::map<Term, Term> parent_;
};

} // namespace mondet::detail
