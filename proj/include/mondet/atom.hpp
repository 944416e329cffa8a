#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mondet/term.hpp"

namespace mondet {

struct Atom {
    Symbol predicate;
    std::vector<Term> args;

    Atom() = default;
    Atom(Symbol p, std::vector<Term> a) : predicate(p), args(std::move(a)) {}
    Atom(std::string_view p, std::vector<Term> a) : predicate(p), args(std::move(a)) {}

    size_t arity() const { return args.size(); }
    bool isGround() const;

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.predicate == b.predicate && a.args == b.args;
    }
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
    friend bool operator<(const Atom& a, const Atom& b) {
        if (a.predicate != b.predicate) return a.predicate < b.predicate;
        return a.args < b.args;
    }
};

std::string toString(const Term& t);
std::string toString(const Atom& a);
std::string toString(const std::vector<Atom>& atoms);

// Variables in first-occurrence order.
std::vector<Term> variablesOf(const std::vector<Atom>& atoms);
void collectVariables(const Atom& a, std::vector<Term>& out);

enum class PredicateTag { Base, View, Idb };

struct PredicateInfo {
    size_t arity = 0;
    PredicateTag tag = PredicateTag::Base;
};

class Schema {
public:
    // Declares the predicate, or checks the existing declaration.
    // Throws ARITY_MISMATCH on disagreement.
    void declare(Symbol p, size_t arity, PredicateTag tag = PredicateTag::Base);
    void check(const Atom& a) const;

    bool contains(Symbol p) const { return preds_.count(p) != 0; }
    std::optional<PredicateInfo> find(Symbol p) const;
    size_t arity(Symbol p) const;
    // Predicates sorted by name.
    std::vector<Symbol> predicates() const;
    std::vector<Symbol> predicates(PredicateTag tag) const;
    size_t size() const { return preds_.size(); }
    void merge(const Schema& other);

    friend bool operator==(const Schema& a, const Schema& b);

private:
    std::map<Symbol, PredicateInfo> preds_;
};

bool operator==(const Schema& a, const Schema& b);

// A variable-to-term mapping.
class Substitution {
public:
    Substitution() = default;

    void set(const Term& var, const Term& value) { map_[var] = value; }
    std::optional<Term> get(const Term& var) const;
    bool contains(const Term& var) const { return map_.count(var) != 0; }
    // Binds var or checks an existing binding; false on conflict.
    bool bind(const Term& var, const Term& value);

    Term apply(const Term& t) const;
    Atom apply(const Atom& a) const;
    std::vector<Atom> apply(const std::vector<Atom>& atoms) const;
    std::vector<Term> apply(const std::vector<Term>& terms) const;

    size_t size() const { return map_.size(); }
    bool empty() const { return map_.empty(); }
    const std::map<Term, Term>& entries() const { return map_; }

    friend bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }

private:
    std::map<Term, Term> map_;
};

std::string toString(const Substitution& s);

} // namespace mondet

template <>
struct std::hash<mondet::Atom> {
    size_t operator()(const mondet::Atom& a) const noexcept {
        size_t h = std::hash<mondet::Symbol>()(a.predicate);
        for (const auto& t : a.args) h = mondet::hashCombine(h, std::hash<mondet::Term>()(t));
        return h;
    }
};
