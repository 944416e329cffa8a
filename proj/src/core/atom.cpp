#include "mondet/atom.hpp"

#include <algorithm>

#include "mondet/error.hpp"

namespace mondet {

bool Atom::isGround() const {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.isGround(); });
}

std::string toString(const Term& t) { return t.name(); }

std::string toString(const Atom& a) {
    std::string s = a.predicate.name() + "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ",";
        s += a.args[i].name();
    }
    return s + ")";
}

std::string toString(const std::vector<Atom>& atoms) {
    std::string s;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) s += ", ";
        s += toString(atoms[i]);
    }
    return s;
}

void collectVariables(const Atom& a, std::vector<Term>& out) {
    for (const auto& t : a.args)
        if (t.isVariable() && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

std::vector<Term> variablesOf(const std::vector<Atom>& atoms) {
    std::vector<Term> out;
    for (const auto& a : atoms) collectVariables(a, out);
    return out;
}

void Schema::declare(Symbol p, size_t arity, PredicateTag tag) {
    auto it = preds_.find(p);
    if (it == preds_.end()) {
        preds_.emplace(p, PredicateInfo{arity, tag});
        return;
    }
    if (it->second.arity != arity)
        throw Error(ErrorCode::ArityMismatch, p.name() + " declared with arity " +
                                                  std::to_string(it->second.arity) + ", used with " +
                                                  std::to_string(arity));
}

void Schema::check(const Atom& a) const {
    auto it = preds_.find(a.predicate);
    if (it != preds_.end() && it->second.arity != a.arity())
        throw Error(ErrorCode::ArityMismatch, toString(a) + " disagrees with declared arity " +
                                                  std::to_string(it->second.arity));
}

std::optional<PredicateInfo> Schema::find(Symbol p) const {
    auto it = preds_.find(p);
    if (it == preds_.end()) return std::nullopt;
    return it->second;
}

size_t Schema::arity(Symbol p) const {
    auto it = preds_.find(p);
    if (it == preds_.end()) throw Error(ErrorCode::UndeclaredPredicate, p.name());
    return it->second.arity;
}

std::vector<Symbol> Schema::predicates() const {
    std::vector<Symbol> out;
    for (const auto& [p, info] : preds_) out.push_back(p);
    std::sort(out.begin(), out.end(), [](Symbol a, Symbol b) { return a.name() < b.name(); });
    return out;
}

std::vector<Symbol> Schema::predicates(PredicateTag tag) const {
    std::vector<Symbol> out;
    for (Symbol p : predicates())
        if (preds_.at(p).tag == tag) out.push_back(p);
    return out;
}

void Schema::merge(const Schema& other) {
    for (const auto& [p, info] : other.preds_) declare(p, info.arity, info.tag);
}

bool operator==(const Schema& a, const Schema& b) {
    if (a.preds_.size() != b.preds_.size()) return false;
    for (const auto& [p, info] : a.preds_) {
        auto it = b.preds_.find(p);
        if (it == b.preds_.end() || it->second.arity != info.arity || it->second.tag != info.tag) return false;
    }
    return true;
}

std::optional<Term> Substitution::get(const Term& var) const {
    auto it = map_.find(var);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

bool Substitution::bind(const Term& var, const Term& value) {
    auto [it, inserted] = map_.emplace(var, value);
    return inserted || it->second == value;
}

Term Substitution::apply(const Term& t) const {
    if (!t.isVariable()) return t;
    auto it = map_.find(t);
    return it == map_.end() ? t : it->second;
}

Atom Substitution::apply(const Atom& a) const {
    Atom out;
    out.predicate = a.predicate;
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply(t));
    return out;
}

std::vector<Atom> Substitution::apply(const std::vector<Atom>& atoms) const {
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(apply(a));
    return out;
}

std::vector<Term> Substitution::apply(const std::vector<Term>& terms) const {
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(apply(t));
    return out;
}

std::string toString(const Substitution& s) {
    std::vector<std::pair<Term, Term>> entries(s.entries().begin(), s.entries().end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return presentationLess(a.first, b.first); });
    std::string out = "{";
    for (size_t i = 0; i < entries.size(); ++i) {
        if (i) out += ", ";
        out += entries[i].first.name() + "->" + entries[i].second.name();
    }
    return out + "}";
}

} // namespace mondet
