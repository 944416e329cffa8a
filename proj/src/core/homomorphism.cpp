#include "mondet/homomorphism.hpp"

#include <algorithm>
#include <limits>

#include "mondet/error.hpp"

namespace mondet {

Matcher::Matcher(const std::vector<Atom>& pattern, bool reorder) : reorder_(reorder) {
    vars_ = variablesOf(pattern);
    atoms_.reserve(pattern.size());
    for (const auto& a : pattern) {
        CAtom c;
        c.pred = a.predicate;
        for (const auto& t : a.args) {
            if (t.isVariable())
                c.args.push_back({slotOf(t), Term()});
            else
                c.args.push_back({-1, t});
        }
        atoms_.push_back(std::move(c));
    }
}

int Matcher::slotOf(const Term& var) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
}

void Matcher::checkArity(const Instance& target) const {
    for (const auto& a : atoms_) {
        auto info = target.schema().find(a.pred);
        if (info && info->arity != a.args.size())
            throw Error(ErrorCode::ArityMismatch, "pattern atom over " + a.pred.name() + " has arity " +
                                                      std::to_string(a.args.size()) + ", schema says " +
                                                      std::to_string(info->arity));
    }
}

std::vector<size_t> Matcher::planOrder(const std::vector<char>& boundIn, std::optional<size_t> first) const {
    std::vector<size_t> order;
    if (!reorder_ && !first) {
        for (size_t i = 0; i < atoms_.size(); ++i) order.push_back(i);
        return order;
    }
    std::vector<char> bound = boundIn;
    std::vector<char> used(atoms_.size(), 0);
    auto take = [&](size_t i) {
        used[i] = 1;
        order.push_back(i);
        for (const auto& arg : atoms_[i].args)
            if (arg.slot >= 0) bound[arg.slot] = 1;
    };
    if (first) take(*first);
    if (!reorder_) {
        for (size_t i = 0; i < atoms_.size(); ++i)
            if (!used[i]) take(i);
        return order;
    }
    while (order.size() < atoms_.size()) {
        size_t best = atoms_.size();
        int bestScore = std::numeric_limits<int>::min();
        for (size_t i = 0; i < atoms_.size(); ++i) {
            if (used[i]) continue;
            int fixed = 0, free = 0;
            for (const auto& arg : atoms_[i].args) {
                if (arg.slot < 0 || bound[arg.slot])
                    ++fixed;
                else
                    ++free;
            }
            // Fully bound atoms are pure checks; otherwise prefer more bound positions.
            int score = free == 0 ? 1000 : fixed * 10 - free;
            if (score > bestScore) {
                bestScore = score;
                best = i;
            }
        }
        take(best);
    }
    return order;
}

bool Matcher::search(const Instance& target, const std::vector<size_t>& order, size_t depth,
                     std::vector<Term>& slots, std::vector<char>& bound,
                     const std::function<bool(const std::vector<Term>&)>& visit) const {
    if (depth == order.size()) return visit(slots);
    const CAtom& atom = atoms_[order[depth]];

    const std::vector<uint32_t>* candidates = &target.withPredicate(atom.pred);
    for (size_t i = 0; i < atom.args.size(); ++i) {
        const Arg& arg = atom.args[i];
        const Term* value = nullptr;
        if (arg.slot < 0)
            value = &arg.fixed;
        else if (bound[arg.slot])
            value = &slots[arg.slot];
        if (!value) continue;
        const auto& list = target.withTermAt(atom.pred, i, *value);
        if (list.size() < candidates->size()) candidates = &list;
        if (candidates->empty()) return true;
    }

    std::vector<int> newly;
    newly.reserve(atom.args.size());
    for (uint32_t idx : *candidates) {
        const Atom& fact = target.facts()[idx];
        if (fact.args.size() != atom.args.size()) continue;
        bool ok = true;
        for (size_t i = 0; i < atom.args.size() && ok; ++i) {
            const Arg& arg = atom.args[i];
            if (arg.slot < 0) {
                ok = arg.fixed == fact.args[i];
            } else if (bound[arg.slot]) {
                ok = slots[arg.slot] == fact.args[i];
            } else {
                slots[arg.slot] = fact.args[i];
                bound[arg.slot] = 1;
                newly.push_back(arg.slot);
            }
        }
        bool keepGoing = true;
        if (ok) keepGoing = search(target, order, depth + 1, slots, bound, visit);
        for (int s : newly) bound[s] = 0;
        newly.clear();
        if (!keepGoing) return false;
    }
    return true;
}

bool Matcher::run(const Instance& target, const std::vector<std::optional<Term>>& seed,
                  const std::function<bool(const std::vector<Term>&)>& visit) const {
    checkArity(target);
    std::vector<Term> slots(vars_.size());
    std::vector<char> bound(vars_.size(), 0);
    for (size_t i = 0; i < seed.size() && i < vars_.size(); ++i) {
        if (seed[i]) {
            slots[i] = *seed[i];
            bound[i] = 1;
        }
    }
    auto order = planOrder(bound, std::nullopt);
    return search(target, order, 0, slots, bound, visit);
}

bool Matcher::run(const Instance& target, const Substitution& seed,
                  const std::function<bool(const std::vector<Term>&)>& visit) const {
    std::vector<std::optional<Term>> slots(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) slots[i] = seed.get(vars_[i]);
    return run(target, slots, visit);
}

bool Matcher::runFrom(const Instance& target, size_t atomIndex, const Atom& fact,
                      const std::function<bool(const std::vector<Term>&)>& visit) const {
    checkArity(target);
    const CAtom& atom = atoms_.at(atomIndex);
    if (atom.pred != fact.predicate || atom.args.size() != fact.args.size()) return true;
    std::vector<Term> slots(vars_.size());
    std::vector<char> bound(vars_.size(), 0);
    for (size_t i = 0; i < atom.args.size(); ++i) {
        const Arg& arg = atom.args[i];
        if (arg.slot < 0) {
            if (arg.fixed != fact.args[i]) return true;
        } else if (bound[arg.slot]) {
            if (slots[arg.slot] != fact.args[i]) return true;
        } else {
            slots[arg.slot] = fact.args[i];
            bound[arg.slot] = 1;
        }
    }
    auto order = planOrder(bound, atomIndex);
    return search(target, order, 1, slots, bound, visit);
}

Substitution Matcher::toSubstitution(const std::vector<Term>& slots) const {
    Substitution s;
    for (size_t i = 0; i < vars_.size(); ++i) s.set(vars_[i], slots[i]);
    return s;
}

namespace {

Substitution merged(const Substitution& seed, const Matcher& m, const std::vector<Term>& slots) {
    Substitution s = seed;
    for (size_t i = 0; i < m.variables().size(); ++i) s.set(m.variables()[i], slots[i]);
    return s;
}

} // namespace

std::vector<Substitution> findHomomorphisms(const std::vector<Atom>& pattern, const Instance& target,
                                            const Substitution& seed, std::optional<size_t> limit) {
    std::vector<Substitution> out;
    if (limit && *limit == 0) return out;
    Matcher m(pattern);
    m.run(target, seed, [&](const std::vector<Term>& slots) {
        out.push_back(merged(seed, m, slots));
        return !(limit && out.size() >= *limit);
    });
    return out;
}

void forEachHomomorphism(const std::vector<Atom>& pattern, const Instance& target, const Substitution& seed,
                         const std::function<bool(const Substitution&)>& visit) {
    Matcher m(pattern);
    m.run(target, seed, [&](const std::vector<Term>& slots) { return visit(merged(seed, m, slots)); });
}

std::optional<Substitution> findHomomorphism(const std::vector<Atom>& pattern, const Instance& target,
                                             const Substitution& seed) {
    std::optional<Substitution> out;
    Matcher m(pattern, true);
    m.run(target, seed, [&](const std::vector<Term>& slots) {
        out = merged(seed, m, slots);
        return false;
    });
    return out;
}

bool hasHomomorphism(const std::vector<Atom>& pattern, const Instance& target, const Substitution& seed) {
    bool found = false;
    Matcher m(pattern, true);
    m.run(target, seed, [&](const std::vector<Term>&) {
        found = true;
        return false;
    });
    return found;
}

std::optional<Substitution> findHomomorphismInvolving(const std::vector<Atom>& pattern, const Instance& target,
                                                      const std::vector<Atom>& newFacts,
                                                      const Substitution& seed) {
    std::optional<Substitution> out;
    Matcher m(pattern, true);
    for (const auto& fact : newFacts) {
        for (size_t i = 0; i < pattern.size() && !out; ++i) {
            if (pattern[i].predicate != fact.predicate) continue;
            m.runFrom(target, i, fact, [&](const std::vector<Term>& slots) {
                for (size_t v = 0; v < m.variables().size(); ++v) {
                    auto s = seed.get(m.variables()[v]);
                    if (s && *s != slots[v]) return true;
                }
                out = merged(seed, m, slots);
                return false;
            });
        }
        if (out) break;
    }
    return out;
}

bool matchAtom(const Atom& pattern, const Atom& fact, Substitution& s) {
    if (pattern.predicate != fact.predicate || pattern.arity() != fact.arity()) return false;
    for (size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& p = pattern.args[i];
        if (p.isVariable()) {
            if (!s.bind(p, fact.args[i])) return false;
        } else if (p != fact.args[i]) {
            return false;
        }
    }
    return true;
}

} // namespace mondet
