#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mondet/instance.hpp"

namespace mondet {

// A pattern compiled against variable slots. Search backtracks over atoms
// (in body order unless reordered) and over candidate facts in insertion
// order.
class Matcher {
public:
    explicit Matcher(const std::vector<Atom>& pattern, bool reorder = false);

    const std::vector<Term>& variables() const { return vars_; }
    int slotOf(const Term& var) const;

    // Calls visit with the slot assignment of every match; visit returns
    // false to stop. Unbound seed slots hold Term() with kind Variable.
    // Returns false if stopped early.
    bool run(const Instance& target, const std::vector<std::optional<Term>>& seed,
             const std::function<bool(const std::vector<Term>&)>& visit) const;
    bool run(const Instance& target, const Substitution& seed,
             const std::function<bool(const std::vector<Term>&)>& visit) const;

    // Seeds search from the match of pattern atom `atomIndex` onto `fact`.
    bool runFrom(const Instance& target, size_t atomIndex, const Atom& fact,
                 const std::function<bool(const std::vector<Term>&)>& visit) const;

    Substitution toSubstitution(const std::vector<Term>& slots) const;

private:
    struct Arg {
        int slot;   // -1 for a fixed term
        Term fixed;
    };
    struct CAtom {
        Symbol pred;
        std::vector<Arg> args;
    };

    void checkArity(const Instance& target) const;
    bool search(const Instance& target, const std::vector<size_t>& order, size_t depth,
                std::vector<Term>& slots, std::vector<char>& bound,
                const std::function<bool(const std::vector<Term>&)>& visit) const;
    std::vector<size_t> planOrder(const std::vector<char>& bound, std::optional<size_t> first) const;

    std::vector<Term> vars_;
    std::vector<CAtom> atoms_;
    bool reorder_;
};

std::vector<Substitution> findHomomorphisms(const std::vector<Atom>& pattern, const Instance& target,
                                            const Substitution& seed = {},
                                            std::optional<size_t> limit = std::nullopt);
void forEachHomomorphism(const std::vector<Atom>& pattern, const Instance& target, const Substitution& seed,
                         const std::function<bool(const Substitution&)>& visit);
std::optional<Substitution> findHomomorphism(const std::vector<Atom>& pattern, const Instance& target,
                                             const Substitution& seed = {});
bool hasHomomorphism(const std::vector<Atom>& pattern, const Instance& target, const Substitution& seed = {});

// A match using at least one of the given facts (which must already be in
// target). Used for incremental checks after a chase step.
std::optional<Substitution> findHomomorphismInvolving(const std::vector<Atom>& pattern, const Instance& target,
                                                      const std::vector<Atom>& newFacts,
                                                      const Substitution& seed = {});

// Unifies a pattern atom with a ground fact, extending s. False on clash.
bool matchAtom(const Atom& pattern, const Atom& fact, Substitution& s);

} // namespace mondet
