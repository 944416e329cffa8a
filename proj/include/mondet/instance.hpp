#pragma once

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mondet/atom.hpp"

namespace mondet {

// A finite set of ground facts. Facts keep their insertion order, which
// fixes the enumeration order of homomorphism search.
class Instance {
public:
    Instance() = default;
    explicit Instance(Schema schema) : schema_(std::move(schema)) {}
    Instance(std::initializer_list<Atom> facts);

    // Returns false if the fact was already present. Undeclared predicates
    // are declared as BASE with the fact's arity.
    bool add(const Atom& fact);
    void addAll(const Instance& other);
    void addAll(const std::vector<Atom>& facts);
    bool contains(const Atom& fact) const { return set_.count(fact) != 0; }

    const std::vector<Atom>& facts() const { return facts_; }
    size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }
    const Schema& schema() const { return schema_; }
    Schema& schema() { return schema_; }

    // Terms in first-occurrence order.
    std::vector<Term> activeDomain() const;
    uint64_t maxNullId() const;

    // Indexes into facts() for a predicate, or for a predicate with a fixed
    // term at a position. Empty when nothing matches.
    const std::vector<uint32_t>& withPredicate(Symbol p) const;
    const std::vector<uint32_t>& withTermAt(Symbol p, size_t pos, const Term& t) const;

    // Restriction to the given predicates (fact order kept).
    Instance restrictTo(const std::vector<Symbol>& preds) const;

    // Fact-set equality, independent of insertion order.
    friend bool operator==(const Instance& a, const Instance& b);
    bool isSubsetOf(const Instance& other) const;

private:
    struct PosKey {
        Symbol pred;
        size_t pos;
        Term term;
        bool operator==(const PosKey& o) const { return pred == o.pred && pos == o.pos && term == o.term; }
    };
    struct PosKeyHash {
        size_t operator()(const PosKey& k) const {
            return hashCombine(hashCombine(std::hash<Symbol>()(k.pred), k.pos), std::hash<Term>()(k.term));
        }
    };

    Schema schema_;
    std::vector<Atom> facts_;
    std::unordered_set<Atom> set_;
    std::unordered_map<Symbol, std::vector<uint32_t>> byPred_;
    std::unordered_map<PosKey, std::vector<uint32_t>, PosKeyHash> byPos_;
};

bool operator==(const Instance& a, const Instance& b);

std::string toString(const Instance& inst);

} // namespace mondet
