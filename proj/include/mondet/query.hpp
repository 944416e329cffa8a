#pragma once

#include <set>
#include <vector>

#include "mondet/instance.hpp"

namespace mondet {

struct ConjunctiveQuery {
    // Answer terms; normally variables, possibly repeated.
    std::vector<Term> head;
    std::vector<Atom> body;

    ConjunctiveQuery() = default;
    ConjunctiveQuery(std::vector<Term> h, std::vector<Atom> b) : head(std::move(h)), body(std::move(b)) {}

    bool isBoolean() const { return head.empty(); }
    size_t arity() const { return head.size(); }
    // Throws UNSAFE_RULE if a head variable is missing from the body.
    void validate() const;
    std::vector<Term> variables() const;
    std::vector<Term> existentialVariables() const;

    friend bool operator==(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
        return a.head == b.head && a.body == b.body;
    }
};

// A union of CQs with a common arity. The empty union is the false query.
struct UnionQuery {
    size_t arity = 0;
    std::vector<ConjunctiveQuery> disjuncts;

    UnionQuery() = default;
    explicit UnionQuery(ConjunctiveQuery q) : arity(q.arity()) { disjuncts.push_back(std::move(q)); }
    UnionQuery(size_t a, std::vector<ConjunctiveQuery> ds);

    bool isBoolean() const { return arity == 0; }
    bool empty() const { return disjuncts.empty(); }
    void validate() const;
    std::vector<Symbol> predicates() const;
};

std::string toString(const ConjunctiveQuery& q);
std::string toString(const UnionQuery& q);

using Tuple = std::vector<Term>;
using TupleSet = std::set<Tuple>;

struct CanonicalDatabase {
    Instance instance;
    Substitution freeze;   // variable -> frozen constant
    Tuple headTuple;
};

// Body variables become constants "c_<name>", suffixed on collision.
CanonicalDatabase canonicalDatabase(const ConjunctiveQuery& q);
Instance canondb(const ConjunctiveQuery& q);

TupleSet evalQuery(const ConjunctiveQuery& q, const Instance& inst);
TupleSet evalQuery(const UnionQuery& q, const Instance& inst);
bool holds(const UnionQuery& q, const Instance& inst);
// True when the tuple is an answer (Boolean queries: the empty tuple).
bool holdsAt(const UnionQuery& q, const Instance& inst, const Tuple& tuple);

// Classic containment q1 ⊆ q2 via canonical databases.
bool containsCQ(const ConjunctiveQuery& q1, const UnionQuery& q2);
bool containsUCQ(const UnionQuery& q1, const UnionQuery& q2);
bool equivalentCQ(const ConjunctiveQuery& a, const ConjunctiveQuery& b);
bool equivalentUCQ(const UnionQuery& a, const UnionQuery& b);

// Variables renamed V0, V1, ... by first occurrence (head first), duplicate
// atoms dropped.
ConjunctiveQuery normalizeCQ(const ConjunctiveQuery& q);

} // namespace mondet
