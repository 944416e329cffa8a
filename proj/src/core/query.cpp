#include "mondet/query.hpp"

#include <algorithm>
#include <unordered_set>

#include "mondet/error.hpp"
#include "mondet/homomorphism.hpp"

namespace mondet {

void ConjunctiveQuery::validate() const {
    auto vars = variablesOf(body);
    for (const auto& t : head)
        if (t.isVariable() && std::find(vars.begin(), vars.end(), t) == vars.end())
            throw Error(ErrorCode::UnsafeRule, "head variable " + t.name() + " does not occur in the body");
}

std::vector<Term> ConjunctiveQuery::variables() const {
    std::vector<Term> out;
    for (const auto& t : head)
        if (t.isVariable() && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    for (const auto& a : body) collectVariables(a, out);
    return out;
}

std::vector<Term> ConjunctiveQuery::existentialVariables() const {
    std::vector<Term> out;
    for (const auto& v : variablesOf(body))
        if (std::find(head.begin(), head.end(), v) == head.end()) out.push_back(v);
    return out;
}

UnionQuery::UnionQuery(size_t a, std::vector<ConjunctiveQuery> ds) : arity(a), disjuncts(std::move(ds)) {
    for (const auto& d : disjuncts)
        if (d.arity() != arity)
            throw Error(ErrorCode::ArityMismatch, "disjunct arity " + std::to_string(d.arity()) +
                                                      " differs from union arity " + std::to_string(arity));
}

void UnionQuery::validate() const {
    for (const auto& d : disjuncts) {
        if (d.arity() != arity) throw Error(ErrorCode::ArityMismatch, "disjunct arity differs from union arity");
        d.validate();
    }
}

std::vector<Symbol> UnionQuery::predicates() const {
    std::vector<Symbol> out;
    for (const auto& d : disjuncts)
        for (const auto& a : d.body)
            if (std::find(out.begin(), out.end(), a.predicate) == out.end()) out.push_back(a.predicate);
    return out;
}

std::string toString(const ConjunctiveQuery& q) {
    std::string s = "(";
    for (size_t i = 0; i < q.head.size(); ++i) {
        if (i) s += ",";
        s += q.head[i].name();
    }
    s += ") <- ";
    s += q.body.empty() ? std::string("true") : toString(q.body);
    return s;
}

std::string toString(const UnionQuery& q) {
    if (q.disjuncts.empty()) return "false";
    std::string s;
    for (size_t i = 0; i < q.disjuncts.size(); ++i) {
        if (i) s += " | ";
        s += toString(q.disjuncts[i]);
    }
    return s;
}

CanonicalDatabase canonicalDatabase(const ConjunctiveQuery& q) {
    std::unordered_set<std::string> taken;
    for (const auto& a : q.body)
        for (const auto& t : a.args)
            if (t.isConstant()) taken.insert(t.name());
    for (const auto& t : q.head)
        if (t.isConstant()) taken.insert(t.name());

    CanonicalDatabase out;
    for (const auto& v : q.variables()) {
        std::string base = "c_" + v.name();
        std::string name = base;
        for (int k = 1; taken.count(name); ++k) name = base + "_" + std::to_string(k);
        taken.insert(name);
        out.freeze.set(v, Term::constant(name));
    }
    for (const auto& a : q.body) out.instance.add(out.freeze.apply(a));
    out.headTuple = out.freeze.apply(q.head);
    return out;
}

Instance canondb(const ConjunctiveQuery& q) { return canonicalDatabase(q).instance; }

TupleSet evalQuery(const ConjunctiveQuery& q, const Instance& inst) {
    q.validate();
    TupleSet out;
    Matcher m(q.body, true);
    std::vector<int> headSlots;
    for (const auto& t : q.head) headSlots.push_back(t.isVariable() ? m.slotOf(t) : -1);
    m.run(inst, Substitution{}, [&](const std::vector<Term>& slots) {
        Tuple t;
        t.reserve(q.head.size());
        for (size_t i = 0; i < q.head.size(); ++i) t.push_back(headSlots[i] >= 0 ? slots[headSlots[i]] : q.head[i]);
        out.insert(std::move(t));
        return true;
    });
    return out;
}

TupleSet evalQuery(const UnionQuery& q, const Instance& inst) {
    TupleSet out;
    for (const auto& d : q.disjuncts) {
        auto part = evalQuery(d, inst);
        out.insert(part.begin(), part.end());
    }
    return out;
}

bool holds(const UnionQuery& q, const Instance& inst) {
    for (const auto& d : q.disjuncts)
        if (hasHomomorphism(d.body, inst)) return true;
    return false;
}

namespace {

// Seed mapping head terms of d onto the tuple; nullopt on clash.
std::optional<Substitution> headSeed(const ConjunctiveQuery& d, const Tuple& tuple) {
    if (d.head.size() != tuple.size()) return std::nullopt;
    Substitution s;
    for (size_t i = 0; i < tuple.size(); ++i) {
        if (d.head[i].isVariable()) {
            if (!s.bind(d.head[i], tuple[i])) return std::nullopt;
        } else if (d.head[i] != tuple[i]) {
            return std::nullopt;
        }
    }
    return s;
}

} // namespace

bool holdsAt(const UnionQuery& q, const Instance& inst, const Tuple& tuple) {
    for (const auto& d : q.disjuncts) {
        auto seed = headSeed(d, tuple);
        if (seed && hasHomomorphism(d.body, inst, *seed)) return true;
    }
    return false;
}

bool containsCQ(const ConjunctiveQuery& q1, const UnionQuery& q2) {
    if (q1.arity() != q2.arity) throw Error(ErrorCode::ArityMismatch, "containment between queries of different arity");
    auto cdb = canonicalDatabase(q1);
    return holdsAt(q2, cdb.instance, cdb.headTuple);
}

bool containsUCQ(const UnionQuery& q1, const UnionQuery& q2) {
    if (q1.arity != q2.arity) throw Error(ErrorCode::ArityMismatch, "containment between queries of different arity");
    for (const auto& d : q1.disjuncts)
        if (!containsCQ(d, q2)) return false;
    return true;
}

bool equivalentCQ(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
    return a.arity() == b.arity() && containsCQ(a, UnionQuery(b)) && containsCQ(b, UnionQuery(a));
}

bool equivalentUCQ(const UnionQuery& a, const UnionQuery& b) {
    return a.arity == b.arity && containsUCQ(a, b) && containsUCQ(b, a);
}

ConjunctiveQuery normalizeCQ(const ConjunctiveQuery& q) {
    Substitution rename;
    size_t next = 0;
    for (const auto& v : q.variables()) rename.set(v, Term::variable("V" + std::to_string(next++)));
    ConjunctiveQuery out;
    out.head = rename.apply(q.head);
    std::unordered_set<Atom> seen;
    for (const auto& a : q.body) {
        Atom r = rename.apply(a);
        if (seen.insert(r).second) out.body.push_back(std::move(r));
    }
    return out;
}

} // namespace mondet
