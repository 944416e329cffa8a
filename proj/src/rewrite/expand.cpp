#include <set>

#include "mondet/error.hpp"
#include "mondet/rewrite.hpp"
#include "unifier.hpp"

namespace mondet {

namespace {

// The disjunct with its variables renamed Z<k>, continuing the counter.
ConjunctiveQuery freshCopy(const ConjunctiveQuery& d, const std::set<std::string>& used, size_t& counter) {
    Substitution s;
    for (const auto& v : d.variables()) {
        std::string n;
        do n = "Z" + std::to_string(counter++);
        while (used.count(n));
        s.set(v, Term::variable(n));
    }
    return ConjunctiveQuery(s.apply(d.head), s.apply(d.body));
}

void expandDisjunct(const ConjunctiveQuery& d, const ViewSet& views, std::vector<ConjunctiveQuery>& out,
                    std::set<std::string>& keys) {
    std::vector<const ViewDefinition*> defs;
    for (const auto& a : d.body) {
        const ViewDefinition* v = views.find(a.predicate);
        if (!v) throw Error(ErrorCode::InvalidArgument, "atom " + toString(a) + " is not over a view predicate");
        if (v->program)
            throw Error(ErrorCode::DatalogViewUnexpandable, "view " + v->name.name() + " is defined in Datalog");
        if (v->arity() != a.arity())
            throw Error(ErrorCode::ArityMismatch, "atom " + toString(a) + " does not match view arity");
        if (v->ucq.empty()) return;
        defs.push_back(v);
    }
    std::set<std::string> used;
    for (const auto& v : d.variables()) used.insert(v.name());
    std::set<Term> answer;
    for (const auto& t : d.head)
        if (t.isVariable()) answer.insert(t);
    std::set<Term> own;
    for (const auto& v : d.variables()) own.insert(v);

    std::vector<size_t> choice(defs.size(), 0);
    while (true) {
        size_t counter = 0;
        detail::TermUnifier uf([&](const Term& t) { return answer.count(t) ? 0 : own.count(t) ? 1 : 2; });
        std::vector<Atom> body;
        bool ok = true;
        for (size_t i = 0; i < defs.size() && ok; ++i) {
            ConjunctiveQuery c = freshCopy(defs[i]->ucq.disjuncts[choice[i]], used, counter);
            for (size_t k = 0; k < c.head.size() && ok; ++k) ok = uf.unite(c.head[k], d.body[i].args[k]);
            body.insert(body.end(), c.body.begin(), c.body.end());
        }
        if (ok) {
            Substitution s = uf.substitution();
            ConjunctiveQuery e = normalizeCQ(ConjunctiveQuery(s.apply(d.head), s.apply(body)));
            if (keys.insert(toString(e)).second) out.push_back(std::move(e));
        }
        size_t k = defs.size();
        while (k > 0) {
            --k;
            if (++choice[k] < defs[k]->ucq.disjuncts.size()) break;
            choice[k] = 0;
            if (k == 0) return;
        }
        if (defs.empty()) return;
    }
}

} // namespace

UnionQuery expandViews(const UnionQuery& r, const ViewSet& views) {
    UnionQuery out;
    out.arity = r.arity;
    std::set<std::string> keys;
    for (const auto& d : r.disjuncts) expandDisjunct(d, views, out.disjuncts, keys);
    return out;
}

DatalogProgram ucqAsProgram(const UnionQuery& q, Symbol goal) {
    std::vector<DatalogRule> rules;
    for (const auto& d : q.disjuncts) rules.push_back(DatalogRule{Atom(goal, d.head), d.body, -1});
    return DatalogProgram(std::move(rules), goal, q.arity);
}

} // namespace mondet
