#include <algorithm>
#include <set>

#include "mondet/rewrite.hpp"

namespace mondet {

const char* viewImageStatusName(ViewImageStatus s) {
    switch (s) {
    case ViewImageStatus::Ok: return "OK";
    case ViewImageStatus::Degenerate: return "DEGENERATE";
    case ViewImageStatus::Unknown: return "UNKNOWN";
    }
    return "?";
}

ViewImageRewriting viewImageRewriting(const UnionQuery& q, const ViewSet& views, const std::vector<TGD>& rules,
                                      const ChaseConfig& cfg) {
    q.validate();
    ViewImageRewriting out;
    out.rewriting.arity = q.arity;
    bool degenerate = false;
    std::set<std::string> keys;
    for (size_t di = 0; di < q.disjuncts.size(); ++di) {
        const auto& d = q.disjuncts[di];
        auto cd = canonicalDatabase(d);
        auto ch = chase(cd.instance, rules, cfg);
        if (!ch.saturated()) {
            out.status = ViewImageStatus::Unknown;
            out.reason = "chase of disjunct " + std::to_string(di) + " did not saturate";
            out.rewriting.disjuncts.clear();
            return out;
        }
        Instance image = viewImage(ch.instance, views);
        std::set<Term> frozen;
        for (const auto& [v, c] : cd.freeze.entries()) frozen.insert(c);
        Substitution back;
        for (size_t i = 0; i < d.head.size(); ++i)
            if (d.head[i].isVariable()) back.bind(cd.headTuple[i], d.head[i]);
        size_t fresh = 0;
        std::set<std::string> used;
        for (const auto& v : d.variables()) used.insert(v.name());
        auto mapTerm = [&](const Term& t) -> Term {
            if (auto b = back.get(t)) return *b;
            if (t.isConstant() && !frozen.count(t)) return t;
            std::string n;
            do n = "Y" + std::to_string(fresh++);
            while (used.count(n));
            Term v = Term::variable(n);
            back.set(t, v);
            return v;
        };
        ConjunctiveQuery c;
        c.head = d.head;
        for (const auto& f : image.facts()) {
            std::vector<Term> args;
            for (const auto& t : f.args) args.push_back(mapTerm(t));
            c.body.emplace_back(f.predicate, std::move(args));
        }
        auto present = variablesOf(c.body);
        for (const auto& t : c.head)
            if (t.isVariable() && std::find(present.begin(), present.end(), t) == present.end()) {
                out.status = ViewImageStatus::Unknown;
                out.reason = "view image of disjunct " + std::to_string(di) + " loses answer variable " + t.name();
                out.rewriting.disjuncts.clear();
                return out;
            }
        if (c.body.empty()) degenerate = true;
        c = normalizeCQ(c);
        if (keys.insert(toString(c)).second) out.rewriting.disjuncts.push_back(std::move(c));
    }
    out.status = degenerate ? ViewImageStatus::Degenerate : ViewImageStatus::Ok;
    if (degenerate) out.reason = "some view image is empty";
    return out;
}

} // namespace mondet
