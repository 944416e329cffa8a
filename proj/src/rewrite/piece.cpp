#include <algorithm>
#include <set>

#include "mondet/error.hpp"
#include "mondet/rewrite.hpp"
#include "unifier.hpp"

namespace mondet {

namespace {

struct PieceResult {
    ConjunctiveQuery query;
    std::vector<size_t> piece;
    Substitution unifier;
};

// The rule with its variables renamed W<k>, avoiding names used by q.
TGD renameApart(const TGD& rule, const ConjunctiveQuery& q) {
    std::set<std::string> used;
    for (const auto& v : q.variables()) used.insert(v.name());
    for (const auto& v : q.head)
        if (v.isVariable()) used.insert(v.name());
    Substitution s;
    size_t k = 0;
    auto fresh = [&](const Term& v) {
        if (s.contains(v)) return;
        std::string n;
        do n = "W" + std::to_string(k++);
        while (used.count(n));
        s.set(v, Term::variable(n));
    };
    for (const auto& v : variablesOf(rule.body())) fresh(v);
    for (const auto& v : variablesOf(rule.head())) fresh(v);
    return TGD(s.apply(rule.body()), s.apply(rule.head()));
}

class PieceSearch {
public:
    PieceSearch(const ConjunctiveQuery& q, const TGD& rule) : q_(q), rule_(renameApart(rule, q)) {
        for (const auto& t : q_.head)
            if (t.isVariable()) answer_.insert(t);
        for (const auto& v : q_.variables()) queryVars_.insert(v);
        existentials_.insert(rule_.existentials().begin(), rule_.existentials().end());
        for (size_t i = 0; i < q_.body.size(); ++i)
            for (const auto& t : q_.body[i].args)
                if (t.isVariable()) occurrences_[t].push_back(i);
    }

    std::vector<PieceResult> run() {
        for (size_t i = 0; i < q_.body.size(); ++i)
            for (size_t j = 0; j < rule_.head().size(); ++j) {
                if (!compatible(i, j)) continue;
                std::vector<int> assign(q_.body.size(), -1);
                assign[i] = static_cast<int>(j);
                explore(assign);
            }
        return std::move(results_);
    }

private:
    bool compatible(size_t i, size_t j) const {
        const Atom& a = q_.body[i];
        const Atom& h = rule_.head()[j];
        return a.predicate == h.predicate && a.args.size() == h.args.size();
    }

    int rank(const Term& t) const {
        if (answer_.count(t)) return 0;
        if (queryVars_.count(t)) return 1;
        return 2;
    }

    void explore(const std::vector<int>& assign) {
        if (!visited_.insert(assign).second) return;
        detail::TermUnifier uf([this](const Term& t) { return rank(t); });
        for (size_t i = 0; i < assign.size(); ++i)
            if (assign[i] >= 0 && !uf.unifyAtoms(q_.body[i], rule_.head()[assign[i]])) return;
        std::vector<size_t> needed;
        for (const auto& [rep, members] : uf.classes()) {
            size_t exist = 0;
            bool tainted = rep.isConstant();
            for (const auto& m : members) {
                if (existentials_.count(m))
                    ++exist;
                else if (answer_.count(m) || (!queryVars_.count(m) && !m.isConstant()))
                    tainted = true;
            }
            if (exist == 0) continue;
            if (exist > 1 || tainted) return;
            for (const auto& m : members) {
                auto it = occurrences_.find(m);
                if (it == occurrences_.end()) continue;
                for (size_t i : it->second)
                    if (assign[i] < 0 && std::find(needed.begin(), needed.end(), i) == needed.end()) needed.push_back(i);
            }
        }
        if (!needed.empty()) {
            size_t i = *std::min_element(needed.begin(), needed.end());
            for (size_t j = 0; j < rule_.head().size(); ++j) {
                if (!compatible(i, j)) continue;
                auto next = assign;
                next[i] = static_cast<int>(j);
                explore(next);
            }
            return;
        }
        emit(assign, uf);
        for (size_t i = 0; i < assign.size(); ++i) {
            if (assign[i] >= 0) continue;
            for (size_t j = 0; j < rule_.head().size(); ++j) {
                if (!compatible(i, j)) continue;
                auto next = assign;
                next[i] = static_cast<int>(j);
                explore(next);
            }
        }
    }

    void emit(const std::vector<int>& assign, detail::TermUnifier& uf) {
        Substitution s = uf.substitution();
        PieceResult r;
        r.query.head = s.apply(q_.head);
        for (size_t i = 0; i < assign.size(); ++i) {
            if (assign[i] >= 0)
                r.piece.push_back(i);
            else
                r.query.body.push_back(s.apply(q_.body[i]));
        }
        for (const auto& a : rule_.body()) r.query.body.push_back(s.apply(a));
        r.unifier = s;
        results_.push_back(std::move(r));
    }

    const ConjunctiveQuery& q_;
    TGD rule_;
    std::set<Term> answer_, queryVars_, existentials_;
    std::map<Term, std::vector<size_t>> occurrences_;
    std::set<std::vector<int>> visited_;
    std::vector<PieceResult> results_;
};

std::vector<PieceResult> rewriteOnce(const ConjunctiveQuery& q, const TGD& rule) {
    std::vector<PieceResult> out;
    std::set<std::string> keys;
    for (auto& r : PieceSearch(q, rule).run()) {
        r.query = normalizeCQ(r.query);
        if (keys.insert(toString(r.query)).second) out.push_back(std::move(r));
    }
    return out;
}

std::set<Symbol> predicateSet(const ConjunctiveQuery& q) {
    std::set<Symbol> s;
    for (const auto& a : q.body) s.insert(a.predicate);
    return s;
}

} // namespace

std::vector<ConjunctiveQuery> pieceRewritings(const ConjunctiveQuery& q, const TGD& rule) {
    std::vector<ConjunctiveQuery> out;
    for (auto& r : rewriteOnce(q, rule)) out.push_back(std::move(r.query));
    return out;
}

UnionQuery backwardRewriteUCQ(const UnionQuery& q, const std::vector<TGD>& rules, const RewriteConfig& cfg,
                              RewriteTrace* trace) {
    q.validate();
    auto cls = classifyRules(rules);
    if (!cls.linear && !cls.sourceToTarget)
        throw Error(ErrorCode::UnsupportedClass, "backward rewriting needs linear or source-to-target rules");

    std::vector<ConjunctiveQuery> kept;
    std::vector<std::set<Symbol>> preds;
    std::vector<RewriteStep> steps;
    std::set<std::string> seen;

    // Skips a disjunct already seen or equivalent to a kept one.
    auto admit = [&](const ConjunctiveQuery& c) -> bool {
        if (!seen.insert(toString(c)).second) return false;
        auto ps = predicateSet(c);
        for (size_t i = 0; i < kept.size(); ++i) {
            if (ps != preds[i]) continue;
            if (equivalentCQ(c, kept[i])) return false;
        }
        if (kept.size() >= cfg.maxDisjuncts)
            throw Error(ErrorCode::SaturationBudget,
                        "rewriting exceeds " + std::to_string(cfg.maxDisjuncts) + " disjuncts");
        kept.push_back(c);
        preds.push_back(std::move(ps));
        return true;
    };

    for (const auto& d : q.disjuncts) admit(normalizeCQ(d));
    for (size_t next = 0; next < kept.size(); ++next) {
        for (size_t ri = 0; ri < rules.size(); ++ri) {
            ConjunctiveQuery current = kept[next];
            for (auto& r : rewriteOnce(current, rules[ri])) {
                if (!admit(r.query)) continue;
                steps.push_back(RewriteStep{next, ri, r.piece, r.unifier, kept.size() - 1});
            }
        }
    }

    UnionQuery out;
    out.arity = q.arity;
    for (size_t i = 0; i < kept.size(); ++i) {
        bool redundant = false;
        if (cfg.minimize)
            for (size_t j = 0; j < kept.size() && !redundant; ++j) {
                if (i == j) continue;
                if (!std::includes(preds[i].begin(), preds[i].end(), preds[j].begin(), preds[j].end())) continue;
                if (!containsCQ(kept[i], UnionQuery(kept[j]))) continue;
                // Equivalent pairs keep the earlier disjunct.
                redundant = j < i || !containsCQ(kept[j], UnionQuery(kept[i]));
            }
        if (!redundant) out.disjuncts.push_back(kept[i]);
    }
    if (trace) {
        trace->disjuncts = kept;
        trace->steps = std::move(steps);
        trace->final = out;
    }
    return out;
}

} // namespace mondet
