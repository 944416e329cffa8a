#include "mondet/datalog.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "mondet/error.hpp"
#include "mondet/homomorphism.hpp"

namespace mondet {

std::string toString(const DatalogRule& r) {
    std::string s = toString(r.head) + " :- ";
    s += r.body.empty() ? std::string("true") : toString(r.body);
    return s + ".";
}

namespace {

// Class index of each position, numbered by first occurrence.
std::vector<int> shapeOf(const std::vector<Term>& args) {
    std::vector<int> shape;
    std::vector<Term> seen;
    for (const auto& t : args) {
        auto it = std::find(seen.begin(), seen.end(), t);
        if (it == seen.end()) {
            shape.push_back(static_cast<int>(seen.size()));
            seen.push_back(t);
        } else {
            shape.push_back(static_cast<int>(it - seen.begin()));
        }
    }
    return shape;
}

bool isDistinctShape(const std::vector<int>& s) {
    for (size_t i = 0; i < s.size(); ++i)
        if (s[i] != static_cast<int>(i)) return false;
    return true;
}

// Every equality of `fine` holds in `coarse`.
bool coarsens(const std::vector<int>& coarse, const std::vector<int>& fine) {
    for (size_t i = 0; i < fine.size(); ++i)
        for (size_t j = i + 1; j < fine.size(); ++j)
            if (fine[i] == fine[j] && coarse[i] != coarse[j]) return false;
    return true;
}

std::string shapedName(Symbol p, const std::vector<int>& shape) {
    if (isDistinctShape(shape)) return p.name();
    std::string s = p.name() + "_";
    for (int c : shape) s += "_" + std::to_string(c);
    return s;
}

std::vector<Term> distinctTerms(const std::vector<Term>& args) {
    std::vector<Term> out;
    for (const auto& t : args)
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return out;
}

// All equality patterns of the given length.
std::vector<std::vector<int>> allShapes(size_t n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int classes) {
        if (cur.size() == n) {
            out.push_back(cur);
            return;
        }
        for (int c = 0; c <= classes; ++c) {
            cur.push_back(c);
            rec(std::max(classes, c + 1));
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

struct UnionFind {
    std::map<Term, Term> parent;
    Term find(const Term& t) {
        auto it = parent.find(t);
        if (it == parent.end() || it->second == t) return t;
        Term r = find(it->second);
        parent[t] = r;
        return r;
    }
    void unite(const Term& a, const Term& b) {
        Term ra = find(a), rb = find(b);
        if (ra == rb) return;
        // Constants stay representatives.
        if (rb.isConstant())
            parent[ra] = rb;
        else
            parent[rb] = ra;
    }
};

} // namespace

DatalogProgram::DatalogProgram(std::vector<DatalogRule> rules, Symbol goal, std::optional<size_t> goalArity)
    : rules_(std::move(rules)), goal_(goal) {
    for (size_t i = 0; i < rules_.size(); ++i) rules_[i].source = static_cast<int>(i);
    for (const auto& r : rules_) idb_.insert(r.head.predicate);
    idb_.insert(goal_);
    for (const auto& r : rules_) {
        schema_.declare(r.head.predicate, r.head.arity(), PredicateTag::Idb);
        for (const auto& a : r.body) {
            schema_.declare(a.predicate, a.arity(), isIdb(a.predicate) ? PredicateTag::Idb : PredicateTag::Base);
        }
        auto bodyVars = variablesOf(r.body);
        for (const auto& t : r.head.args) {
            if (t.isNull()) throw Error(ErrorCode::InvalidArgument, "rule mentions a null");
            if (t.isVariable() && std::find(bodyVars.begin(), bodyVars.end(), t) == bodyVars.end())
                throw Error(ErrorCode::UnsafeRule, "head variable " + t.name() + " missing from body of " +
                                                       toString(r));
            if (t.isConstant() && r.head.predicate != goal_)
                throw Error(ErrorCode::InvalidArgument, "constant in head of IDB rule " + toString(r));
        }
    }
    if (auto info = schema_.find(goal_)) {
        goalArity_ = info->arity;
        if (goalArity && *goalArity != goalArity_)
            throw Error(ErrorCode::ArityMismatch, "goal arity disagrees with its rules");
    } else {
        goalArity_ = goalArity.value_or(0);
        schema_.declare(goal_, goalArity_, PredicateTag::Idb);
    }
    normalize();
}

std::vector<Symbol> DatalogProgram::edbPredicates() const { return schema_.predicates(PredicateTag::Base); }

void DatalogProgram::normalize() {
    // A goal used in bodies is normalized like any IDB under an internal
    // name, and the goal itself is defined by one copy rule.
    bool recursiveGoal = false;
    for (const auto& r : rules_)
        for (const auto& a : r.body)
            if (a.predicate == goal_) recursiveGoal = true;
    Symbol inner = recursiveGoal ? Symbol(goal_.name() + "__idb") : goal_;
    std::vector<DatalogRule> work = rules_;
    if (recursiveGoal) {
        auto rename = [&](Atom& a) {
            if (a.predicate == goal_) a.predicate = inner;
        };
        for (auto& r : work) {
            rename(r.head);
            for (auto& a : r.body) rename(a);
        }
        std::vector<Term> vars;
        for (size_t i = 0; i < goalArity_; ++i) vars.push_back(Term::variable("X" + std::to_string(i)));
        DatalogRule copy{Atom(goal_, vars), {Atom(inner, vars)}, -1};
        work.push_back(copy);
    }
    auto idb = [&](Symbol q) { return q == inner || isIdb(q); };

    // Available exact shapes per IDB predicate, grown to a fixpoint.
    std::map<Symbol, std::vector<std::vector<int>>> shapes;
    std::set<std::string> seenRules;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : work) {
            bool isGoalRule = r.head.predicate == goal_;
            std::vector<size_t> idbPos;
            for (size_t i = 0; i < r.body.size(); ++i)
                if (idb(r.body[i].predicate)) idbPos.push_back(i);
            std::vector<std::vector<std::vector<int>>> options;
            bool possible = true;
            for (size_t i : idbPos) {
                std::vector<std::vector<int>> opts;
                auto own = shapeOf(r.body[i].args);
                for (const auto& sh : shapes[r.body[i].predicate])
                    if (coarsens(sh, own)) opts.push_back(sh);
                if (opts.empty()) possible = false;
                options.push_back(std::move(opts));
            }
            if (!possible) continue;
            // The head's own equality pattern may be coarsened as well.
            std::vector<std::vector<int>> headOpts;
            auto headOwn = shapeOf(r.head.args);
            if (isGoalRule) {
                headOpts.push_back(headOwn);
            } else {
                for (const auto& sh : allShapes(r.head.arity()))
                    if (coarsens(sh, headOwn)) headOpts.push_back(sh);
            }
            options.push_back(headOpts);
            std::vector<size_t> choice(options.size(), 0);
            while (true) {
                UnionFind uf;
                auto identify = [&](const std::vector<Term>& args, const std::vector<int>& sh) {
                    for (size_t a = 0; a < args.size(); ++a)
                        for (size_t b = a + 1; b < args.size(); ++b)
                            if (sh[a] == sh[b]) uf.unite(args[a], args[b]);
                };
                for (size_t k = 0; k < idbPos.size(); ++k) identify(r.body[idbPos[k]].args, options[k][choice[k]]);
                identify(r.head.args, options.back()[choice.back()]);
                Substitution sigma;
                bool clash = false;
                for (const auto& v : variablesOf(r.body)) sigma.set(v, uf.find(v));
                auto checkConst = [&](const Atom& a) {
                    for (const auto& t : a.args)
                        if (t.isConstant() && uf.find(t) != t) clash = true;
                };
                for (const auto& a : r.body) checkConst(a);
                checkConst(r.head);
                bool exact = !clash;
                for (size_t k = 0; exact && k < idbPos.size(); ++k)
                    exact = shapeOf(sigma.apply(r.body[idbPos[k]].args)) == options[k][choice[k]];
                Atom head = sigma.apply(r.head);
                if (exact && !isGoalRule) exact = shapeOf(head.args) == options.back()[choice.back()];
                if (exact) {
                    DatalogRule nr;
                    nr.source = r.source;
                    if (isGoalRule) {
                        nr.head = head;
                    } else {
                        for (const auto& t : head.args)
                            if (t.isConstant())
                                throw Error(ErrorCode::InvalidArgument,
                                            "constant reaches the head of " + toString(r) + " during normalization");
                        auto sh = shapeOf(head.args);
                        auto& known = shapes[head.predicate];
                        if (std::find(known.begin(), known.end(), sh) == known.end()) {
                            known.push_back(sh);
                            changed = true;
                        }
                        nr.head = Atom(shapedName(head.predicate, sh), distinctTerms(head.args));
                    }
                    for (size_t i = 0; i < r.body.size(); ++i) {
                        Atom b = sigma.apply(r.body[i]);
                        if (idb(b.predicate)) b = Atom(shapedName(b.predicate, shapeOf(b.args)), distinctTerms(b.args));
                        nr.body.push_back(std::move(b));
                    }
                    if (seenRules.insert(toString(nr)).second) hu_.push_back(std::move(nr));
                }
                size_t k = 0;
                while (k < choice.size() && ++choice[k] == options[k].size()) choice[k++] = 0;
                if (k == choice.size()) break;
            }
        }
    }
    for (const auto& r : hu_) huIdb_.insert(r.head.predicate);
    huIdb_.insert(goal_);
}

DatalogProgram DatalogProgram::huProgram() const {
    std::vector<DatalogRule> rs = hu_;
    return DatalogProgram(rs, goal_, goalArity_);
}

std::string toString(const DatalogProgram& p) {
    std::string s;
    for (const auto& r : p.rules()) s += toString(r) + "\n";
    return s + "goal " + p.goal().name() + ".";
}

Instance evalDatalog(const DatalogProgram& p, const Instance& input) {
    Instance inst = input;
    for (Symbol q : p.schema().predicates()) {
        auto info = p.schema().find(q);
        inst.schema().declare(q, info->arity, info->tag);
    }
    const auto& rules = p.rules();
    std::vector<Matcher> matchers;
    for (const auto& r : rules) matchers.emplace_back(r.body, true);

    std::vector<Atom> delta;
    auto fire = [&](size_t ri, const std::vector<Term>& slots, std::vector<Atom>& out) {
        Substitution s = matchers[ri].toSubstitution(slots);
        Atom f = s.apply(rules[ri].head);
        if (!inst.contains(f)) out.push_back(std::move(f));
    };
    for (size_t ri = 0; ri < rules.size(); ++ri) {
        std::vector<Atom> out;
        matchers[ri].run(inst, std::vector<std::optional<Term>>{}, [&](const std::vector<Term>& slots) {
            fire(ri, slots, out);
            return true;
        });
        for (auto& f : out) delta.push_back(std::move(f));
    }
    while (true) {
        std::vector<Atom> added;
        for (auto& f : delta)
            if (inst.add(f)) added.push_back(f);
        if (added.empty()) break;
        delta.clear();
        for (const auto& f : added) {
            for (size_t ri = 0; ri < rules.size(); ++ri) {
                const auto& body = rules[ri].body;
                for (size_t i = 0; i < body.size(); ++i) {
                    if (body[i].predicate != f.predicate) continue;
                    matchers[ri].runFrom(inst, i, f, [&](const std::vector<Term>& slots) {
                        fire(ri, slots, delta);
                        return true;
                    });
                }
            }
        }
    }
    return inst;
}

TupleSet goalTuples(const DatalogProgram& p, const Instance& input) {
    Instance out = evalDatalog(p, input);
    TupleSet ts;
    for (uint32_t idx : out.withPredicate(p.goal())) ts.insert(out.facts()[idx].args);
    return ts;
}

bool evalGoal(const DatalogProgram& p, const Instance& input) { return !goalTuples(p, input).empty(); }

DatalogClassification classifyDatalog(const DatalogProgram& p) {
    DatalogClassification c;
    const auto& rules = p.rules();
    for (size_t i = 0; i < rules.size(); ++i) {
        const auto& r = rules[i];
        int idx = static_cast<int>(i);
        bool unaryHere = r.head.arity() <= 1;
        for (const auto& a : r.body)
            if (p.isIdb(a.predicate) && a.arity() > 1) unaryHere = false;
        if (!unaryHere && c.mdl) {
            c.mdl = false;
            c.mdlViolation = idx;
        }

        std::vector<Term> headVars = distinctTerms(r.head.args);
        headVars.erase(std::remove_if(headVars.begin(), headVars.end(), [](const Term& t) { return !t.isVariable(); }),
                       headVars.end());
        bool guarded = headVars.empty();
        for (const auto& a : r.body) {
            if (p.isIdb(a.predicate)) continue;
            bool all = std::all_of(headVars.begin(), headVars.end(), [&](const Term& v) {
                return std::find(a.args.begin(), a.args.end(), v) != a.args.end();
            });
            if (all) guarded = true;
        }
        if (!guarded && c.fgdlViolation < 0) c.fgdlViolation = idx;

        // Head variables connected through EDB atoms containing both ends.
        std::vector<int> comp(headVars.size());
        for (size_t a = 0; a < comp.size(); ++a) comp[a] = static_cast<int>(a);
        std::function<int(int)> root = [&](int x) { return comp[x] == x ? x : comp[x] = root(comp[x]); };
        for (const auto& a : r.body) {
            if (p.isIdb(a.predicate)) continue;
            std::vector<int> present;
            for (size_t v = 0; v < headVars.size(); ++v)
                if (std::find(a.args.begin(), a.args.end(), headVars[v]) != a.args.end())
                    present.push_back(static_cast<int>(v));
            for (size_t k = 1; k < present.size(); ++k) comp[root(present[k])] = root(present[0]);
        }
        bool connected = true;
        for (size_t v = 1; v < headVars.size(); ++v)
            if (root(static_cast<int>(v)) != root(0)) connected = false;
        if (!connected && c.ec) {
            c.ec = false;
            c.ecViolation = idx;
        }
    }
    c.fgdl = c.fgdlViolation < 0 || c.mdl;
    if (c.fgdl) c.fgdlViolation = -1;
    return c;
}

RulesAsTGDs datalogToTGDs(const DatalogProgram& p) {
    RulesAsTGDs out;
    for (const auto& r : p.rules()) out.rules.emplace_back(r.body, std::vector<Atom>{r.head});
    std::vector<Term> vars;
    for (size_t i = 0; i < p.goalArity(); ++i) vars.push_back(Term::variable("X" + std::to_string(i)));
    out.goalQuery = UnionQuery(ConjunctiveQuery(vars, {Atom(p.goal(), vars)}));
    return out;
}

} // namespace mondet
