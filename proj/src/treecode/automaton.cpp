#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <tuple>

#include "mondet/error.hpp"
#include "mondet/treecode.hpp"

namespace mondet {

namespace {

void checkLetterAlphabet(const Letter& l, const Schema& sigma, size_t k) {
    if (auto c = letterViolation(l, k))
        throw Error(ErrorCode::Incoherent, "letter " + toString(l) + " violates condition " + std::to_string(*c), *c);
    for (const auto& f : l.facts) {
        if (!sigma.contains(f.predicate) || sigma.arity(f.predicate) != f.names.size())
            throw Error(ErrorCode::InvalidArgument, "letter uses " + f.predicate.name() + " outside the alphabet");
    }
}

const PartialInjection& mapOf(const Letter& l) { return *l.maps.begin(); }

} // namespace

void TreeAutomaton::validate() const {
    if (k == 0 || r == 0) throw Error(ErrorCode::InvalidArgument, "automaton needs positive k and r");
    for (size_t q : accepting)
        if (q >= states) throw Error(ErrorCode::InvalidArgument, "accepting state out of range");
    for (const auto& t : leaves) {
        if (t.target >= states) throw Error(ErrorCode::InvalidArgument, "transition target out of range");
        checkLetterAlphabet(t.letter, sigma, k);
    }
    for (const auto& t : internal) {
        if (t.target >= states) throw Error(ErrorCode::InvalidArgument, "transition target out of range");
        if (t.children.size() != r) throw Error(ErrorCode::InvalidArgument, "internal transition needs r children");
        for (size_t q : t.children)
            if (q >= states) throw Error(ErrorCode::InvalidArgument, "transition child out of range");
        checkLetterAlphabet(t.letter, sigma, k);
    }
}

AutomatonRun runAutomaton(const TreeAutomaton& a, const TreeCode& t) {
    a.validate();
    if (a.k != t.k || a.r != t.r)
        throw Error(ErrorCode::AlphabetMismatch, "automaton and code disagree on k or r");
    t.parents();
    for (const auto& n : t.nodes)
        for (const auto& f : n.label.facts)
            if (!a.sigma.contains(f.predicate) || a.sigma.arity(f.predicate) != f.names.size())
                throw Error(ErrorCode::AlphabetMismatch, "code uses " + f.predicate.name() + " outside the alphabet");

    std::map<Letter, std::vector<size_t>> leafBy, internalBy;
    for (size_t i = 0; i < a.leaves.size(); ++i) leafBy[a.leaves[i].letter].push_back(i);
    for (size_t i = 0; i < a.internal.size(); ++i) internalBy[a.internal[i].letter].push_back(i);

    std::vector<size_t> post;
    std::function<void(size_t)> order = [&](size_t v) {
        for (size_t c : t.nodes[v].children) order(c);
        post.push_back(v);
    };
    order(0);

    std::vector<std::vector<char>> possible(t.nodes.size(), std::vector<char>(a.states, 0));
    auto fits = [&](const InternalTransition& tr, const CodeNode& n) {
        for (size_t j = 0; j < a.r; ++j)
            if (!possible[n.children[j]][tr.children[j]]) return false;
        return true;
    };
    for (size_t v : post) {
        const auto& n = t.nodes[v];
        if (n.children.empty()) {
            if (auto it = leafBy.find(n.label); it != leafBy.end())
                for (size_t i : it->second) possible[v][a.leaves[i].target] = 1;
        } else if (auto it = internalBy.find(n.label); it != internalBy.end()) {
            for (size_t i : it->second)
                if (fits(a.internal[i], n)) possible[v][a.internal[i].target] = 1;
        }
    }

    AutomatonRun run;
    std::optional<size_t> rootState;
    for (size_t q : a.accepting)
        if (possible[0][q]) {
            rootState = q;
            break;
        }
    if (!rootState) return run;
    run.accepted = true;
    std::vector<size_t> states(t.nodes.size(), 0);
    std::function<void(size_t, size_t)> assign = [&](size_t v, size_t q) {
        states[v] = q;
        const auto& n = t.nodes[v];
        if (n.children.empty()) return;
        for (size_t i : internalBy.at(n.label)) {
            const auto& tr = a.internal[i];
            if (tr.target != q || !fits(tr, n)) continue;
            for (size_t j = 0; j < a.r; ++j) assign(n.children[j], tr.children[j]);
            return;
        }
    };
    assign(0, *rootState);
    run.states = std::move(states);
    return run;
}

DatalogProgram backwardMap(const TreeAutomaton& a, size_t k) {
    a.validate();
    if (k != a.k) throw Error(ErrorCode::AlphabetMismatch, "width differs from the automaton's");
    for (Symbol p : a.sigma.predicates()) {
        const std::string& n = p.name();
        if (n == "adom" || n == "Goal" || n.rfind("LOCAL_", 0) == 0 || (n.size() > 1 && n[0] == 'P' && std::isdigit(static_cast<unsigned char>(n[1]))))
            throw Error(ErrorCode::InvalidArgument, "predicate " + n + " clashes with a backward-map predicate");
    }

    auto x = [](size_t l) { return Term::variable("X" + std::to_string(l)); };
    std::vector<Term> xs;
    for (size_t l = 1; l <= k; ++l) xs.push_back(x(l));
    auto pName = [](size_t q, const PartialInjection& g) {
        std::string s = "P" + std::to_string(q);
        for (size_t v : g.image) s += "_" + std::to_string(v);
        return Symbol(s);
    };

    std::vector<DatalogRule> rules;
    Symbol adom("adom");
    for (Symbol p : a.sigma.predicates()) {
        size_t n = a.sigma.arity(p);
        std::vector<Term> args;
        for (size_t i = 1; i <= n; ++i) args.push_back(x(i));
        for (size_t i = 0; i < n; ++i) rules.push_back(DatalogRule{Atom(adom, {args[i]}), {Atom(p, args)}});
    }

    std::map<Letter, Symbol> local;
    auto localOf = [&](const Letter& l) {
        if (auto it = local.find(l); it != local.end()) return it->second;
        Symbol name("LOCAL_" + std::to_string(local.size()));
        local.emplace(l, name);
        std::vector<size_t> rep(k + 1);
        for (size_t i = 1; i <= k; ++i) {
            rep[i] = i;
            for (size_t j = 1; j < i; ++j)
                if (l.equalities.count({i, j})) {
                    rep[i] = j;
                    break;
                }
        }
        DatalogRule rule;
        std::vector<Term> head;
        for (size_t i = 1; i <= k; ++i) head.push_back(x(rep[i]));
        rule.head = Atom(name, head);
        for (size_t i = 1; i <= k; ++i)
            if (rep[i] == i) rule.body.push_back(Atom(adom, {x(i)}));
        for (const auto& f : l.facts) {
            std::vector<Term> args;
            for (size_t nm : f.names) args.push_back(x(rep[nm]));
            rule.body.push_back(Atom(f.predicate, args));
        }
        rules.push_back(std::move(rule));
        return name;
    };

    std::map<size_t, std::set<PartialInjection>> available;
    for (const auto& t : a.leaves) available[t.target].insert(mapOf(t.letter));
    for (const auto& t : a.internal) available[t.target].insert(mapOf(t.letter));

    for (const auto& t : a.leaves)
        rules.push_back(DatalogRule{Atom(pName(t.target, mapOf(t.letter)), xs), {Atom(localOf(t.letter), xs)}});

    for (const auto& t : a.internal) {
        std::vector<std::vector<PartialInjection>> choices;
        bool feasible = true;
        for (size_t q : t.children) {
            auto it = available.find(q);
            if (it == available.end()) {
                feasible = false;
                break;
            }
            choices.emplace_back(it->second.begin(), it->second.end());
        }
        if (!feasible) continue;
        Symbol loc = localOf(t.letter);
        Atom head(pName(t.target, mapOf(t.letter)), xs);
        std::vector<size_t> pick(a.r, 0);
        while (true) {
            DatalogRule rule;
            rule.head = head;
            for (size_t j = 0; j < a.r; ++j) {
                const auto& g = choices[j][pick[j]];
                std::vector<Term> args;
                for (size_t l = 1; l <= k; ++l)
                    args.push_back(Term::variable("Y" + std::to_string(j + 1) + "_" + std::to_string(l)));
                for (size_t l = 1; l <= k; ++l)
                    if (g.defined(l)) args[g(l) - 1] = x(l);
                rule.body.push_back(Atom(pName(t.children[j], g), args));
            }
            rule.body.push_back(Atom(loc, xs));
            rules.push_back(std::move(rule));
            size_t j = 0;
            while (j < a.r && ++pick[j] == choices[j].size()) pick[j++] = 0;
            if (j == a.r) break;
        }
    }

    for (size_t q : a.accepting)
        if (auto it = available.find(q); it != available.end())
            for (const auto& g : it->second) rules.push_back(DatalogRule{Atom(Symbol("Goal"), {}), {Atom(pName(q, g), xs)}});

    return DatalogProgram(std::move(rules), Symbol("Goal"), 0);
}

TreeAutomaton approxAutomaton(const DatalogProgram& p) {
    const auto& rules = p.huRules();
    size_t k = 1, r = 2;
    std::vector<std::map<Term, size_t>> localNames;
    for (const auto& rule : rules) {
        std::map<Term, size_t> names;
        auto add = [&](const Atom& at) {
            for (const auto& t : at.args) {
                if (t.isConstant()) throw Error(ErrorCode::InvalidArgument, "approximation automaton needs constant-free rules");
                names.emplace(t, names.size() + 1);
            }
        };
        add(rule.head);
        for (const auto& b : rule.body) {
            if (!p.isHuIdb(b.predicate) && b.args.empty())
                throw Error(ErrorCode::InvalidArgument, "approximation automaton needs non-nullary EDB atoms");
            add(b);
        }
        k = std::max(k, names.size());
        r = std::max(r, rule.body.size());
        localNames.push_back(std::move(names));
    }

    TreeAutomaton a;
    a.k = k;
    a.r = r;
    for (Symbol e : p.edbPredicates()) a.sigma.declare(e, p.schema().arity(e));

    // A state is an IDB predicate with the parent's names of its arguments;
    // the root state has no parent. State 0 pads short child lists.
    using Key = std::tuple<Symbol, bool, std::vector<size_t>>;
    std::map<Key, size_t> ids;
    std::vector<Key> keys;
    auto stateOf = [&](const Key& key) {
        auto [it, fresh] = ids.emplace(key, keys.size() + 1);
        if (fresh) keys.push_back(key);
        return it->second;
    };
    a.leaves.push_back(LeafTransition{discreteLetter(k, PartialInjection::empty(k)), 0});
    size_t root = stateOf(Key{p.goal(), true, {}});
    a.accepting.insert(root);

    for (size_t done = 0; done < keys.size(); ++done) {
        Key key = keys[done];
        size_t state = done + 1;
        const auto& [pred, isRoot, binding] = key;
        for (size_t ri = 0; ri < rules.size(); ++ri) {
            const auto& rule = rules[ri];
            if (rule.head.predicate != pred) continue;
            const auto& names = localNames[ri];
            PartialInjection g = PartialInjection::empty(k);
            bool ok = true;
            if (!isRoot) {
                for (size_t i = 0; ok && i < binding.size(); ++i) {
                    size_t from = binding[i], to = names.at(rule.head.args[i]);
                    if (g.image[from - 1] != 0 && g.image[from - 1] != to) ok = false;
                    g.image[from - 1] = to;
                }
                ok = ok && g.injective();
            }
            if (!ok) continue;
            std::set<CodeFact> facts;
            std::vector<size_t> children;
            for (const auto& b : rule.body) {
                std::vector<size_t> ns;
                for (const auto& t : b.args) ns.push_back(names.at(t));
                if (p.isHuIdb(b.predicate))
                    children.push_back(stateOf(Key{b.predicate, false, ns}));
                else
                    facts.insert(CodeFact{b.predicate, ns});
            }
            Letter letter = discreteLetter(k, g, std::move(facts));
            if (children.empty()) {
                a.leaves.push_back(LeafTransition{std::move(letter), state});
            } else {
                children.resize(r, 0);
                a.internal.push_back(InternalTransition{std::move(children), std::move(letter), state});
            }
        }
    }
    a.states = keys.size() + 1;
    return a;
}

} // namespace mondet
