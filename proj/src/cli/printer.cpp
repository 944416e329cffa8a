#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"

namespace mondet {

using namespace dsl_detail;

std::string printTerm(const Term& t) {
    if (t.isNull()) return "_" + std::to_string(t.id());
    std::string n = t.name();
    if (t.isVariable()) return isVariableName(n) ? n : "X_" + n;
    if (isConstantName(n)) return n;
    std::string q = "'";
    for (char c : n) {
        if (c == '\'' || c == '\\') q += '\\';
        q += c;
    }
    return q + "'";
}

namespace {

std::string terms(const std::vector<Term>& ts) {
    std::string s = "(";
    for (size_t i = 0; i < ts.size(); ++i) {
        if (i) s += ", ";
        s += printTerm(ts[i]);
    }
    return s + ")";
}

std::string queryText(const char* keyword, const QueryDecl& q) {
    std::string s = std::string(keyword) + " " + q.name + terms(q.head) + " :=";
    if (q.isProgram()) return s + " program " + q.program + ".";
    for (size_t i = 0; i < q.ucq->disjuncts.size(); ++i) {
        const auto& c = q.ucq->disjuncts[i];
        s += i ? "\n    | " : " ";
        if (c.head != q.head) s += terms(c.head) + " ";
        s += printAtoms(c.body);
    }
    return s + ".";
}

const char* moveName(Move m) {
    switch (m) {
    case Move::Left: return "L";
    case Move::Stay: return "S";
    case Move::Right: return "R";
    }
    return "?";
}

std::string join(const std::vector<std::string>& ws) {
    std::string s;
    for (const auto& w : ws) s += " " + w;
    return s;
}

std::string machineText(const MachineDecl& m) {
    std::ostringstream out;
    out << "machine " << machineKindName(m.kind()) << " {\n";
    if (auto* tm = std::get_if<TMSpec>(&m.spec)) {
        out << "  alphabet" << join(tm->alphabet) << ".\n";
        out << "  blank " << tm->blank << ".\n  left " << tm->left << ".\n  right " << tm->right << ".\n";
        out << "  states" << join(tm->states) << ".\n";
        out << "  start " << tm->start << ".\n  end " << tm->end << ".\n";
        for (const auto& d : tm->delta)
            out << "  delta " << d.state << " " << d.read << " -> " << d.next << " " << d.write << " "
                << moveName(d.move) << ".\n";
    } else if (auto* ca = std::get_if<CASpec>(&m.spec)) {
        out << "  states " << ca->states << ".\n";
        for (const auto& t : ca->transitions) {
            out << "  rule";
            for (size_t s : t.from) out << " " << s;
            out << " -> " << t.to << ".\n";
        }
        out << "  target " << ca->target << ".\n";
    } else {
        const auto& ts = std::get<TilingSpec>(m.spec);
        out << "  tiles" << join(ts.tiles) << ".\n";
        for (const auto& f : ts.forbidden)
            out << "  forbid " << ts.tiles[f.first] << " " << ts.tiles[f.second] << " "
                << (f.orientation == Orientation::Horizontal ? "horizontal" : "vertical") << ".\n";
        if (ts.initial) out << "  initial " << ts.tiles[*ts.initial] << ".\n";
    }
    out << "}";
    return out.str();
}

} // namespace

std::string printAtom(const Atom& a) {
    return a.predicate.name() + (a.args.empty() ? std::string() : terms(a.args));
}

std::string printAtoms(const std::vector<Atom>& atoms) {
    std::string s;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) s += ", ";
        s += printAtom(atoms[i]);
    }
    return s;
}

std::string printTgd(const TGD& r) {
    return (r.body().empty() ? std::string("->") : printAtoms(r.body()) + " ->") + " " + printAtoms(r.head());
}

std::string printRule(const DatalogRule& r) { return printAtom(r.head) + " :- " + printAtoms(r.body); }

std::string printInstance(const Instance& inst) {
    std::string s;
    for (const auto& f : inst.facts()) s += "fact " + printAtom(f) + ".\n";
    return s;
}

std::string printProblem(const ProblemFile& f) {
    std::ostringstream out;
    auto section = [&, first = true]() mutable {
        if (!first) out << "\n";
        first = false;
    };
    if (!f.preds.empty()) {
        section();
        for (const auto& p : f.preds) out << "pred " << p.name << "/" << p.arity << ".\n";
    }
    if (!f.facts.empty()) {
        section();
        for (const auto& d : f.facts) out << "fact " << printAtom(d.fact) << ".\n";
    }
    if (!f.tgds.empty()) {
        section();
        for (const auto& t : f.tgds) out << "tgd " << printTgd(t.rule) << ".\n";
    }
    for (const auto& p : f.programs) {
        section();
        out << "program " << p.name << " {\n";
        for (const auto& r : p.rules) out << "  " << printRule(r) << ".\n";
        out << "  goal " << p.goal << ".\n}\n";
    }
    if (!f.views.empty()) {
        section();
        for (const auto& v : f.views) out << queryText("view", v) << "\n";
    }
    if (!f.queries.empty()) {
        section();
        for (const auto& q : f.queries) out << queryText("query", q) << "\n";
    }
    for (const auto& m : f.machines) {
        section();
        out << machineText(m) << "\n";
    }
    return out.str();
}

namespace {

void declareAtoms(std::map<std::string, size_t>& base, const std::set<std::string>& skip,
                  const std::vector<Atom>& atoms) {
    for (const auto& a : atoms)
        if (!skip.count(a.predicate.name())) base.emplace(a.predicate.name(), a.arity());
}

bool distinctVariables(const std::vector<Term>& ts) {
    std::set<Term> seen;
    for (const auto& t : ts)
        if (!t.isVariable() || !seen.insert(t).second) return false;
    return true;
}

// Disjuncts whose heads are distinct variables are renamed onto the
// declaration head; the others keep their own head.
QueryDecl queryDecl(const std::string& name, const UnionQuery& q) {
    QueryDecl d;
    d.name = name;
    if (!q.disjuncts.empty() && distinctVariables(q.disjuncts.front().head))
        d.head = q.disjuncts.front().head;
    else
        for (size_t i = 0; i < q.arity; ++i) d.head.push_back(Term::variable("X" + std::to_string(i)));
    std::set<Term> headVars(d.head.begin(), d.head.end());
    UnionQuery u;
    u.arity = q.arity;
    for (const auto& c : q.disjuncts) {
        if (c.head == d.head || !distinctVariables(c.head)) {
            u.disjuncts.push_back(c);
            continue;
        }
        Substitution s;
        for (size_t i = 0; i < c.head.size(); ++i) s.set(c.head[i], d.head[i]);
        std::set<Term> used = headVars;
        for (const auto& v : variablesOf(c.body)) {
            if (s.contains(v)) continue;
            Term t = v;
            for (size_t n = 0; used.count(t); ++n) t = Term::variable(v.name() + "_" + std::to_string(n));
            used.insert(t);
            s.set(v, t);
        }
        u.disjuncts.emplace_back(d.head, s.apply(c.body));
    }
    d.ucq = u;
    return d;
}

ProgramDecl programDecl(const std::string& name, const DatalogProgram& p) {
    ProgramDecl d;
    d.name = name;
    d.rules = p.rules();
    d.goal = p.goal().name();
    return d;
}

} // namespace

ProblemFile problemFile(const MonDetProblem& p) {
    ProblemFile f;
    std::map<std::string, size_t> base;
    Schema schema = p.baseSchema();
    for (auto s : schema.predicates()) base.emplace(s.name(), schema.arity(s));
    auto addProgram = [&](const std::string& name, const DatalogProgram& prog) {
        std::set<std::string> idb;
        for (auto s : prog.idbPredicates()) idb.insert(s.name());
        for (const auto& r : prog.rules()) declareAtoms(base, idb, r.body);
        f.programs.push_back(programDecl(name, prog));
    };
    for (const auto& v : p.views.views()) {
        if (v.program) {
            std::string prog = "P_" + v.name.name();
            addProgram(prog, *v.program);
            QueryDecl d;
            d.name = v.name.name();
            for (size_t i = 0; i < v.arity(); ++i) d.head.push_back(Term::variable("X" + std::to_string(i)));
            d.program = prog;
            f.views.push_back(d);
        } else {
            f.views.push_back(queryDecl(v.name.name(), v.ucq));
        }
    }
    if (p.isUCQ()) {
        f.queries.push_back(queryDecl("Q", p.ucq()));
    } else {
        addProgram("P_Q", p.program());
        QueryDecl d;
        d.name = "Q";
        for (size_t i = 0; i < p.program().goalArity(); ++i) d.head.push_back(Term::variable("X" + std::to_string(i)));
        d.program = "P_Q";
        f.queries.push_back(d);
    }
    for (const auto& r : p.rules) f.tgds.push_back({r, {}, {}});
    for (const auto& [name, arity] : base) f.preds.push_back({name, arity, {}});
    return f;
}

namespace {

// Extends a variable bijection so that a maps onto b termwise.
bool matchTerms(const std::vector<Term>& a, const std::vector<Term>& b, std::map<Term, Term>& fwd,
                std::map<Term, Term>& back) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].isVariable() != b[i].isVariable()) return false;
        if (!a[i].isVariable()) {
            if (a[i] != b[i]) return false;
            continue;
        }
        auto [f, fnew] = fwd.emplace(a[i], b[i]);
        auto [r, rnew] = back.emplace(b[i], a[i]);
        if (f->second != b[i] || r->second != a[i]) return false;
    }
    return true;
}

bool matchAtoms(const std::vector<Atom>& a, const std::vector<Atom>& b, std::map<Term, Term>& fwd,
                std::map<Term, Term>& back) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].predicate != b[i].predicate || !matchTerms(a[i].args, b[i].args, fwd, back)) return false;
    return true;
}

bool sameQuery(const QueryDecl& a, const QueryDecl& b) {
    if (a.name != b.name || a.program != b.program || a.isProgram() != b.isProgram()) return false;
    if (a.head.size() != b.head.size()) return false;
    if (a.isProgram()) return true;
    if (a.ucq->disjuncts.size() != b.ucq->disjuncts.size()) return false;
    for (size_t i = 0; i < a.ucq->disjuncts.size(); ++i) {
        std::map<Term, Term> fwd, back;
        const auto& x = a.ucq->disjuncts[i];
        const auto& y = b.ucq->disjuncts[i];
        if (!matchTerms(x.head, y.head, fwd, back) || !matchAtoms(x.body, y.body, fwd, back)) return false;
    }
    return true;
}

} // namespace

bool alphaEquivalent(const ProblemFile& a, const ProblemFile& b) {
    auto sizes = [](const ProblemFile& f) {
        return std::vector<size_t>{f.preds.size(), f.facts.size(), f.tgds.size(), f.views.size(),
                                   f.queries.size(), f.programs.size(), f.machines.size()};
    };
    if (sizes(a) != sizes(b)) return false;
    for (size_t i = 0; i < a.preds.size(); ++i)
        if (a.preds[i].name != b.preds[i].name || a.preds[i].arity != b.preds[i].arity) return false;
    for (size_t i = 0; i < a.facts.size(); ++i)
        if (a.facts[i].fact != b.facts[i].fact) return false;
    for (size_t i = 0; i < a.tgds.size(); ++i) {
        std::map<Term, Term> fwd, back;
        const auto& x = a.tgds[i].rule;
        const auto& y = b.tgds[i].rule;
        if (!matchAtoms(x.body(), y.body(), fwd, back) || !matchAtoms(x.head(), y.head(), fwd, back)) return false;
    }
    for (size_t i = 0; i < a.programs.size(); ++i) {
        const auto& x = a.programs[i];
        const auto& y = b.programs[i];
        if (x.name != y.name || x.goal != y.goal || x.rules.size() != y.rules.size()) return false;
        for (size_t k = 0; k < x.rules.size(); ++k) {
            std::map<Term, Term> fwd, back;
            if (!matchAtoms({x.rules[k].head}, {y.rules[k].head}, fwd, back) ||
                !matchAtoms(x.rules[k].body, y.rules[k].body, fwd, back))
                return false;
        }
    }
    for (size_t i = 0; i < a.views.size(); ++i)
        if (!sameQuery(a.views[i], b.views[i])) return false;
    for (size_t i = 0; i < a.queries.size(); ++i)
        if (!sameQuery(a.queries[i], b.queries[i])) return false;
    for (size_t i = 0; i < a.machines.size(); ++i)
        if (machineText(a.machines[i]) != machineText(b.machines[i])) return false;
    return true;
}

} // namespace mondet
