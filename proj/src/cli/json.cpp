#include "mondet/cli.hpp"
#include "mondet/dsl.hpp"

namespace mondet {

using nlohmann::json;

json toJson(const Instance& inst) {
    json out = json::array();
    for (const auto& f : inst.facts()) out.push_back(printAtom(f));
    return out;
}

json toJson(const Verdict& v) {
    json out;
    out["verdict"] = verdictKindName(v.kind);
    out["method"] = v.method;
    out["report"] = v.report;
    out["approximations"] = v.approximations;
    out["branches"] = v.branches;
    if (v.counterexample) {
        const auto& c = *v.counterexample;
        json cx;
        cx["certification"] = certificationName(c.certification);
        cx["i1"] = toJson(c.i1);
        cx["i2"] = toJson(c.i2);
        json tuple = json::array();
        for (const auto& t : c.tuple) tuple.push_back(printTerm(t));
        cx["tuple"] = tuple;
        cx["viewInclusion"] = c.viewInclusion;
        cx["i1Saturated"] = c.i1Saturated;
        cx["i2Saturated"] = c.i2Saturated;
        cx["i2Check"] = entailmentName(c.i2Check);
        cx["source"] = printAtoms(c.source.body);
        out["counterexample"] = cx;
        out["certification"] = certificationName(c.certification);
    }
    return out;
}

json toJson(const Letter& l) {
    json eq = json::array(), facts = json::array(), maps = json::array();
    for (const auto& [a, b] : l.equalities) eq.push_back({a, b});
    for (const auto& f : l.facts) facts.push_back({{"predicate", f.predicate.name()}, {"names", f.names}});
    for (const auto& g : l.maps) maps.push_back(g.image);
    return {{"equalities", eq}, {"facts", facts}, {"maps", maps}};
}

json toJson(const TreeCode& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) nodes.push_back({{"label", toJson(n.label)}, {"children", n.children}});
    return {{"k", t.k}, {"r", t.r}, {"nodes", nodes}};
}

json toJson(const TreeAutomaton& a) {
    json sigma = json::array();
    for (auto p : a.sigma.predicates()) sigma.push_back({{"name", p.name()}, {"arity", a.sigma.arity(p)}});
    json leaves = json::array(), internal = json::array();
    for (const auto& l : a.leaves) leaves.push_back({{"letter", toJson(l.letter)}, {"target", l.target}});
    for (const auto& t : a.internal)
        internal.push_back({{"children", t.children}, {"letter", toJson(t.letter)}, {"target", t.target}});
    return {{"sigma", sigma},  {"k", a.k}, {"r", a.r}, {"states", a.states}, {"accepting", a.accepting},
            {"leaves", leaves}, {"internal", internal}};
}

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed ") + what + ": " + e.what());
    }
}

} // namespace

Letter letterFromJson(const json& j) {
    return guarded("letter", [&] {
        Letter l;
        for (const auto& e : j.at("equalities")) l.equalities.insert({e.at(0).get<size_t>(), e.at(1).get<size_t>()});
        for (const auto& f : j.at("facts"))
            l.facts.insert({Symbol(f.at("predicate").get<std::string>()), f.at("names").get<std::vector<size_t>>()});
        for (const auto& g : j.at("maps")) l.maps.insert({g.get<std::vector<size_t>>()});
        return l;
    });
}

TreeCode treeCodeFromJson(const json& j) {
    return guarded("tree code", [&] {
        TreeCode t;
        t.k = j.at("k").get<size_t>();
        t.r = j.at("r").get<size_t>();
        for (const auto& n : j.at("nodes"))
            t.nodes.push_back({letterFromJson(n.at("label")), n.at("children").get<std::vector<size_t>>()});
        t.parents();
        return t;
    });
}

TreeAutomaton automatonFromJson(const json& j) {
    return guarded("automaton", [&] {
        TreeAutomaton a;
        for (const auto& p : j.at("sigma"))
            a.sigma.declare(Symbol(p.at("name").get<std::string>()), p.at("arity").get<size_t>());
        a.k = j.at("k").get<size_t>();
        a.r = j.at("r").get<size_t>();
        a.states = j.at("states").get<size_t>();
        a.accepting = j.at("accepting").get<std::set<size_t>>();
        for (const auto& l : j.at("leaves")) a.leaves.push_back({letterFromJson(l.at("letter")), l.at("target").get<size_t>()});
        for (const auto& t : j.at("internal"))
            a.internal.push_back({t.at("children").get<std::vector<size_t>>(), letterFromJson(t.at("letter")),
                                  t.at("target").get<size_t>()});
        a.validate();
        return a;
    });
}

} // namespace mondet
