// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "builders.hpp"
#include "code_oracles.hpp"
#include "corpus_fixtures.hpp"
#include "mondet/chase.hpp"
#include "mondet/corpus.hpp"
#include "mondet/datalog.hpp"
#include "mondet/decomposition.hpp"
#include "mondet/determinacy.hpp"
#include "mondet/error.hpp"
#include "mondet/homomorphism.hpp"
#include "mondet/rewrite.hpp"
#include "mondet/treecode.hpp"
#include "oracles.hpp"

using namespace mondet;
using namespace testkit;

namespace {

// Runtime limits in seconds.
constexpr double kLimitConstraints = 1.0;
constexpr double kLimitFc = 5.0;
constexpr double kLimitBackwardMap = 60.0;
constexpr double kLimitHalting = 60.0;

// Suite sizes.
constexpr size_t kAutomata = 120;
constexpr size_t kInstancesPerAutomaton = 20;
constexpr size_t kRewriteTriples = 100;
constexpr size_t kRewriteChaseSteps = 500;
constexpr int kFullChaseInstances = 50;
constexpr int kRoundTrips = 100;
constexpr size_t kMinCurated = 20;
constexpr size_t kFuzzedMachines = 10;
constexpr size_t kTilingDepth = 5;

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    void require(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

ViewDefinition View(const std::string& name, const std::string& head, const std::string& body) {
    return ViewDefinition(Symbol(name), UCQ(head, body));
}

DatalogProgram cycleQuery() {
    return Prog({"Reach(X,Y) :- R(X,Y)", "Reach(X,Y) :- Reach(X,Z), R(Z,Y)", "Goal :- Reach(X,X)"}, "Goal");
}

double seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string timing(double took, double limit) {
    std::ostringstream s;
    s.precision(3);
    s << took << "s (limit " << limit << "s)";
    return s.str();
}

// Certain answers from a saturated chase, restricted to constant tuples.
std::optional<TupleSet> chaseAnswers(const Instance& d, const std::vector<TGD>& rules, const UnionQuery& q,
                                     size_t steps) {
    ChaseConfig cfg;
    cfg.maxSteps = steps;
    auto ch = chase(d, rules, cfg);
    if (!ch.saturated()) return std::nullopt;
    TupleSet out;
    for (const auto& t : bruteEval(q, ch.instance))
        if (std::all_of(t.begin(), t.end(), [](const Term& x) { return x.isConstant(); })) out.insert(t);
    return out;
}

Instance bruteImage(const Instance& inst, const ViewSet& views) {
    Instance out;
    for (const auto& v : views.views())
        for (const auto& t : bruteEval(v.ucq, inst)) out.add(Atom(v.name, t));
    return out;
}

bool bruteSatisfies(const Instance& inst, const std::vector<TGD>& rules) {
    for (const auto& r : rules)
        for (const auto& h : bruteHomomorphisms(r.body(), inst)) {
            Substitution s;
            for (const auto& [k, v] : h) s.bind(k, v);
            if (bruteHomomorphisms(s.apply(r.head()), inst).empty()) return false;
        }
    return true;
}

// Counterexample check by brute-force evaluation only.
bool oracleAccepts(const MonDetProblem& p, const Counterexample& c) {
    if (!bruteImage(c.i1, p.views).isSubsetOf(bruteImage(c.i2, p.views))) return false;
    if (!bruteEval(p.ucq(), c.i1).count(c.tuple)) return false;
    if (bruteEval(p.ucq(), c.i2).count(c.tuple)) return false;
    if (c.certification == Certification::Certified)
        return bruteSatisfies(c.i1, p.rules) && bruteSatisfies(c.i2, p.rules);
    return true;
}

Outcome constraintsExample() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    MonDetProblem p{UnionQuery(CQ("", "R(X,X)")), ViewSet({View("V", "X,Y", "R(X,Y) | S(X,Y)")}),
                    Rs({"S(X,X) -> R(X,X)"})};
    Verdict v = decide(p);
    o.require(v.kind == VerdictKind::Determined, std::string("verdict ") + verdictKindName(v.kind));
    o.require(v.method == "decideFull", "method " + v.method);

    ViewImageRewriting vi = viewImageRewriting(p.ucq(), p.views, p.rules);
    o.require(vi.status == ViewImageStatus::Ok, std::string("view image ") + viewImageStatusName(vi.status));
    UnionQuery expanded = expandViews(vi.rewriting, p.views);
    UnionQuery target = expandViews(UnionQuery(CQ("", "V(X,X)")), p.views);
    o.require(containsUCQ(expanded, target) && containsUCQ(target, expanded),
              "rewriting " + toString(vi.rewriting) + " differs from V(x,x)");

    BruteForceResult b = bruteForceMondet(p, 2);
    o.require(!b.found, "brute force found a counterexample");
    double took = seconds(start);
    o.require(took < kLimitConstraints, "slow: " + timing(took, kLimitConstraints));
    if (o.ok) o.detail = "DETERMINED via decideFull, " + std::to_string(b.models) + " models, " +
                         timing(took, kLimitConstraints);
    return o;
}

Outcome finiteControllability() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    MonDetProblem p{cycleQuery(), ViewSet({View("V", "", "R(X,Y)")}), {}};
    Verdict none = searchCounterexample(p);
    o.require(none.kind == VerdictKind::NotDetermined && none.counterexample &&
                  none.counterexample->certification == Certification::Certified,
              std::string("no rules: ") + verdictKindName(none.kind));
    if (none.counterexample) o.require(!checkCounterexample(p, *none.counterexample), "no rules: check failed");

    p.rules = Rs({"R(X,Y) -> R(Y,Z)"});
    Verdict uid = searchCounterexample(p);
    o.require(uid.kind == VerdictKind::NotDetermined && uid.counterexample &&
                  uid.counterexample->certification == Certification::Candidate,
              std::string("with UID: ") + verdictKindName(uid.kind));
    if (uid.counterexample) o.require(!checkCounterexample(p, *uid.counterexample), "with UID: check failed");
    double took = seconds(start);
    o.require(took < kLimitFc, "slow: " + timing(took, kLimitFc));
    if (o.ok) o.detail = "CERTIFIED without rules, CANDIDATE with UID, " + timing(took, kLimitFc);
    return o;
}

Outcome backwardMapping() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    BackwardMapTally t = backwardMapSuite(11, kAutomata, kInstancesPerAutomaton);
    double took = seconds(start);
    o.require(t.pairs >= kAutomata * kInstancesPerAutomaton,
              "only " + std::to_string(t.pairs) + " automaton/instance pairs");
    o.require(t.agreeEnumeration == t.pairs, std::to_string(t.pairs - t.agreeEnumeration) +
                                                 " disagreements, first: " + t.firstDisagreement);
    o.require(took < kLimitBackwardMap, "slow: " + timing(took, kLimitBackwardMap));
    if (o.ok)
        o.detail = std::to_string(t.agreeEnumeration) + "/" + std::to_string(t.pairs) + " agree (" +
                   std::to_string(t.positives) + " positive), " + timing(took, kLimitBackwardMap);
    return o;
}

Outcome rewritingContract() {
    Outcome o;
    Rng rng(41);
    std::vector<PredSpec> preds{{"R", 2}, {"S", 1}, {"T", 2}};
    size_t saturating = 0, agree = 0;
    for (int iter = 0; saturating < kRewriteTriples && iter < 3000; ++iter) {
        auto d = randomInstance(rng, preds, 3, 1 + iter % 5);
        std::vector<TGD> sigma;
        size_t n = 1 + rng() % 3;
        for (size_t i = 0; i < n; ++i) sigma.push_back(randomLinearTGD(rng, preds, 1 + rng() % 2));
        auto q = UnionQuery(randomCQ(rng, preds, 1 + rng() % 3, 3, rng() % 2));
        auto got = evalQuery(backwardRewriteUCQ(q, sigma), d);
        auto expect = chaseAnswers(d, sigma, q, kRewriteChaseSteps);
        if (!expect) continue;
        ++saturating;
        if (got == *expect)
            ++agree;
        else
            o.fail("mismatch on " + toString(q) + " over " + toString(d));
    }
    o.require(saturating == kRewriteTriples, "only " + std::to_string(saturating) + " saturating triples");
    if (o.ok) o.detail = std::to_string(agree) + "/" + std::to_string(saturating) + " triples agree";
    return o;
}

DatalogProgram asProgram(const std::vector<TGD>& rules) {
    std::vector<DatalogRule> out;
    for (const auto& r : rules)
        for (const auto& h : r.head()) out.push_back(DatalogRule{h, r.body()});
    return DatalogProgram(out, out.front().head.predicate);
}

Outcome chaseDatalog() {
    Outcome o;
    Rng rng(21);
    std::vector<PredSpec> preds{{"R", 2}, {"S", 1}, {"T", 2}};
    int equal = 0;
    for (int iter = 0; iter < kFullChaseInstances; ++iter) {
        auto in = randomInstance(rng, preds, 3, 1 + iter % 6);
        std::vector<TGD> rules;
        for (int r = 0; r < 3; ++r) rules.push_back(randomFullTGD(rng, preds, 1 + (iter + r) % 2));
        auto res = chase(in, rules);
        if (!res.saturated()) {
            o.fail("chase did not saturate on " + toString(in));
            continue;
        }
        Instance fix = evalDatalog(asProgram(rules), in);
        Instance naive = naiveFixpoint(in, rules);
        if (res.instance == fix && fix == naive)
            ++equal;
        else
            o.fail("fact sets differ on " + toString(in));
    }
    if (o.ok) o.detail = std::to_string(equal) + "/" + std::to_string(kFullChaseInstances) + " fact sets equal";
    return o;
}

Outcome treeCodeRoundTrip() {
    Outcome o;
    Rng rng(7);
    int good = 0;
    for (int trial = 0; trial < kRoundTrips; ++trial) {
        auto [inst, td] = randomDecomposed(rng, 3, 7);
        size_t r = 2 + trial % 3;
        std::optional<size_t> k;
        if (trial % 2) k = std::max<size_t>(1, td.width()) + 1;
        o.require(td.width() <= 3 && !checkDecomposition(inst, td), "bad decomposition in trial " + std::to_string(trial));
        TreeCode code = encode(inst, td, r, k);
        if (isomorphic(decode(code), inst))
            ++good;
        else
            o.fail("round trip failed on " + toString(inst));
    }
    if (o.ok) o.detail = std::to_string(good) + "/" + std::to_string(kRoundTrips) + " isomorphic";
    return o;
}

bool conflict(VerdictKind a, VerdictKind b) {
    return a != VerdictKind::Unknown && b != VerdictKind::Unknown && a != b;
}

Outcome crossProcedure() {
    Outcome o;
    std::vector<MonDetProblem> suite{
        {UnionQuery(CQ("", "R(X,X)")), ViewSet({View("V", "X,Y", "R(X,Y) | S(X,Y)")}), Rs({"S(X,X) -> R(X,X)"})},
        {UnionQuery(CQ("", "R(X,X)")), ViewSet({View("V", "X,Y", "R(X,Y) | S(X,Y)")}), {}},
        {UnionQuery(CQ("", "R(X,X)")), ViewSet({View("V", "", "R(X,Y)")}), {}},
        {UnionQuery(CQ("X", "R(X,Y), S(Y)")), ViewSet({View("V", "X,Y", "R(X,Y)"), View("W", "X", "S(X)")}), {}},
        {UnionQuery(CQ("X", "S(X)")), ViewSet({View("V", "X,Y", "R(X,Y)")}), Rs({"R(X,Y) -> S(X)"})},
    };
    Rng rng(53);
    std::vector<PredSpec> preds{{"R", 2}, {"S", 1}};
    auto sigma = Rs({"R(X,Y) -> S(Y)", "R(X,X) -> S(X)"});
    for (int iter = 0; iter < 40; ++iter) {
        ViewSet views;
        for (size_t i = 0; i < 1 + rng() % 2; ++i)
            views.add(ViewDefinition(Symbol("V" + std::to_string(i)),
                                     UnionQuery(randomCQ(rng, preds, 1 + rng() % 2, 2, rng() % 3))));
        suite.push_back({UnionQuery(randomCQ(rng, preds, 1 + rng() % 2, 2, 0)), views, sigma});
    }
    std::vector<std::function<Verdict(const MonDetProblem&)>> procedures{
        [](const MonDetProblem& p) { return decideFull(p); },
        [](const MonDetProblem& p) { return searchCounterexample(p); },
        [](const MonDetProblem& p) { return decideLinearCQ(p); }};
    size_t certified = 0, decided = 0;
    for (const auto& p : suite) {
        std::vector<Verdict> vs;
        for (auto run : procedures) {
            try {
                vs.push_back(run(p));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::UnsupportedClass) throw;
            }
        }
        o.require(vs.size() >= 2 && vs.front().method == "decideFull", "decideFull does not apply to " + toString(p.ucq()));
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j)
                if (conflict(vs[i].kind, vs[j].kind))
                    o.fail(vs[i].method + " and " + vs[j].method + " conflict on " + toString(p.ucq()));
        decided += vs.front().kind != VerdictKind::Unknown;
        for (const auto& v : vs)
            if (v.counterexample && v.counterexample->certification == Certification::Certified) {
                ++certified;
                if (auto why = checkCounterexample(p, *v.counterexample))
                    o.fail(v.method + " counterexample rejected: " + *why);
                else if (!oracleAccepts(p, *v.counterexample))
                    o.fail(v.method + " counterexample rejected by brute force");
            }
    }
    o.require(suite.size() >= kMinCurated, "suite too small");
    if (o.ok)
        o.detail = std::to_string(suite.size()) + " problems, " + std::to_string(decided) + " decided, " +
                   std::to_string(certified) + " certified counterexamples checked";
    return o;
}

bool isCellFact(const Atom& a) {
    const std::string& n = a.predicate.name();
    return n.rfind("Cell_", 0) == 0 || n.rfind("Head_", 0) == 0;
}

Outcome turingCorpus() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    MonDetProblem halting = genTM(haltingMachine());
    SearchBudget b;
    b.unfoldDepth = 3;
    Verdict v = searchCounterexample(halting, b);
    double took = seconds(start);
    o.require(v.kind == VerdictKind::NotDetermined && v.counterexample &&
                  v.counterexample->certification == Certification::Certified,
              std::string("halting machine: ") + verdictKindName(v.kind));
    if (v.counterexample) o.require(!checkCounterexample(halting, *v.counterexample), "halting: check failed");
    o.require(took < kLimitHalting, "halting machine slow: " + timing(took, kLimitHalting));

    Verdict loop = searchCounterexample(genTM(loopingMachine()), b);
    o.require(loop.kind == VerdictKind::Unknown, std::string("looping machine: ") + verdictKindName(loop.kind));

    std::mt19937 rng(5);
    size_t runs = 0;
    for (size_t i = 0; i < kFuzzedMachines; ++i) {
        TMSpec m = randomMachine(rng);
        MonDetProblem p = genTM(m);
        std::vector<TGD> noBad;
        for (const auto& r : p.rules)
            if (r.head().front().predicate.name() != "First") noBad.push_back(r);
        for (size_t len = 2; len <= 4; ++len) {
            TMRun run = runTM(m, len);
            Instance expected;
            for (size_t t = 1; t <= run.cells.size(); ++t)
                for (size_t s = 1; s <= len; ++s)
                    expected.add(Atom(cellPredicate(run.cells[t - 1][s - 1]), {tmElement(s), tmElement(t)}));
            ChaseResult res = chase(tmApproximation(len), noBad);
            Instance got;
            for (const auto& f : res.instance.facts())
                if (isCellFact(f)) got.add(f);
            o.require(res.saturated() && got == expected,
                      "machine " + std::to_string(i) + " length " + std::to_string(len) + ": cells differ");
            ++runs;
        }
    }
    if (o.ok)
        o.detail = "halting CERTIFIED in " + timing(took, kLimitHalting) + ", looping UNKNOWN, " +
                   std::to_string(runs) + " chase/CellAt runs agree";
    return o;
}

Outcome tilingCorpus() {
    Outcome o;
    std::vector<TilingSpec> specs{
        tilingSpec({"a"}, {}),
        tilingSpec({"a"}, {{0, 0, Orientation::Horizontal}}),
        tilingSpec({"a"}, {{0, 0, Orientation::Horizontal}, {0, 0, Orientation::Vertical}}),
        tilingSpec({"a", "b"}, {{0, 1, Orientation::Vertical}}),
        tilingSpec({"a", "b", "c"}, {{0, 1, Orientation::Horizontal}, {2, 0, Orientation::Vertical}})};
    size_t prefixes = 0;
    for (size_t si = 0; si < specs.size(); ++si) {
        const auto& spec = specs[si];
        std::string tag = "spec " + std::to_string(si);
        MonDetProblem p = genTiling(spec, TilingMode::CQ);
        o.require(classifyRules(p.rules).uid, tag + ": rules are not all UIDs");
        RuleClassification ucq = classifyRules(genTiling(spec, TilingMode::UCQ).rules);
        o.require(ucq.linear && ucq.frontierOne, tag + ": UCQ-mode rules are not linear frontier-one");
        const ConjunctiveQuery& qfree = p.views.views()[0].ucq.disjuncts[0];
        CanonicalDatabase db = canonicalDatabase(p.ucq().disjuncts[0]);
        for (size_t depth = 0; depth <= kTilingDepth; ++depth) {
            ChaseResult res = chase(db.instance, p.rules, ChaseConfig{2 * depth, 2 * depth, std::nullopt});
            auto chain = [&](const std::string& pred, const std::string& start) {
                std::vector<Term> out{*db.freeze.get(Term::variable(start))};
                for (bool grown = true; grown;) {
                    grown = false;
                    for (const auto& f : res.instance.facts())
                        if (f.predicate.name() == pred && f.args[0] == out.back()) {
                            out.push_back(f.args[1]);
                            grown = true;
                            break;
                        }
                }
                return out;
            };
            std::vector<Term> xs = chain("Axis_x", "X0"), ys = chain("Axis_y", "Y0");
            std::set<Tuple> expected;
            for (size_t n = 0; n + 1 < xs.size(); ++n)
                for (size_t m = 0; m + 1 < ys.size(); ++m) expected.insert({xs[n], xs[n + 1], ys[m], ys[m + 1]});
            std::set<Tuple> images;
            bool pinned = true;
            for (const auto& h : findHomomorphisms(qfree.body, res.instance)) {
                images.insert(h.apply(std::vector<Term>(qfree.head.begin(), qfree.head.begin() + 4)));
                for (const auto& v : qfree.variables()) {
                    const std::string& n = v.name();
                    if ((n == "V0" || (n[0] == 'P' && n.size() > 1)) && h.apply(v) != *db.freeze.get(v))
                        pinned = false;
                }
            }
            std::string at = tag + " depth " + std::to_string(depth);
            o.require(xs.size() == depth + 2 && ys.size() == depth + 2, at + ": axis length");
            o.require(images == expected, at + ": images are not the axis pairs");
            o.require(pinned, at + ": fixed variables moved");
            ++prefixes;
        }
    }
    if (o.ok) o.detail = std::to_string(prefixes) + " chase prefixes match, all generated rules UIDs";
    return o;
}

} // namespace

int main() {
    std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"constraints example", constraintsExample},
        {"finite controllability example", finiteControllability},
        {"backward mapping oracle", backwardMapping},
        {"rewriting contract", rewritingContract},
        {"chase/datalog equivalence", chaseDatalog},
        {"tree-code round trip", treeCodeRoundTrip},
        {"cross-procedure consistency", crossProcedure},
        {"turing machine corpus", turingCorpus},
        {"tiling corpus", tilingCorpus},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s %zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.ok;
    }
    return failed;
}
