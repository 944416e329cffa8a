#include <gtest/gtest.h>

#include <functional>

#include "corpus_fixtures.hpp"
#include "mondet/corpus.hpp"
#include "mondet/error.hpp"
#include "mondet/homomorphism.hpp"
#include "oracles.hpp"

using namespace mondet;
using namespace testkit;

namespace {

ErrorCode codeOf(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

bool isCellFact(const Atom& a) {
    const std::string& n = a.predicate.name();
    return n.rfind("Cell_", 0) == 0 || n.rfind("Head_", 0) == 0;
}

std::vector<TGD> withoutBadRules(const std::vector<TGD>& rules) {
    std::vector<TGD> out;
    for (const auto& r : rules)
        if (r.head().front().predicate.name() != "First") out.push_back(r);
    return out;
}

// Rules of group (II): everything but the grid and acceptance rules.
std::vector<TGD> transitionRules(const MonDetProblem& p) {
    return std::vector<TGD>(p.rules.begin() + 4, p.rules.end() - 1);
}

CASpec figureCA() {
    CASpec s;
    s.states = 4;
    s.transitions = {{{0, 0}, 2}, {{0, 0, 0}, 3}};
    s.target = 3;
    return s;
}

// Nothing ever produces T2.
CASpec unreachableCA() {
    CASpec s;
    s.states = 3;
    s.transitions = {{{0, 0}, 1}, {{0, 0, 0}, 0}, {{1, 0}, 0}, {{0, 0, 1}, 1}, {{1, 0, 0}, 1}, {{0, 1, 0}, 0}};
    s.target = 2;
    return s;
}

} // namespace

// ---- Cellular automata ----

TEST(Cellular, RejectsNondeterminism) {
    CASpec s = figureCA();
    s.transitions.push_back({{0, 0}, 1});
    EXPECT_EQ(codeOf([&] { genCellular(s); }), ErrorCode::NondeterministicSpec);
    s.transitions.back() = {{0, 0}, 2};
    EXPECT_NO_THROW(genCellular(s));
    s.transitions.back() = {{0}, 2};
    EXPECT_EQ(codeOf([&] { genCellular(s); }), ErrorCode::InvalidArgument);
}

TEST(Cellular, ClassificationLinearOrFrontierOne) {
    std::mt19937 rng(3);
    for (int i = 0; i < 5; ++i) {
        MonDetProblem p = genCellular(randomCA(rng, 3));
        auto c = classifyRules(p.rules);
        EXPECT_TRUE(c.linearOrFrontierOne);
        for (size_t r = 0; r < 4; ++r) EXPECT_TRUE(c.perRule[r].linear);
        for (size_t r = 4; r + 1 < p.rules.size(); ++r) {
            EXPECT_TRUE(c.perRule[r].frontierOne);
            EXPECT_TRUE(c.perRule[r].full);
        }
        EXPECT_TRUE(c.perRule.back().linear);
        EXPECT_TRUE(p.isUCQ());
        EXPECT_EQ(p.ucq().disjuncts.size(), 1u);
        EXPECT_TRUE(p.views.allCQ());
        EXPECT_NO_THROW(p.validate());
    }
}

TEST(Cellular, SimulatorBlankReachableAtZero) {
    CASpec s;
    s.states = 2;
    s.transitions = {{{0, 0}, 0}, {{0, 0, 0}, 0}};
    s.target = 0;
    CAReport r = simulateCA(s, 5);
    ASSERT_TRUE(r.reachedAt);
    EXPECT_EQ(*r.reachedAt, 0u);
    EXPECT_FALSE(r.provablyUnreachable);
}

TEST(Cellular, SimulatorFigureRows) {
    CAReport r = simulateCA(figureCA(), 3);
    EXPECT_EQ(r.rows[1][0], 2u);
    EXPECT_EQ(r.rows[1][1], 3u);
    EXPECT_EQ(r.rows[1][4], 3u);
    EXPECT_FALSE(r.rows[2][0].has_value());
    ASSERT_TRUE(r.reachedAt);
    EXPECT_EQ(*r.reachedAt, 1u);
}

TEST(Cellular, SimulatorProvesUnreachable) {
    CAReport r = simulateCA(unreachableCA(), 20);
    EXPECT_FALSE(r.reachedAt);
    EXPECT_TRUE(r.provablyUnreachable);
}

// Chasing a finite grid with the transition rules reproduces the simulator
// on every cell whose light cone fits in the grid, and nothing else.
TEST(Cellular, GridChaseMatchesSimulator) {
    std::mt19937 rng(17);
    std::vector<CASpec> specs{figureCA()};
    for (int i = 0; i < 8; ++i) specs.push_back(randomCA(rng, 3));
    const size_t w = 5, h = 4;
    for (const auto& spec : specs) {
        MonDetProblem p = genCellular(spec);
        ChaseResult res = chase(caGrid(w, h), transitionRules(p));
        ASSERT_TRUE(res.saturated());
        CAReport sim = simulateCA(spec, h);
        Instance expected;
        for (size_t t = 0; t < h; ++t)
            for (size_t x = 0; x + t < w; ++x)
                if (sim.rows[t][x]) expected.add(Atom(caStatePredicate(*sim.rows[t][x]), {caPoint(x, t)}));
        Instance got;
        for (const auto& f : res.instance.facts())
            if (f.predicate.name()[0] == 'T') got.add(f);
        EXPECT_TRUE(got == expected);
    }
}

// A reachable target fires the acceptance rule on the grid prefix, and a
// positive check on a prefix is conclusive for CQ views.
TEST(Cellular, ReachableTargetIsDetermined) {
    for (size_t target : {0, 2, 3}) {
        CASpec s = figureCA();
        s.target = target;
        ASSERT_TRUE(simulateCA(s, 2).reachedAt);
        SearchBudget b;
        b.chase = ChaseConfig{24, 24, std::nullopt};
        EXPECT_EQ(searchCounterexample(genCellular(s), b).kind, VerdictKind::Determined) << target;
    }
}

TEST(Cellular, UnreachableTargetGivesCandidate) {
    SearchBudget b;
    b.chase = ChaseConfig{24, 24, std::nullopt};
    MonDetProblem p = genCellular(unreachableCA());
    Verdict v = searchCounterexample(p, b);
    ASSERT_EQ(v.kind, VerdictKind::NotDetermined);
    ASSERT_TRUE(v.counterexample);
    EXPECT_EQ(v.counterexample->certification, Certification::Candidate);
    EXPECT_FALSE(checkCounterexample(p, *v.counterexample));
}

// ---- Tilings ----

TEST(Tiling, RejectsEmptyTileset) {
    EXPECT_EQ(codeOf([] { genTiling(TilingSpec{}, TilingMode::CQ); }), ErrorCode::EmptyTileset);
    EXPECT_EQ(codeOf([] { genTiling(TilingSpec{}, TilingMode::UCQ); }), ErrorCode::EmptyTileset);
    TilingSpec s = tilingSpec({"a"}, {{0, 1, Orientation::Vertical}});
    EXPECT_EQ(codeOf([&] { genTiling(s, TilingMode::CQ); }), ErrorCode::InvalidArgument);
}

TEST(Tiling, NetCliqueSize) {
    TilingSpec s = tilingSpec({"a", "b"}, {{0, 1, Orientation::Horizontal}, {1, 1, Orientation::Vertical}});
    MonDetProblem p = genTiling(s, TilingMode::CQ);
    std::set<Term> nodes;
    size_t atoms = 0;
    for (const auto& a : p.ucq().disjuncts[0].body)
        if (a.predicate.name() == "Net") {
            ++atoms;
            nodes.insert(a.args.begin(), a.args.end());
            EXPECT_NE(a.args[0], a.args[1]);
        }
    EXPECT_EQ(nodes.size(), 3u);
    EXPECT_EQ(atoms, 6u);
}

TEST(Tiling, CQModeShape) {
    TilingSpec s = tilingSpec({"a", "b", "c"}, {{0, 1, Orientation::Horizontal}});
    MonDetProblem p = genTiling(s, TilingMode::CQ);
    EXPECT_EQ(p.ucq().disjuncts.size(), 1u);
    EXPECT_TRUE(p.ucq().isBoolean());
    ASSERT_EQ(p.views.size(), 1u);
    EXPECT_EQ(p.views.views()[0].ucq.disjuncts.size(), 4u);
    EXPECT_EQ(p.views.views()[0].arity(), 5u);
    EXPECT_EQ(p.rules.size(), 2u);
    EXPECT_TRUE(classifyRules(p.rules).uid);
    EXPECT_NO_THROW(p.validate());
    // Q_start contributes one GridSource and one atom per axis.
    CanonicalDatabase db = canonicalDatabase(p.ucq().disjuncts[0]);
    EXPECT_EQ(db.instance.withPredicate(Symbol("GridSource")).size(), 1u);
    EXPECT_EQ(db.instance.withPredicate(Symbol("Axis_x")).size(), 1u);
    EXPECT_EQ(db.instance.withPredicate(Symbol("Axis_y")).size(), 1u);
}

TEST(Tiling, UCQModeShape) {
    TilingSpec s = tilingSpec({"a", "b"}, {{0, 1, Orientation::Horizontal}, {1, 1, Orientation::Vertical}});
    s.initial = 0;
    MonDetProblem p = genTiling(s, TilingMode::UCQ);
    EXPECT_EQ(p.ucq().disjuncts.size(), 1u + 2u + 1u);
    auto c = classifyRules(p.rules);
    EXPECT_TRUE(c.linear);
    EXPECT_TRUE(c.frontierOne);
    EXPECT_FALSE(c.uid);
    // S, V_YSucc, V_XSucc, V_Origin, one per tile, V_HA, V_VA.
    EXPECT_EQ(p.views.size(), 4u + 2u + 2u);
    EXPECT_EQ(p.views.find(Symbol("S"))->ucq.disjuncts.size(), 3u);
    EXPECT_NO_THROW(p.validate());
}

// The images of (x0,x1,y0,y1) under homomorphisms of Q_free into a chase
// prefix are exactly the pairs of consecutive axis elements, and the v
// variables always map to their own frozen constants.
TEST(Tiling, QFreeImagesAreAxisPairs) {
    std::vector<TilingSpec> specs{
        tilingSpec({"a"}, {}),
        tilingSpec({"a"}, {{0, 0, Orientation::Horizontal}}),
        tilingSpec({"a"}, {{0, 0, Orientation::Horizontal}, {0, 0, Orientation::Vertical}}),
        tilingSpec({"a", "b"}, {{0, 1, Orientation::Vertical}}),
        tilingSpec({"a", "b", "c"}, {{0, 1, Orientation::Horizontal}, {2, 0, Orientation::Vertical}})};
    for (const auto& spec : specs) {
        MonDetProblem p = genTiling(spec, TilingMode::CQ);
        const ConjunctiveQuery& qfree = p.views.views()[0].ucq.disjuncts[0];
        CanonicalDatabase db = canonicalDatabase(p.ucq().disjuncts[0]);
        for (size_t depth = 0; depth <= 5; ++depth) {
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
            EXPECT_EQ(xs.size(), depth + 2);
            EXPECT_EQ(ys.size(), depth + 2);
            std::set<Tuple> expected;
            for (size_t n = 0; n + 1 < xs.size(); ++n)
                for (size_t m = 0; m + 1 < ys.size(); ++m) expected.insert({xs[n], xs[n + 1], ys[m], ys[m + 1]});

            std::set<Tuple> images;
            for (const auto& h : findHomomorphisms(qfree.body, res.instance)) {
                images.insert(h.apply(std::vector<Term>(qfree.head.begin(), qfree.head.begin() + 4)));
                for (const auto& v : qfree.variables()) {
                    const std::string& n = v.name();
                    if (n == "V0" || (n[0] == 'P' && n.size() > 1))
                        EXPECT_EQ(h.apply(v), *db.freeze.get(v));
                }
            }
            EXPECT_EQ(images, expected) << "depth " << depth;
        }
    }
}

TEST(Tiling, UnfaithfulDisjunctsDoNotMapIntoChase) {
    std::vector<TilingSpec> specs{tilingSpec({"a"}, {}), tilingSpec({"a", "b"}, {{0, 1, Orientation::Vertical}}),
                                  tilingSpec({"a", "b"}, {{0, 0, Orientation::Horizontal}, {1, 1, Orientation::Vertical}})};
    for (const auto& spec : specs) {
        MonDetProblem p = genTiling(spec, TilingMode::CQ);
        ChaseResult res = chase(canondb(p.ucq().disjuncts[0]), p.rules, ChaseConfig{10, 10, std::nullopt});
        const auto& ds = p.views.views()[0].ucq.disjuncts;
        for (size_t i = 1; i < ds.size(); ++i) EXPECT_FALSE(hasHomomorphism(ds[i].body, res.instance));
        EXPECT_TRUE(hasHomomorphism(ds[0].body, res.instance));
    }
}

namespace {

// The unfaithful test for tiling f: one V_chose_{f(n,m)} witness per cell.
Instance unfaithfulTest(const MonDetProblem& p, const std::vector<std::vector<size_t>>& f) {
    const auto& view = p.views.views()[0].ucq;
    auto xs = [](size_t i) { return Term::constant("xs" + std::to_string(i)); };
    auto ys = [](size_t i) { return Term::constant("ys" + std::to_string(i)); };
    Instance ut;
    for (size_t m = 0; m < f.size(); ++m)
        for (size_t n = 0; n < f[m].size(); ++n) {
            const ConjunctiveQuery& d = view.disjuncts[1 + f[m][n]];
            Substitution s;
            s.set(d.head[0], xs(n));
            s.set(d.head[1], xs(n + 1));
            s.set(d.head[2], ys(m));
            s.set(d.head[3], ys(m + 1));
            for (size_t k = 4; k < d.head.size(); ++k) s.set(d.head[k], Term::constant("vs" + std::to_string(k)));
            for (const auto& v : d.body)
                for (const auto& t : v.args)
                    if (t.isVariable() && !s.contains(t))
                        s.set(t, Term::constant("v_" + std::to_string(n) + "_" + std::to_string(m)));
            ut.addAll(s.apply(d.body));
        }
    return ut;
}

void forAllTilings(size_t tiles, size_t w, size_t h, const std::function<void(const std::vector<std::vector<size_t>>&)>& f) {
    std::vector<std::vector<size_t>> g(h, std::vector<size_t>(w, 0));
    std::function<void(size_t)> rec = [&](size_t cell) {
        if (cell == w * h) return f(g);
        for (size_t t = 0; t < tiles; ++t) {
            g[cell / w][cell % w] = t;
            rec(cell + 1);
        }
    };
    rec(0);
}

} // namespace

// Q maps into an unfaithful test exactly when its tiling has a forbidden pair.
TEST(Tiling, QDetectsInvalidTilings) {
    std::vector<TilingSpec> specs{
        tilingSpec({"a"}, {{0, 0, Orientation::Horizontal}, {0, 0, Orientation::Vertical}}),
        tilingSpec({"a", "b"}, {{0, 1, Orientation::Horizontal}}),
        tilingSpec({"a", "b"}, {{0, 0, Orientation::Vertical}, {1, 0, Orientation::Horizontal}}),
        tilingSpec({"a", "b"}, {})};
    for (const auto& spec : specs) {
        MonDetProblem p = genTiling(spec, TilingMode::CQ);
        for (auto [w, h] : {std::pair<size_t, size_t>{2, 2}, {3, 2}})
            forAllTilings(spec.tiles.size(), w, h, [&](const std::vector<std::vector<size_t>>& f) {
                EXPECT_EQ(holds(p.ucq(), unfaithfulTest(p, f)), !tilingValid(spec, f));
            });
    }
}

namespace {

// View facts V(x_n, x_{n+1}, y_m, y_{m+1}, vs...) over a w x h window.
Instance gridViewImage(const MonDetProblem& p, size_t w, size_t h) {
    size_t extra = p.views.views()[0].arity() - 4;
    Instance j;
    for (size_t n = 0; n < w; ++n)
        for (size_t m = 0; m < h; ++m) {
            Tuple t{Term::constant("xs" + std::to_string(n)), Term::constant("xs" + std::to_string(n + 1)),
                    Term::constant("ys" + std::to_string(m)), Term::constant("ys" + std::to_string(m + 1))};
            for (size_t k = 0; k < extra; ++k) t.push_back(Term::constant("vs" + std::to_string(k)));
            j.add(Atom(p.views.views()[0].name, t));
        }
    return j;
}

} // namespace

TEST(Tiling, EveryChoiceSatisfiesQWithoutValidTiling) {
    TilingSpec none = tilingSpec({"a"}, {{0, 0, Orientation::Horizontal}, {0, 0, Orientation::Vertical}});
    ASSERT_FALSE(simulateTiling(none, 2).validBySize[1]);
    MonDetProblem p = genTiling(none, TilingMode::CQ);
    auto all = backVAll(gridViewImage(p, 2, 2), p.views, 1000);
    EXPECT_EQ(all.size(), 16u);
    for (const auto& inst : all) EXPECT_TRUE(holds(p.ucq(), inst));

    MonDetProblem free = genTiling(tilingSpec({"a"}, {}), TilingMode::CQ);
    size_t failing = 0;
    for (const auto& inst : backVAll(gridViewImage(free, 2, 2), free.views, 1000))
        failing += !holds(free.ucq(), inst);
    EXPECT_EQ(failing, 1u);
}

TEST(Tiling, Simulator) {
    TilingReport one = simulateTiling(tilingSpec({"a"}, {}), 4);
    for (bool b : one.validBySize) EXPECT_TRUE(b);

    TilingReport none =
        simulateTiling(tilingSpec({"a"}, {{0, 0, Orientation::Horizontal}, {0, 0, Orientation::Vertical}}), 3);
    EXPECT_EQ(none.validBySize, (std::vector<bool>{true, false, false}));

    TilingSpec checker = tilingSpec({"a", "b"}, {{0, 0, Orientation::Horizontal}, {1, 1, Orientation::Horizontal},
                                                 {0, 0, Orientation::Vertical}, {1, 1, Orientation::Vertical}});
    checker.initial = 1;
    TilingReport c = simulateTiling(checker, 4);
    for (size_t n = 0; n < 4; ++n) {
        EXPECT_TRUE(c.validBySize[n]);
        EXPECT_TRUE(c.validWithInitialBySize[n]);
        ASSERT_TRUE(c.witnesses[n]);
        EXPECT_TRUE(tilingValid(checker, *c.witnesses[n]));
    }
}

// ---- Turing machines ----

TEST(Turing, Validation) {
    TMSpec m = haltingMachine();
    m.delta.push_back({"start", "Blank", "start", "Blank", Move::Right});
    EXPECT_EQ(codeOf([&] { genTM(m); }), ErrorCode::NondeterministicSpec);
    m = haltingMachine();
    m.delta[0].write = "Blank";
    EXPECT_EQ(codeOf([&] { genTM(m); }), ErrorCode::InvalidArgument);
    m = haltingMachine();
    m.delta[0].move = Move::Left;
    EXPECT_EQ(codeOf([&] { genTM(m); }), ErrorCode::InvalidArgument);
    m = haltingMachine();
    m.delta.push_back({"end", "Blank", "end", "Blank", Move::Stay});
    EXPECT_EQ(codeOf([&] { genTM(m); }), ErrorCode::InvalidArgument);
}

TEST(Turing, Classification) {
    MonDetProblem p = genTM(haltingMachine());
    EXPECT_TRUE(classifyRules(p.rules).full);
    ASSERT_FALSE(p.isUCQ());
    EXPECT_TRUE(classifyDatalog(p.program()).mdl);
    EXPECT_EQ(p.program().goalArity(), 0u);
    EXPECT_EQ(p.views.size(), 2u);
    EXPECT_TRUE(p.views.allCQ());
    for (const auto& v : p.views.views()) {
        EXPECT_EQ(v.arity(), 1u);
        EXPECT_EQ(v.ucq.disjuncts[0].body.size(), 1u);
    }
    EXPECT_NO_THROW(p.validate());
}

TEST(Turing, SimulatorHaltingMachine) {
    TMReport r = simulateTM(haltingMachine(), 6);
    ASSERT_TRUE(r.haltingLength);
    EXPECT_EQ(*r.haltingLength, 3u);
    EXPECT_EQ(r.runs[0].outcome, TMOutcome::Running);
    EXPECT_EQ(r.runs[1].outcome, TMOutcome::Halted);
    EXPECT_EQ(r.runs[1].steps, 2u);
    EXPECT_EQ(r.runs[1].cells[2][1], (Cell{"Blank", "end"}));
    // Halted configurations persist.
    EXPECT_EQ(r.runs[3].cells[4], r.runs[3].cells[2]);
}

TEST(Turing, SimulatorLoopingMachine) {
    TMReport r = simulateTM(loopingMachine(), 10);
    EXPECT_FALSE(r.haltingLength);
    for (const auto& run : r.runs) EXPECT_EQ(run.steps, run.length - 1);
}

TEST(Turing, SimulatorStuckMachine) {
    TMSpec m = haltingMachine();
    m.delta.erase(m.delta.begin() + 1);
    TMRun run = runTM(m, 4);
    EXPECT_EQ(run.outcome, TMOutcome::Stuck);
    EXPECT_EQ(run.cells.size(), 2u);
}

// The chase of each approximation reproduces the direct run cell by cell,
// and derives First at the last element exactly when the machine is still
// running at the last time step.
TEST(Turing, ChaseMatchesCellAt) {
    std::mt19937 rng(5);
    std::vector<TMSpec> machines{haltingMachine(), loopingMachine()};
    for (int i = 0; i < 10; ++i) machines.push_back(randomMachine(rng));
    for (const auto& m : machines) {
        MonDetProblem p = genTM(m);
        std::vector<TGD> noBad = withoutBadRules(p.rules);
        for (size_t len = 2; len <= 4; ++len) {
            TMRun run = runTM(m, len);
            ASSERT_NE(run.outcome, TMOutcome::Stuck);
            Instance expected;
            for (size_t t = 1; t <= run.cells.size(); ++t)
                for (size_t s = 1; s <= len; ++s)
                    expected.add(Atom(cellPredicate(run.cells[t - 1][s - 1]), {tmElement(s), tmElement(t)}));
            ChaseResult res = chase(tmApproximation(len), noBad);
            ASSERT_TRUE(res.saturated());
            Instance got;
            for (const auto& f : res.instance.facts())
                if (isCellFact(f)) got.add(f);
            EXPECT_TRUE(got == expected) << "length " << len;

            ChaseResult full = chase(tmApproximation(len), p.rules);
            ASSERT_TRUE(full.saturated());
            EXPECT_EQ(full.instance.contains(Atom("First", {tmElement(len)})), !run.halts()) << "length " << len;
        }
    }
}

TEST(Turing, HaltingMachineCertifiedAtDepthThree) {
    MonDetProblem p = genTM(haltingMachine());
    SearchBudget b;
    b.unfoldDepth = 3;
    Verdict v = searchCounterexample(p, b);
    ASSERT_EQ(v.kind, VerdictKind::NotDetermined);
    ASSERT_TRUE(v.counterexample);
    EXPECT_EQ(v.counterexample->certification, Certification::Certified);
    EXPECT_FALSE(checkCounterexample(p, *v.counterexample));
    size_t succ = 0;
    for (const auto& a : v.counterexample->source.body) succ += a.predicate.name() == "Succ";
    EXPECT_EQ(succ, 2u);

    b.unfoldDepth = 2;
    EXPECT_EQ(searchCounterexample(p, b).kind, VerdictKind::Unknown);
}

TEST(Turing, LoopingMachineUnknown) {
    SearchBudget b;
    b.unfoldDepth = 3;
    EXPECT_EQ(searchCounterexample(genTM(loopingMachine()), b).kind, VerdictKind::Unknown);
}

// When the search certifies a counterexample, the simulator agrees that the
// machine halts at that length.
TEST(Turing, CertifiedVerdictsAgreeWithSimulator) {
    std::mt19937 rng(23);
    std::vector<TMSpec> machines{haltingMachine(), loopingMachine()};
    for (int i = 0; i < 6; ++i) machines.push_back(randomMachine(rng));
    for (const auto& m : machines) {
        SearchBudget b;
        b.unfoldDepth = 4;
        Verdict v = searchCounterexample(genTM(m), b);
        TMReport r = simulateTM(m, 4);
        if (v.kind == VerdictKind::NotDetermined) {
            ASSERT_TRUE(v.counterexample);
            EXPECT_EQ(v.counterexample->certification, Certification::Certified);
            EXPECT_TRUE(r.haltingLength);
        } else {
            EXPECT_EQ(v.kind, VerdictKind::Unknown);
            EXPECT_FALSE(r.haltingLength);
        }
    }
}
