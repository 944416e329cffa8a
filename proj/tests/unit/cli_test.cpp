#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "builders.hpp"
#include "code_oracles.hpp"
#include "corpus_fixtures.hpp"
#include "mondet/cli.hpp"
#include "mondet/dsl.hpp"
#include "oracles.hpp"

using namespace mondet;
using namespace testkit;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = runCommand(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json cliJson(std::vector<std::string> args, int expectCode) {
    args.insert(args.begin(), "--json");
    auto r = cli(args);
    EXPECT_EQ(r.code, expectCode) << r.err;
    return nlohmann::json::parse(r.out);
}

std::vector<std::string> bundledFiles() {
    std::vector<std::string> out;
    for (const char* dir : {"data/examples", "data/specs"})
        for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "mondet_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

template <typename F>
void expectDslError(const std::string& text, ErrorCode code, size_t line, size_t col, F&& check) {
    try {
        parseProblem(text);
        ADD_FAILURE() << "no error for: " << text;
    } catch (const DslError& e) {
        EXPECT_EQ(e.code(), code) << e.what();
        EXPECT_EQ(e.pos().line, line) << e.what();
        EXPECT_EQ(e.pos().col, col) << e.what();
        check(e);
    }
}

} // namespace

TEST(Parse, TgdHeadOnlyVariablesAreExistential) {
    auto f = parseProblem("pred R/2.\ntgd R(X,Y) -> R(Y,Z).");
    ASSERT_EQ(f.tgds.size(), 1u);
    const auto& r = f.tgds[0].rule;
    EXPECT_TRUE(r.isLinear());
    EXPECT_EQ(r.existentials(), std::vector<Term>{T("Z")});
    EXPECT_EQ(r.frontier(), std::vector<Term>{T("Y")});
    EXPECT_EQ(f.tgds[0].pos.line, 2u);
    EXPECT_EQ(f.tgds[0].atomPos[1].col, 15u);
}

TEST(Parse, UnionView) {
    auto f = parseProblem("pred R/2. pred S/2.\nview V(X,Y) := R(X,Y) | S(X,Y).");
    auto views = f.viewSet();
    ASSERT_EQ(views.size(), 1u);
    const auto& v = views.views()[0];
    EXPECT_EQ(v.kind(), ViewKind::UCQ);
    EXPECT_EQ(v.arity(), 2u);
    EXPECT_TRUE(equivalentUCQ(v.ucq, UCQ("X,Y", "R(X,Y) | S(X,Y)")));
}

TEST(Parse, DisjunctOwnHead) {
    auto f = parseProblem("pred R/2. pred S/1. query Q(X,Y) := R(X,Y) | (Z,Z) S(Z).");
    const auto& u = *f.query().ucq;
    EXPECT_EQ(u.disjuncts[1].head, (std::vector<Term>{T("Z"), T("Z")}));
    EXPECT_EQ(evalQuery(u, I("S(a)")), (TupleSet{{T("a"), T("a")}}));
    EXPECT_NE(printProblem(f).find("| (Z, Z) S(Z)"), std::string::npos);
    expectDslError("pred S/1.\nquery Q(X) := S(X) | (X,X) S(X).", ErrorCode::ArityMismatch, 2, 22,
                   [](const DslError&) {});
}

TEST(Parse, TermKinds) {
    auto f = parseProblem("pred R/3. fact R(a, 7, 'Big one'). fact R(_4, b, c). tgd R(X, _Y, c) -> R(X, X, X).");
    EXPECT_EQ(f.facts[0].fact.args[1], Term::constant("7"));
    EXPECT_EQ(f.facts[0].fact.args[2], Term::constant("Big one"));
    EXPECT_EQ(f.facts[1].fact.args[0], Term::null(4));
    const auto& body = f.tgds[0].rule.body()[0];
    EXPECT_TRUE(body.args[1].isVariable());
    EXPECT_TRUE(body.args[2].isConstant());
}

TEST(Parse, NullaryAtomsWithOrWithoutParentheses) {
    auto f = parseProblem("pred Goal/0. pred A/2. tgd Goal(), A(X,X) -> Goal. query Q := Goal, A(X,Y).");
    EXPECT_EQ(f.tgds[0].rule.body()[0].arity(), 0u);
    EXPECT_TRUE(f.query().ucq->isBoolean());
}

TEST(Parse, ProgramsAsQueriesAndViews) {
    auto f = parseProblem(
        "pred R/2.\n"
        "program P { T(X,Y) :- R(X,Y). T(X,Y) :- T(X,Z), R(Z,Y). goal T. }\n"
        "view VT(X,Y) := program P.\n"
        "query Q(X,Y) := program P.\n");
    auto p = f.problem();
    EXPECT_FALSE(p.isUCQ());
    EXPECT_EQ(p.arity(), 2u);
    EXPECT_EQ(p.views.views()[0].kind(), ViewKind::Datalog);
    EXPECT_EQ(goalTuples(p.program(), I("R(a,b), R(b,c)")).size(), 3u);
}

TEST(Parse, MachineBlocks) {
    auto f = parseProblemFile("data/specs/halt3.tm");
    ASSERT_EQ(f.machines.size(), 1u);
    const auto& m = std::get<TMSpec>(f.machines[0].spec);
    auto want = haltingMachine();
    EXPECT_EQ(m.alphabet, want.alphabet);
    EXPECT_EQ(m.states, want.states);
    ASSERT_EQ(m.delta.size(), want.delta.size());
    for (size_t i = 0; i < m.delta.size(); ++i) {
        EXPECT_EQ(m.delta[i].next, want.delta[i].next);
        EXPECT_EQ(m.delta[i].write, want.delta[i].write);
        EXPECT_EQ(m.delta[i].move, want.delta[i].move);
    }
    auto ca = std::get<CASpec>(parseProblemFile("data/specs/grow.ca").machines[0].spec);
    EXPECT_EQ(ca.states, 2u);
    EXPECT_EQ(ca.transitions.size(), 4u);
    auto tiling = std::get<TilingSpec>(parseProblemFile("data/specs/stripes.tiling").machines[0].spec);
    EXPECT_EQ(tiling.tiles, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(tiling.initial, std::optional<size_t>(0));
    EXPECT_FALSE(tiling.allowed(0, 0, Orientation::Horizontal));
    EXPECT_TRUE(tiling.allowed(0, 0, Orientation::Vertical));
}

TEST(ParseErrors, ArityMismatchAtPosition) {
    expectDslError("pred R/2.\nquery Q := R(X).", ErrorCode::ArityMismatch, 2, 12, [](const DslError&) {});
    expectDslError("pred R/2.\npred R/3.", ErrorCode::ArityMismatch, 2, 1, [](const DslError&) {});
}

TEST(ParseErrors, UndeclaredPredicate) {
    expectDslError("pred R/2.\ntgd R(X,Y) -> S(Y).", ErrorCode::UndeclaredPredicate, 2, 15,
                   [](const DslError& e) { EXPECT_NE(e.text().find("S"), std::string::npos); });
}

TEST(ParseErrors, ExpectedTokenReported) {
    expectDslError("pred R/2.\nview V(X) := R(X,Y)", ErrorCode::ParseError, 2, 20,
                   [](const DslError& e) { EXPECT_NE(e.text().find("expected"), std::string::npos); });
    expectDslError("pred R/2.\n  fact R(a,b", ErrorCode::ParseError, 2, 13, [](const DslError& e) {
        EXPECT_NE(e.text().find("')'"), std::string::npos) << e.text();
    });
    expectDslError("rule R(X).", ErrorCode::ParseError, 1, 1, [](const DslError&) {});
    expectDslError("pred R/2. fact R(X,a).", ErrorCode::ParseError, 1, 16, [](const DslError&) {});
    expectDslError("pred R/2. fact R(a,$).", ErrorCode::ParseError, 1, 20, [](const DslError&) {});
}

TEST(ParseErrors, SemanticErrorsCarryPositions) {
    expectDslError("pred R/2.\nview V(X,Z) := R(X,Y).", ErrorCode::UnsafeRule, 2, 1, [](const DslError&) {});
    expectDslError("machine tm { alphabet Blank Left Right. states start end.\n"
                   " delta start Left -> end Left R. delta start Left -> start Left R. }",
                   ErrorCode::NondeterministicSpec, 1, 1, [](const DslError&) {});
    expectDslError("machine tiling { tiles. }", ErrorCode::ParseError, 1, 18, [](const DslError&) {});
    expectDslError("machine tm { delta start Blank -> end Blank Up. }", ErrorCode::ParseError, 1, 45,
                   [](const DslError&) {});
}

TEST(RoundTrip, BundledCorpusIsAFixpoint) {
    auto files = bundledFiles();
    ASSERT_GE(files.size(), 8u);
    for (const auto& path : files) {
        SCOPED_TRACE(path);
        auto f = parseProblemFile(path);
        auto printed = printProblem(f);
        auto g = parseProblem(printed);
        EXPECT_TRUE(alphaEquivalent(f, g));
        EXPECT_EQ(printProblem(g), printed);
    }
}

TEST(RoundTrip, GeneratedProblems) {
    std::vector<MonDetProblem> problems{genTM(haltingMachine()), genTM(loopingMachine())};
    Rng rng(5);
    problems.push_back(genCellular(randomCA(rng, 2)));
    auto tiles = tilingSpec({"a", "b", "c"}, {{0, 1, Orientation::Horizontal}, {2, 2, Orientation::Vertical}});
    problems.push_back(genTiling(tiles, TilingMode::CQ));
    tiles.initial = 1;
    problems.push_back(genTiling(tiles, TilingMode::UCQ));
    for (const auto& p : problems) {
        auto f = problemFile(p);
        auto g = parseProblem(printProblem(f));
        EXPECT_TRUE(alphaEquivalent(f, g));
        auto q = g.problem();
        EXPECT_EQ(q.rules, p.rules);
        EXPECT_EQ(q.views.size(), p.views.size());
        EXPECT_EQ(q.baseSchema(), p.baseSchema());
        EXPECT_EQ(q.isUCQ(), p.isUCQ());
    }
}

TEST(RoundTrip, RandomProblemsAreAlphaEquivalent) {
    Rng rng(17);
    std::vector<PredSpec> preds{{"R", 2}, {"S", 1}, {"T", 3}};
    for (int iter = 0; iter < 60; ++iter) {
        std::vector<ConjunctiveQuery> ds;
        size_t arity = rng() % 3;
        for (size_t d = 0; d < 1 + rng() % 3; ++d) ds.push_back(randomCQ(rng, preds, 1 + rng() % 3, 3, arity));
        ViewSet views;
        views.add(ViewDefinition(Symbol("V0"), UnionQuery(randomCQ(rng, preds, 1 + rng() % 2, 3, rng() % 3))));
        std::vector<TGD> rules{randomLinearTGD(rng, preds, 1 + rng() % 2), randomFullTGD(rng, preds, 2)};
        MonDetProblem p{UnionQuery(arity, ds), views, rules};
        auto f = problemFile(p);
        auto g = parseProblem(printProblem(f));
        ASSERT_TRUE(alphaEquivalent(f, g)) << printProblem(f);
        auto q = g.problem();
        ASSERT_EQ(q.ucq().disjuncts.size(), p.ucq().disjuncts.size());
        for (size_t d = 0; d < ds.size(); ++d)
            EXPECT_TRUE(equivalentCQ(q.ucq().disjuncts[d], p.ucq().disjuncts[d]));
    }
}

TEST(RoundTrip, AlphaEquivalenceDetectsChanges) {
    auto f = parseProblem("pred R/2. tgd R(X,Y) -> R(Y,Z). query Q(X) := R(X,Y).");
    EXPECT_TRUE(alphaEquivalent(f, parseProblem("pred R/2. tgd R(A,B) -> R(B,C). query Q(U) := R(U,W).")));
    EXPECT_FALSE(alphaEquivalent(f, parseProblem("pred R/2. tgd R(A,B) -> R(B,B). query Q(U) := R(U,W).")));
    EXPECT_FALSE(alphaEquivalent(f, parseProblem("pred R/2. tgd R(A,B) -> R(B,C). query Q(U) := R(W,U).")));
}

TEST(Json, TreeCodeAndAutomatonRoundTrip) {
    Rng rng(3);
    for (int iter = 0; iter < 20; ++iter) {
        auto [inst, td] = randomDecomposed(rng, 3, 5);
        auto code = encode(inst, td, 2);
        auto back = treeCodeFromJson(nlohmann::json::parse(toJson(code).dump()));
        ASSERT_EQ(back.nodes.size(), code.nodes.size());
        for (size_t i = 0; i < code.nodes.size(); ++i) {
            EXPECT_EQ(back.nodes[i].label, code.nodes[i].label);
            EXPECT_EQ(back.nodes[i].children, code.nodes[i].children);
        }
        EXPECT_TRUE(isomorphic(decode(back), inst));
        auto a = randomAutomaton(rng);
        auto b = automatonFromJson(nlohmann::json::parse(toJson(a).dump()));
        EXPECT_EQ(toJson(b), toJson(a));
        EXPECT_EQ(b.sigma, a.sigma);
    }
    EXPECT_THROW(treeCodeFromJson(nlohmann::json::parse(R"({"k": 1})")), Error);
}

TEST(Commands, ConstraintExampleDecided) {
    auto j = cliJson({"decide", "data/examples/ex_constraints.mdp"}, 0);
    EXPECT_EQ(j["verdict"], "DETERMINED");
    EXPECT_EQ(j["method"], "decideFull");
}

TEST(Commands, FiniteControllabilityExampleSearch) {
    auto j = cliJson({"search", "data/examples/ex_fc.mdp", "--unfold-depth", "2"}, 1);
    EXPECT_EQ(j["verdict"], "NOT_DETERMINED");
    EXPECT_EQ(j["certification"], "CANDIDATE");
    auto k = cliJson({"search", "data/examples/ex_fc_norules.mdp"}, 1);
    EXPECT_EQ(k["certification"], "CERTIFIED");
}

TEST(Commands, NoRewriteExampleRuns) {
    auto r = cli({"search", "data/examples/norewrite.mdp"});
    EXPECT_NE(r.code, ExitUsage) << r.err;
    EXPECT_NE(r.code, ExitUnsupported) << r.err;
    auto c = cli({"classify", "data/examples/norewrite.mdp"});
    EXPECT_EQ(c.code, 0);
    EXPECT_EQ(cli({"decide", "data/examples/norewrite.mdp"}).code, ExitUnsupported);
}

TEST(Commands, GeneratedMachineSearch) {
    auto out = scratch("halt3.mdp").string();
    ASSERT_EQ(cli({"gen", "tm", "data/specs/halt3.tm", "-o", out}).code, 0);
    auto j = cliJson({"search", out, "--unfold-depth", "3"}, 1);
    EXPECT_EQ(j["certification"], "CERTIFIED");
    auto via = searchCounterexample(genTM(haltingMachine()), SearchBudget{3});
    EXPECT_EQ(j, toJson(via));

    auto loop = scratch("loop.mdp").string();
    ASSERT_EQ(cli({"gen", "tm", "data/specs/loop.tm", "-o", loop}).code, 0);
    EXPECT_EQ(cli({"search", loop, "--unfold-depth", "3"}).code, ExitUnknown);
}

TEST(Commands, GeneratorsForAllKinds) {
    for (auto [kind, spec] : std::vector<std::pair<std::string, std::string>>{
             {"ca", "data/specs/grow.ca"}, {"tiling", "data/specs/stripes.tiling"}}) {
        auto out = scratch(kind + ".mdp").string();
        ASSERT_EQ(cli({"gen", kind, spec, "-o", out}).code, 0);
        auto j = cliJson({"classify", out}, 0);
        EXPECT_TRUE(j["rules"]["linearOrFrontierOne"].get<bool>());
    }
    auto j = cliJson({"gen", "tiling", "data/specs/stripes.tiling", "--mode", "ucq"}, 0);
    auto f = parseProblem(j["problem"].get<std::string>());
    EXPECT_EQ(f.query().ucq->disjuncts.size(), genTiling(*std::get_if<TilingSpec>(
        &parseProblemFile("data/specs/stripes.tiling").machines[0].spec), TilingMode::UCQ).ucq().disjuncts.size());
    EXPECT_EQ(cli({"gen", "tm", "data/specs/grow.ca"}).code, ExitUsage);
}

TEST(Commands, ExitCodes) {
    EXPECT_EQ(cli({}).code, ExitUsage);
    EXPECT_EQ(cli({"frobnicate"}).code, ExitUsage);
    EXPECT_EQ(cli({"search", "data/examples/ex_fc.mdp", "--unfold-depth", "many"}).code, ExitUsage);
    EXPECT_EQ(cli({"decide", "no/such/file.mdp"}).code, ExitUsage);
    auto bad = scratch("bad.mdp");
    std::ofstream(bad) << "pred R/2.\nquery Q := R(X).\n";
    auto r = cli({"decide", bad.string()});
    EXPECT_EQ(r.code, ExitUsage);
    EXPECT_NE(r.err.find("ARITY_MISMATCH: 2:12"), std::string::npos) << r.err;
    EXPECT_EQ(cli({"decide", "data/examples/ex_fc.mdp"}).code, ExitUnsupported);
    EXPECT_EQ(cli({"rewrite", "data/examples/ex_constraints.mdp", "--mode", "inverse"}).code, ExitUnsupported);
    EXPECT_EQ(cli({"brute", "data/examples/ex_constraints.mdp"}).code, ExitUnknown);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Commands, BruteForceFindsCounterexample) {
    auto j = cliJson({"brute", "data/examples/ex_fc_norules.mdp", "--domain", "2"}, 1);
    EXPECT_EQ(j["method"], "bruteForceMondet");
    ASSERT_TRUE(j.contains("counterexample"));
    auto p = parseProblemFile("data/examples/ex_fc_norules.mdp").problem();
    auto found = bruteForceMondet(p, 2);
    ASSERT_TRUE(found.counterexample);
    EXPECT_FALSE(checkCounterexample(p, *found.counterexample));
}

TEST(Commands, ChaseAndEval) {
    auto c = cliJson({"chase", "data/examples/chain.mdp", "--chase-steps", "10"}, 0);
    EXPECT_EQ(c["status"], "BUDGET_EXHAUSTED");
    EXPECT_EQ(c["steps"], 10);
    auto e = cliJson({"eval", "data/examples/chain.mdp", "--chase-steps", "10", "--views"}, 0);
    EXPECT_EQ(e["answers"], nlohmann::json::parse(R"([["a"], ["b"], ["c"]])"));
    EXPECT_FALSE(e["complete"].get<bool>());
    auto p = cliJson({"eval", "data/examples/path.mdp"}, 0);
    EXPECT_EQ(p["count"], 1);
    EXPECT_TRUE(p["complete"].get<bool>());
}

TEST(Commands, Rewrite) {
    auto v = cliJson({"rewrite", "data/examples/ex_constraints.mdp", "--mode", "views"}, 0);
    EXPECT_EQ(v["status"], "OK");
    ASSERT_EQ(v["rewriting"]["disjuncts"].size(), 1u);
    EXPECT_EQ(v["rewriting"]["disjuncts"][0]["body"], "V(V0, V0)");
    auto b = cliJson({"rewrite", "data/examples/ex_fc.mdp"}, ExitUnsupported);
    EXPECT_EQ(b["error"], "UNSUPPORTED_CLASS");
    auto bw = scratch("bw.mdp");
    std::ofstream(bw) << "pred R/2. pred S/1. tgd S(X) -> R(X,Y). query Q(X) := R(X,Y).\n";
    auto r = cliJson({"rewrite", bw.string()}, 0);
    EXPECT_EQ(r["rewriting"]["disjuncts"].size(), 2u);
}

TEST(Commands, TreeCodePipeline) {
    auto code = scratch("code.json");
    auto r = cli({"treecode", "encode", "data/examples/path.mdp"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ofstream(code) << r.out;
    auto d = cliJson({"treecode", "decode", code.string()}, 0);
    EXPECT_EQ(d["facts"].size(), 2u);
    auto aut = scratch("aut.json");
    std::ofstream(aut) << cli({"treecode", "automaton", "data/examples/path.mdp"}).out;
    auto yes = cliJson({"treecode", "backmap", aut.string(), "--eval", "data/examples/path.mdp"}, 0);
    EXPECT_TRUE(yes["holds"].get<bool>());
    auto no = cliJson({"treecode", "backmap", aut.string(), "--eval", "data/examples/ex_constraints.mdp"}, 0);
    EXPECT_FALSE(no["holds"].get<bool>());
    auto chased = cli({"treecode", "encode", "data/examples/chain.mdp", "--chase-steps", "6"});
    ASSERT_EQ(chased.code, 0) << chased.err;
    auto t = treeCodeFromJson(nlohmann::json::parse(chased.out));
    EXPECT_FALSE(coherenceViolation(t));
    EXPECT_EQ(decode(t).size(), 3u + 6u);
}

TEST(Commands, OutputIsStableAcrossRuns) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"--json", "search", "data/examples/norewrite.mdp"},
             {"--json", "decide", "data/examples/ex_constraints.mdp"},
             {"--json", "classify", "data/examples/ex_fc.mdp"},
             {"search", "data/examples/ex_fc.mdp", "--unfold-depth", "2"}}) {
        auto a = cli(args), b = cli(args);
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(a.code, b.code);
    }
}
