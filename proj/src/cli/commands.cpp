#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mondet/cli.hpp"
#include "mondet/corpus.hpp"
#include "mondet/dsl.hpp"

namespace mondet {

using nlohmann::json;

int exitCodeFor(VerdictKind k) {
    switch (k) {
    case VerdictKind::Determined: return ExitDetermined;
    case VerdictKind::NotDetermined: return ExitNotDetermined;
    case VerdictKind::Unknown: return ExitUnknown;
    }
    return ExitUnknown;
}

int exitCodeFor(ErrorCode c) {
    switch (c) {
    case ErrorCode::UnsupportedClass:
    case ErrorCode::NonCqView:
    case ErrorCode::NonFullSigma:
    case ErrorCode::DatalogViewHere:
    case ErrorCode::DatalogViewUnexpandable:
    case ErrorCode::NotFrontierGuarded:
    case ErrorCode::NonBooleanQuery:
        return ExitUnsupported;
    case ErrorCode::SaturationBudget:
    case ErrorCode::FanoutLimit:
    case ErrorCode::SchemaTooLarge:
        return ExitUnknown;
    default:
        return ExitUsage;
    }
}

namespace {

struct Context {
    std::ostream& out;
    bool asJson = false;

    void emit(const json& j, const std::string& text) const {
        if (asJson) out << j.dump(2) << "\n";
        else out << text;
    }
};

// Text reports list at most this many facts per instance; JSON lists all.
constexpr size_t kTextFacts = 40;

std::string indented(const Instance& inst) {
    std::string s;
    size_t shown = std::min(inst.size(), kTextFacts);
    for (size_t i = 0; i < shown; ++i) s += "  " + printAtom(inst.facts()[i]) + "\n";
    if (shown < inst.size()) s += "  ... " + std::to_string(inst.size() - shown) + " more\n";
    return s;
}

std::string tupleText(const Tuple& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + printTerm(t[i]);
    return s + ")";
}

std::string verdictText(const Verdict& v) {
    std::ostringstream s;
    s << "verdict: " << verdictKindName(v.kind) << "\nmethod: " << v.method << "\n";
    if (v.counterexample) {
        const auto& c = *v.counterexample;
        s << "certification: " << certificationName(c.certification) << "\n";
        s << "source: " << printAtoms(c.source.body) << "\n";
        if (!c.tuple.empty()) s << "tuple: " << tupleText(c.tuple) << "\n";
        s << "I1:\n" << indented(c.i1) << "I2:\n" << indented(c.i2);
    }
    if (!v.report.empty()) s << "report: " << v.report << "\n";
    return s.str();
}

std::string readText(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json readJson(const std::string& path) {
    try {
        return json::parse(readText(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void writeText(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

json flagsJson(const RuleClassification& c) {
    return {{"linear", c.linear},       {"full", c.full},
            {"frontierGuarded", c.frontierGuarded}, {"frontierOne", c.frontierOne},
            {"uid", c.uid},             {"sourceToTarget", c.sourceToTarget},
            {"linearOrFrontierOne", c.linearOrFrontierOne}, {"rules", c.perRule.size()}};
}

// The exact procedure for the problem's class, or empty.
std::string exactProcedure(const MonDetProblem& p) {
    auto cls = classifyRules(p.rules);
    if (p.isUCQ() && p.views.allUnion() && cls.full) return "decideFull";
    if (p.isUCQ() && p.views.allCQ() && cls.linear) return "decideLinearCQ";
    return "";
}

int classify(const Context& ctx, const ProblemFile& f) {
    auto rules = f.rules();
    auto cls = classifyRules(rules);
    json j;
    j["rules"] = flagsJson(cls);
    std::ostringstream text;
    text << "rules: " << rules.size();
    for (const auto& [k, v] : j["rules"].items())
        if (v.is_boolean() && v.get<bool>()) text << " " << k;
    text << "\n";
    json views = json::array();
    ViewSet viewSet = f.viewSet();
    for (const auto& v : viewSet.views()) {
        views.push_back({{"name", v.name.name()}, {"kind", viewKindName(v.kind())}, {"arity", v.arity()}});
        text << "view " << v.name.name() << ": " << viewKindName(v.kind()) << "\n";
    }
    j["views"] = views;
    if (!f.queries.empty()) {
        auto p = f.problem();
        json q;
        if (p.isUCQ()) {
            q["kind"] = p.ucq().disjuncts.size() == 1 ? "CQ" : "UCQ";
            q["disjuncts"] = p.ucq().disjuncts.size();
        } else {
            auto d = classifyDatalog(p.program());
            q["kind"] = "DATALOG";
            q["mdl"] = d.mdl;
            q["fgdl"] = d.fgdl;
            q["ec"] = d.ec;
        }
        q["arity"] = p.arity();
        j["query"] = q;
        std::string proc = exactProcedure(p);
        j["procedure"] = proc.empty() ? "searchCounterexample" : proc;
        text << "query: " << q["kind"].get<std::string>() << " arity " << p.arity() << "\n";
        text << "procedure: " << j["procedure"].get<std::string>() << "\n";
    }
    ctx.emit(j, text.str());
    return ExitDetermined;
}

json chaseJson(const ChaseResult& r) {
    return {{"status", chaseStatusName(r.status)}, {"steps", r.stepLog.size()}, {"facts", toJson(r.instance)}};
}

int runChase(const Context& ctx, const ProblemFile& f, const ChaseConfig& cfg) {
    auto r = chase(f.instance(), f.rules(), cfg);
    std::ostringstream text;
    text << "status: " << chaseStatusName(r.status) << "\nsteps: " << r.stepLog.size() << "\n"
         << printInstance(r.instance);
    ctx.emit(chaseJson(r), text.str());
    return ExitDetermined;
}

int runEval(const Context& ctx, const ProblemFile& f, const std::optional<std::string>& queryName,
            const ChaseConfig& cfg, bool showViews) {
    Instance inst = f.instance();
    bool complete = true;
    if (!f.tgds.empty()) {
        auto r = chase(inst, f.rules(), cfg);
        complete = r.saturated();
        inst = r.instance;
    }
    auto q = f.queryValue(f.query(queryName));
    TupleSet answers = std::holds_alternative<UnionQuery>(q) ? evalQuery(std::get<UnionQuery>(q), inst)
                                                             : goalTuples(std::get<DatalogProgram>(q), inst);
    json rows = json::array();
    std::ostringstream text;
    size_t kept = 0;
    for (const auto& t : answers) {
        if (std::any_of(t.begin(), t.end(), [](const Term& x) { return x.isNull(); })) continue;
        json row = json::array();
        for (const auto& x : t) row.push_back(printTerm(x));
        rows.push_back(row);
        text << tupleText(t) << "\n";
        ++kept;
    }
    json j{{"answers", rows}, {"complete", complete}, {"count", kept}};
    text << "answers: " << kept << (complete ? "" : " (chase budget exhausted)") << "\n";
    if (showViews) {
        auto image = viewImage(inst, f.viewSet());
        j["viewImage"] = toJson(image);
        text << "view image:\n" << indented(image);
    }
    ctx.emit(j, text.str());
    return ExitDetermined;
}

std::string ucqText(const std::string& name, const UnionQuery& u) {
    auto file = problemFile(MonDetProblem{u, ViewSet(), {}});
    ProblemFile f;
    f.queries = file.queries;
    f.queries.front().name = name;
    return printProblem(f);
}

json ucqJson(const UnionQuery& u) {
    json ds = json::array();
    for (const auto& d : u.disjuncts) {
        json head = json::array();
        for (const auto& t : d.head) head.push_back(printTerm(t));
        ds.push_back({{"head", head}, {"body", printAtoms(d.body)}});
    }
    return {{"arity", u.arity}, {"disjuncts", ds}};
}

std::string programText(const std::string& name, const DatalogProgram& p) {
    std::string s = "program " + name + " {\n";
    for (const auto& r : p.rules()) s += "  " + printRule(r) + ".\n";
    return s + "  goal " + p.goal().name() + ".\n}\n";
}

json programJson(const DatalogProgram& p) {
    json rules = json::array();
    for (const auto& r : p.rules()) rules.push_back(printRule(r));
    return {{"goal", p.goal().name()}, {"rules", rules}};
}

int runRewrite(const Context& ctx, const ProblemFile& f, const std::string& mode, const ChaseConfig& cfg,
               size_t maxDisjuncts) {
    auto p = f.problem();
    RewriteConfig rc;
    rc.maxDisjuncts = maxDisjuncts;
    if (mode == "inverse") {
        auto q = p.isUCQ() ? ucqAsProgram(p.ucq()) : p.program();
        auto r = inverseRules(q, p.views, p.rules);
        ctx.emit({{"mode", mode}, {"program", programJson(r)}}, programText("Rewriting", r));
        return ExitDetermined;
    }
    if (!p.isUCQ()) throw Error(ErrorCode::UnsupportedClass, "mode " + mode + " needs a UCQ query");
    if (mode == "backward") {
        auto r = backwardRewriteUCQ(p.ucq(), p.rules, rc);
        ctx.emit({{"mode", mode}, {"rewriting", ucqJson(r)}}, ucqText("Rewriting", r));
        return ExitDetermined;
    }
    auto r = viewImageRewriting(p.ucq(), p.views, p.rules, cfg);
    json j{{"mode", mode}, {"status", viewImageStatusName(r.status)}, {"rewriting", ucqJson(r.rewriting)},
           {"reason", r.reason}};
    std::string text = "status: " + std::string(viewImageStatusName(r.status)) + "\n";
    if (!r.reason.empty()) text += "reason: " + r.reason + "\n";
    if (r.status == ViewImageStatus::Ok) text += ucqText("Rewriting", r.rewriting);
    ctx.emit(j, text);
    return r.status == ViewImageStatus::Unknown ? ExitUnknown : ExitDetermined;
}

int runVerdict(const Context& ctx, const Verdict& v) {
    ctx.emit(toJson(v), verdictText(v));
    return exitCodeFor(v.kind);
}

int runDecide(const Context& ctx, const ProblemFile& f, const SearchBudget& budget) {
    auto p = f.problem();
    std::string proc = exactProcedure(p);
    if (proc.empty())
        throw Error(ErrorCode::UnsupportedClass,
                    "no exact procedure for this class; use search for a bounded run");
    if (proc == "decideFull") {
        FullConfig cfg;
        cfg.chase = budget.chase;
        return runVerdict(ctx, decideFull(p, cfg));
    }
    return runVerdict(ctx, decideLinearCQ(p, {}, budget.chase));
}

int runBrute(const Context& ctx, const ProblemFile& f, size_t domain) {
    auto p = f.problem();
    auto r = bruteForceMondet(p, domain);
    Verdict v;
    v.method = "bruteForceMondet";
    v.kind = r.found ? VerdictKind::NotDetermined : VerdictKind::Unknown;
    v.counterexample = r.counterexample;
    v.report = std::to_string(r.models) + " models over domain " + std::to_string(domain);
    return runVerdict(ctx, v);
}

template <typename Spec>
const Spec& machineOf(const ProblemFile& f, const std::string& kind) {
    for (const auto& m : f.machines)
        if (auto* s = std::get_if<Spec>(&m.spec)) return *s;
    throw Error(ErrorCode::InvalidArgument, "the file has no machine " + kind + " block");
}

int runGen(const Context& ctx, const std::string& kind, const std::string& specPath, const std::string& outPath,
           const std::string& mode) {
    auto f = parseProblemFile(specPath);
    MonDetProblem p;
    if (kind == "tm") p = genTM(machineOf<TMSpec>(f, kind));
    else if (kind == "ca") p = genCellular(machineOf<CASpec>(f, kind));
    else if (mode == "ucq") p = genTiling(machineOf<TilingSpec>(f, kind), TilingMode::UCQ);
    else if (mode == "cq") p = genTiling(machineOf<TilingSpec>(f, kind), TilingMode::CQ);
    else throw Error(ErrorCode::InvalidArgument, "tiling mode must be cq or ucq");
    std::string text = "# generated by mondet gen " + kind + "\n" + printProblem(problemFile(p));
    auto cls = classifyRules(p.rules);
    json j{{"kind", kind}, {"rules", flagsJson(cls)}, {"views", p.views.size()}};
    if (outPath.empty()) {
        j["problem"] = text;
        ctx.emit(j, text);
    } else {
        writeText(outPath, text);
        j["output"] = outPath;
        ctx.emit(j, "wrote " + outPath + "\n");
    }
    return ExitDetermined;
}

int runEncode(const Context& ctx, const ProblemFile& f, size_t r, std::optional<size_t> k,
              std::optional<size_t> chaseSteps) {
    Instance inst = f.instance();
    TreeDecomposition td = singleBagDecomposition(inst);
    if (chaseSteps) {
        ChaseConfig cfg;
        cfg.maxSteps = *chaseSteps;
        auto res = chase(inst, f.rules(), cfg);
        td = emitDecomposition(res, td);
        inst = res.instance;
    }
    auto code = encode(inst, td, r, k);
    auto j = toJson(code);
    ctx.out << j.dump(ctx.asJson ? 2 : -1) << "\n";
    return ExitDetermined;
}

int runDecode(const Context& ctx, const std::string& path) {
    auto code = treeCodeFromJson(readJson(path));
    checkCoherent(code);
    auto inst = decode(code);
    ctx.emit({{"facts", toJson(inst)}}, printInstance(inst));
    return ExitDetermined;
}

int runBackmap(const Context& ctx, const std::string& path, const std::optional<std::string>& evalPath) {
    auto a = automatonFromJson(readJson(path));
    auto prog = backwardMap(a, a.k);
    json j{{"program", programJson(prog)}};
    std::string text = programText("BackwardMap", prog);
    if (evalPath) {
        bool holds = evalGoal(prog, parseProblemFile(*evalPath).instance());
        j["holds"] = holds;
        text += std::string("holds: ") + (holds ? "true" : "false") + "\n";
    }
    ctx.emit(j, text);
    return ExitDetermined;
}

int runAutomaton(const Context& ctx, const ProblemFile& f, const std::optional<std::string>& queryName) {
    auto q = f.queryValue(f.query(queryName));
    auto prog = std::holds_alternative<UnionQuery>(q) ? ucqAsProgram(std::get<UnionQuery>(q))
                                                      : std::get<DatalogProgram>(q);
    ctx.out << toJson(approxAutomaton(prog)).dump(ctx.asJson ? 2 : -1) << "\n";
    return ExitDetermined;
}

} // namespace

int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monotonic determinacy toolkit", "mondet"};
    app.require_subcommand(1);
    app.fallthrough();
    Context ctx{out};
    app.add_flag("--json", ctx.asJson, "Machine-readable output");
    std::function<int()> action;

    std::string file;
    std::optional<std::string> queryName;
    SearchBudget budget;
    size_t chaseSteps = 1000, chaseNulls = 1000;
    auto chaseCfg = [&] { return ChaseConfig{chaseSteps, chaseNulls, std::nullopt}; };
    auto addFile = [&](CLI::App* sub) { sub->add_option("file", file, "Problem file")->required(); };
    auto addChase = [&](CLI::App* sub) {
        sub->add_option("--chase-steps", chaseSteps, "Chase step budget");
        sub->add_option("--chase-nulls", chaseNulls, "Chase null budget");
    };

    auto* cClassify = app.add_subcommand("classify", "Classify rules, views and query");
    addFile(cClassify);
    cClassify->callback([&] { action = [&] { return classify(ctx, parseProblemFile(file)); }; });

    auto* cChase = app.add_subcommand("chase", "Chase the facts with the rules");
    addFile(cChase);
    addChase(cChase);
    cChase->callback([&] { action = [&] { return runChase(ctx, parseProblemFile(file), chaseCfg()); }; });

    bool showViews = false;
    auto* cEval = app.add_subcommand("eval", "Evaluate the query on the facts, after chasing with the rules");
    addFile(cEval);
    addChase(cEval);
    cEval->add_option("--query", queryName, "Query name");
    cEval->add_flag("--views", showViews, "Also print the view image");
    cEval->callback([&] {
        action = [&] { return runEval(ctx, parseProblemFile(file), queryName, chaseCfg(), showViews); };
    });

    std::string mode = "backward";
    size_t maxDisjuncts = 5000;
    auto* cRewrite = app.add_subcommand("rewrite", "Rewrite the query");
    addFile(cRewrite);
    addChase(cRewrite);
    cRewrite->add_option("--mode", mode, "backward, views or inverse")
        ->check(CLI::IsMember({"backward", "views", "inverse"}));
    cRewrite->add_option("--max-disjuncts", maxDisjuncts, "Disjunct budget");
    cRewrite->callback([&] {
        action = [&] { return runRewrite(ctx, parseProblemFile(file), mode, chaseCfg(), maxDisjuncts); };
    });

    auto addSearch = [&](CLI::App* sub) {
        sub->add_option("--unfold-depth", budget.unfoldDepth, "Approximation depth");
        sub->add_option("--max-leaves", budget.maxLeaves, "Leaf budget per approximation");
        sub->add_option("--chase-steps", budget.chase.maxSteps, "Chase step budget");
        sub->add_option("--chase-nulls", budget.chase.maxNewNulls, "Chase null budget");
        sub->add_option("--backv-limit", budget.backVLimit, "Witness choices per view image");
        sub->add_option("--view-unfold-depth", budget.viewUnfoldDepth, "Datalog view unfolding depth");
    };

    auto* cDecide = app.add_subcommand("decide", "Run the exact procedure for the problem's class");
    addFile(cDecide);
    cDecide->add_option("--chase-steps", budget.chase.maxSteps, "Chase step budget");
    cDecide->add_option("--chase-nulls", budget.chase.maxNewNulls, "Chase null budget");
    cDecide->callback([&] { action = [&] { return runDecide(ctx, parseProblemFile(file), budget); }; });

    auto* cSearch = app.add_subcommand("search", "Bounded counterexample search");
    addFile(cSearch);
    addSearch(cSearch);
    cSearch->callback([&] {
        action = [&] { return runVerdict(ctx, searchCounterexample(parseProblemFile(file).problem(), budget)); };
    });

    size_t domain = 2;
    auto* cBrute = app.add_subcommand("brute", "Exhaustive search over small instance pairs");
    addFile(cBrute);
    cBrute->add_option("--domain", domain, "Number of fresh elements");
    cBrute->callback([&] { action = [&] { return runBrute(ctx, parseProblemFile(file), domain); }; });

    std::string genKind, outPath, tilingMode = "cq";
    auto* cGen = app.add_subcommand("gen", "Generate a problem from a machine spec");
    cGen->add_option("kind", genKind, "tm, ca or tiling")->required()->check(CLI::IsMember({"tm", "ca", "tiling"}));
    cGen->add_option("spec", file, "Spec file")->required();
    cGen->add_option("-o,--output", outPath, "Output problem file");
    cGen->add_option("--mode", tilingMode, "Tiling mode: cq or ucq")->check(CLI::IsMember({"cq", "ucq"}));
    cGen->callback([&] { action = [&] { return runGen(ctx, genKind, file, outPath, tilingMode); }; });

    auto* cTree = app.add_subcommand("treecode", "Tree codes and backward mapping");
    cTree->require_subcommand(1);
    size_t branching = 2;
    std::optional<size_t> names, encodeChase;
    auto* cEncode = cTree->add_subcommand("encode", "Encode the facts of a problem file");
    addFile(cEncode);
    cEncode->add_option("--r", branching, "Branching");
    cEncode->add_option("--k", names, "Local names");
    cEncode->add_option("--chase-steps", encodeChase, "Chase first, encoding the chase decomposition");
    cEncode->callback([&] {
        action = [&] { return runEncode(ctx, parseProblemFile(file), branching, names, encodeChase); };
    });
    auto* cDecode = cTree->add_subcommand("decode", "Decode a JSON tree code");
    cDecode->add_option("code", file, "Tree code JSON")->required();
    cDecode->callback([&] { action = [&] { return runDecode(ctx, file); }; });
    auto* cAutomaton = cTree->add_subcommand("automaton", "Approximation automaton of the query, as JSON");
    addFile(cAutomaton);
    cAutomaton->add_option("--query", queryName, "Query name");
    cAutomaton->callback([&] { action = [&] { return runAutomaton(ctx, parseProblemFile(file), queryName); }; });
    std::optional<std::string> evalPath;
    auto* cBackmap = cTree->add_subcommand("backmap", "Backward-mapping program of a JSON automaton");
    cBackmap->add_option("automaton", file, "Automaton JSON")->required();
    cBackmap->add_option("--eval", evalPath, "Problem file whose facts the program is run on");
    cBackmap->callback([&] { action = [&] { return runBackmap(ctx, file, evalPath); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : ExitUsage;
    }
    try {
        return action();
    } catch (const Error& e) {
        int code = exitCodeFor(e.code());
        if (ctx.asJson) out << json{{"error", errorCodeName(e.code())}, {"message", e.what()}}.dump(2) << "\n";
        err << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitUsage;
    }
}

} // namespace mondet
