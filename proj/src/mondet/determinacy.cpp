#include "mondet/determinacy.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mondet/error.hpp"

namespace mondet {

const char* verdictKindName(VerdictKind k) {
    switch (k) {
    case VerdictKind::Determined: return "DETERMINED";
    case VerdictKind::NotDetermined: return "NOT_DETERMINED";
    case VerdictKind::Unknown: return "UNKNOWN";
    }
    return "?";
}

const char* certificationName(Certification c) { return c == Certification::Certified ? "CERTIFIED" : "CANDIDATE"; }

size_t MonDetProblem::arity() const { return isUCQ() ? ucq().arity : program().goalArity(); }

namespace {

void declareAtoms(Schema& s, const std::vector<Atom>& atoms) {
    for (const auto& a : atoms) s.declare(a.predicate, a.arity());
}

void declareProgramEdb(Schema& s, const DatalogProgram& p) {
    for (const auto& r : p.rules())
        for (const auto& a : r.body)
            if (!p.isIdb(a.predicate)) s.declare(a.predicate, a.arity());
}

} // namespace

Schema MonDetProblem::baseSchema() const {
    Schema s;
    if (isUCQ()) {
        for (const auto& d : ucq().disjuncts) declareAtoms(s, d.body);
    } else {
        declareProgramEdb(s, program());
    }
    for (const auto& v : views.views()) {
        if (v.program)
            declareProgramEdb(s, *v.program);
        else
            for (const auto& d : v.ucq.disjuncts) declareAtoms(s, d.body);
    }
    for (const auto& r : rules) {
        declareAtoms(s, r.body());
        declareAtoms(s, r.head());
    }
    return s;
}

void MonDetProblem::validate() const {
    Schema base = baseSchema();
    for (const auto& v : views.views())
        if (base.contains(v.name))
            throw Error(ErrorCode::InvalidArgument, "view " + v.name.name() + " is also a base predicate");
}

TupleSet MonDetProblem::answers(const Instance& inst) const {
    return isUCQ() ? evalQuery(ucq(), inst) : goalTuples(program(), inst);
}

bool MonDetProblem::holdsAt(const Instance& inst, const Tuple& t) const {
    if (isUCQ()) return mondet::holdsAt(ucq(), inst, t);
    return goalTuples(program(), inst).count(t) != 0;
}

std::optional<std::string> checkCounterexample(const MonDetProblem& p, const Counterexample& c) {
    if (!viewImage(c.i1, p.views).isSubsetOf(viewImage(c.i2, p.views))) return "view image of I1 not contained in I2's";
    if (c.tuple.size() != p.arity()) return "answer tuple has the wrong arity";
    if (!p.holdsAt(c.i1, c.tuple)) return "query does not hold on I1";
    if (p.holdsAt(c.i2, c.tuple)) return "query holds on I2";
    if (c.certification == Certification::Certified) {
        if (!satisfiesRules(c.i1, p.rules)) return "I1 violates the rules";
        if (!satisfiesRules(c.i2, p.rules)) return "I2 violates the rules";
    }
    return std::nullopt;
}

namespace {

// UCQ stand-ins for the views used for witness choices; Datalog
// definitions become the union of their approximations.
ViewSet witnessViews(const ViewSet& views, size_t depth, size_t maxLeaves, bool& exact) {
    ViewSet out;
    for (const auto& v : views.views()) {
        if (!v.program) {
            out.add(v);
            continue;
        }
        UnfoldStats st;
        auto apps = approximations(*v.program, depth, maxLeaves, &st);
        auto h = maxDerivationHeight(*v.program);
        if (!h || *h > depth || st.leafTruncated) exact = false;
        UnionQuery u;
        u.arity = v.arity();
        for (auto& a : apps) u.disjuncts.push_back(std::move(a.query));
        out.add(ViewDefinition(v.name, std::move(u)));
    }
    return out;
}

struct Pipeline {
    const MonDetProblem& p;
    const ViewSet& witnesses;
    ChaseConfig chaseCfg;
    size_t backVLimit;
    std::optional<size_t> fanoutLimit;

    bool complete = true;
    bool allSaturated = true;
    size_t branches = 0;
    std::optional<Counterexample> certified;
    std::optional<Counterexample> candidate;

    // Runs every witness choice for one approximation; false once a
    // certified counterexample is known.
    bool run(const ConjunctiveQuery& a) {
        auto cd = canonicalDatabase(a);
        auto ch1 = chase(cd.instance, p.rules, chaseCfg);
        if (!ch1.saturated()) allSaturated = false;
        Instance j = viewImage(ch1.instance, p.views);
        if (fanoutLimit) {
            size_t n = backVChoiceCount(j, witnesses, *fanoutLimit + 1);
            if (n > *fanoutLimit)
                throw Error(ErrorCode::FanoutLimit,
                            "view image needs more than " + std::to_string(*fanoutLimit) + " witness choices");
        }
        if (backVChoiceCount(j, witnesses, backVLimit + 1) > backVLimit) complete = false;
        backV(j, witnesses, backVLimit, [&](const Instance& b) {
            ++branches;
            auto ch2 = chase(b, p.rules, chaseCfg);
            if (!ch2.saturated()) allSaturated = false;
            if (p.holdsAt(ch2.instance, cd.headTuple)) return true;
            Counterexample c;
            c.i1 = ch1.instance;
            c.i2 = ch2.instance;
            c.tuple = cd.headTuple;
            c.i1Saturated = ch1.saturated();
            c.i2Saturated = ch2.saturated();
            c.i2Check = c.i2Saturated ? Entailment::NotEntailedCertified : Entailment::Unknown;
            c.viewInclusion = j.isSubsetOf(viewImage(c.i2, p.views));
            c.source = a;
            c.certification =
                c.i1Saturated && c.i2Saturated ? Certification::Certified : Certification::Candidate;
            if (c.certification == Certification::Certified) {
                certified = std::move(c);
                return false;
            }
            if (!candidate) candidate = std::move(c);
            return true;
        });
        return !certified;
    }

    Verdict verdict(const std::string& method, size_t approximations, bool exhaustive) const {
        Verdict v;
        v.method = method;
        v.approximations = approximations;
        v.branches = branches;
        if (certified) {
            v.kind = VerdictKind::NotDetermined;
            v.counterexample = certified;
            v.report = "certified counterexample";
        } else if (candidate) {
            v.kind = VerdictKind::NotDetermined;
            v.counterexample = candidate;
            v.report = "counterexample against a budget-truncated chase";
        } else if (exhaustive && complete) {
            v.kind = VerdictKind::Determined;
            v.report = "every approximation and witness choice satisfies the query";
        } else {
            v.kind = VerdictKind::Unknown;
            v.report = "budgets exhausted without a counterexample";
        }
        return v;
    }
};

} // namespace

Verdict searchCounterexample(const MonDetProblem& p, const SearchBudget& budget) {
    p.validate();
    bool exact = true;
    ViewSet wv = witnessViews(p.views, budget.viewUnfoldDepth, budget.maxLeaves, exact);
    Pipeline pl{p, wv, budget.chase, budget.backVLimit, std::nullopt, true, true, 0, {}, {}};
    size_t count = 0;
    if (p.isUCQ()) {
        for (const auto& d : p.ucq().disjuncts) {
            ++count;
            if (!pl.run(d)) break;
        }
    } else {
        auto st = unfoldApproximations(p.program(), budget.unfoldDepth, budget.maxLeaves, [&](const Approximation& a) {
            ++count;
            return pl.run(a.query);
        });
        auto h = maxDerivationHeight(p.program());
        if (!h || *h > budget.unfoldDepth || st.leafTruncated) exact = false;
    }
    return pl.verdict("search", count, exact);
}

Verdict decideFull(const MonDetProblem& p, const FullConfig& cfg) {
    p.validate();
    if (!p.isUCQ()) throw Error(ErrorCode::UnsupportedClass, "decideFull needs a UCQ query");
    if (!p.views.allUnion()) throw Error(ErrorCode::UnsupportedClass, "decideFull needs CQ or UCQ views");
    if (!classifyRules(p.rules).full) throw Error(ErrorCode::UnsupportedClass, "decideFull needs full rules");
    Pipeline pl{p, p.views, cfg.chase, cfg.fanoutLimit, cfg.fanoutLimit, true, true, 0, {}, {}};
    size_t count = 0;
    for (const auto& d : p.ucq().disjuncts) {
        ++count;
        if (!pl.run(d)) break;
    }
    Verdict v = pl.verdict("decideFull", count, true);
    if (!pl.certified && pl.candidate) {
        v.kind = VerdictKind::Unknown;
        v.report = "chase budget exhausted before the counterexample saturated";
    }
    return v;
}

namespace {

void requireLinearCQ(const MonDetProblem& p) {
    p.validate();
    if (!p.isUCQ()) throw Error(ErrorCode::UnsupportedClass, "decideLinearCQ needs a UCQ query");
    if (!p.views.allCQ()) throw Error(ErrorCode::UnsupportedClass, "decideLinearCQ needs CQ views");
    if (!classifyRules(p.rules).linear) throw Error(ErrorCode::UnsupportedClass, "decideLinearCQ needs linear rules");
}

} // namespace

UnionQuery linearViewRewriting(const MonDetProblem& p, const RewriteConfig& cfg) {
    requireLinearCQ(p);
    UnionQuery r1 = backwardRewriteUCQ(p.ucq(), p.rules, cfg);
    UnionQuery all = backwardRewriteUCQ(r1, backVRules(p.views), cfg);
    UnionQuery r2;
    r2.arity = all.arity;
    for (const auto& d : all.disjuncts)
        if (std::all_of(d.body.begin(), d.body.end(), [&](const Atom& a) { return p.views.isView(a.predicate); }))
            r2.disjuncts.push_back(d);
    return r2;
}

Verdict decideLinearCQ(const MonDetProblem& p, const RewriteConfig& cfg, const ChaseConfig& chaseCfg) {
    UnionQuery r2 = linearViewRewriting(p, cfg);
    UnionQuery r2e = backwardRewriteUCQ(expandViews(r2, p.views), p.rules, cfg);
    const UnionQuery& q = p.ucq();

    Verdict v;
    v.method = "decideLinearCQ";
    for (const auto& d : q.disjuncts) {
        ++v.approximations;
        if (containsCQ(d, r2e)) continue;
        v.kind = VerdictKind::NotDetermined;
        Pipeline pl{p, p.views, chaseCfg, 1, std::nullopt, true, true, 0, {}, {}};
        pl.run(d);
        v.branches = pl.branches;
        v.counterexample = pl.certified ? pl.certified : pl.candidate;
        v.report = "disjunct " + toString(d) + " is not contained in the view rewriting";
        return v;
    }
    v.kind = VerdictKind::Determined;
    v.report = "every disjunct is contained in the view rewriting";
    return v;
}

Verdict decide(const MonDetProblem& p, const SearchBudget& budget) {
    auto cls = classifyRules(p.rules);
    if (p.isUCQ() && p.views.allUnion() && cls.full) {
        FullConfig cfg;
        return decideFull(p, cfg);
    }
    if (p.isUCQ() && p.views.allCQ() && cls.linear) return decideLinearCQ(p, {}, budget.chase);
    return searchCounterexample(p, budget);
}

namespace {

std::vector<Term> problemConstants(const MonDetProblem& p) {
    std::set<Term> out;
    auto collect = [&](const std::vector<Atom>& atoms) {
        for (const auto& a : atoms)
            for (const auto& t : a.args)
                if (t.isConstant()) out.insert(t);
    };
    auto collectProgram = [&](const DatalogProgram& prog) {
        for (const auto& r : prog.rules()) {
            collect(r.body);
            collect({r.head});
        }
    };
    if (p.isUCQ())
        for (const auto& d : p.ucq().disjuncts) {
            collect(d.body);
            for (const auto& t : d.head)
                if (t.isConstant()) out.insert(t);
        }
    else
        collectProgram(p.program());
    for (const auto& v : p.views.views()) {
        if (v.program)
            collectProgram(*v.program);
        else
            for (const auto& d : v.ucq.disjuncts) collect(d.body);
    }
    for (const auto& r : p.rules) {
        collect(r.body());
        collect(r.head());
    }
    return {out.begin(), out.end()};
}

void allTuples(const std::vector<Term>& dom, size_t arity, std::vector<Term>& cur, std::vector<std::vector<Term>>& out) {
    if (cur.size() == arity) {
        out.push_back(cur);
        return;
    }
    for (const auto& t : dom) {
        cur.push_back(t);
        allTuples(dom, arity, cur, out);
        cur.pop_back();
    }
}

struct Model {
    Instance inst;
    std::set<Atom> image;
    TupleSet answers;
};

} // namespace

BruteForceResult bruteForceMondet(const MonDetProblem& p, size_t maxDomain) {
    p.validate();
    auto dom = problemConstants(p);
    std::set<std::string> names;
    for (const auto& c : dom) names.insert(c.name());
    for (size_t i = 0, added = 0; added < maxDomain; ++i) {
        std::string n = "d" + std::to_string(i);
        if (names.count(n)) continue;
        dom.push_back(Term::constant(n));
        ++added;
    }
    Schema schema = p.baseSchema();
    std::vector<Atom> facts;
    for (Symbol pred : schema.predicates()) {
        std::vector<std::vector<Term>> tuples;
        std::vector<Term> cur;
        allTuples(dom, schema.arity(pred), cur, tuples);
        for (auto& t : tuples) {
            facts.emplace_back(pred, std::move(t));
            if (facts.size() > 16)
                throw Error(ErrorCode::SchemaTooLarge, "more than 16 possible facts over the domain");
        }
    }

    BruteForceResult res;
    std::vector<Model> models;
    std::set<std::pair<std::set<Atom>, TupleSet>> seen;
    for (uint64_t mask = 0; mask < (uint64_t(1) << facts.size()); ++mask) {
        Instance inst(schema);
        for (size_t i = 0; i < facts.size(); ++i)
            if (mask >> i & 1) inst.add(facts[i]);
        if (!satisfiesRules(inst, p.rules)) continue;
        ++res.models;
        Model m;
        auto img = viewImage(inst, p.views);
        m.image.insert(img.facts().begin(), img.facts().end());
        m.answers = p.answers(inst);
        if (!seen.insert({m.image, m.answers}).second) continue;
        m.inst = std::move(inst);
        models.push_back(std::move(m));
    }
    for (const auto& a : models) {
        if (a.answers.empty()) continue;
        for (const auto& b : models) {
            if (!std::includes(b.image.begin(), b.image.end(), a.image.begin(), a.image.end())) continue;
            for (const auto& t : a.answers) {
                if (b.answers.count(t)) continue;
                Counterexample c;
                c.i1 = a.inst;
                c.i2 = b.inst;
                c.tuple = t;
                c.certification = Certification::Certified;
                c.viewInclusion = true;
                c.i1Saturated = c.i2Saturated = true;
                c.i2Check = Entailment::NotEntailedCertified;
                res.found = true;
                res.counterexample = std::move(c);
                return res;
            }
        }
    }
    return res;
}

} // namespace mondet
