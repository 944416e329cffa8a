#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mondet/chase.hpp"
#include "mondet/datalog.hpp"
#include "mondet/rewrite.hpp"
#include "mondet/views.hpp"

namespace mondet {

// The triple (Q, V, Σ). Q is a UCQ or a Datalog program.
struct MonDetProblem {
    std::variant<UnionQuery, DatalogProgram> query;
    ViewSet views;
    std::vector<TGD> rules;

    bool isUCQ() const { return std::holds_alternative<UnionQuery>(query); }
    const UnionQuery& ucq() const { return std::get<UnionQuery>(query); }
    const DatalogProgram& program() const { return std::get<DatalogProgram>(query); }
    size_t arity() const;
    // Base predicates of the query, view definitions and rules.
    Schema baseSchema() const;
    // Throws INVALID_ARGUMENT when a view name is also a base predicate.
    void validate() const;

    // Answers of Q on an instance.
    TupleSet answers(const Instance& inst) const;
    bool holdsAt(const Instance& inst, const Tuple& t) const;
};

enum class VerdictKind { Determined, NotDetermined, Unknown };
enum class Certification { Certified, Candidate };

const char* verdictKindName(VerdictKind k);
const char* certificationName(Certification c);

struct Counterexample {
    Instance i1;
    Instance i2;
    // Answer of Q on I1 missing from I2; empty for Boolean Q.
    Tuple tuple;
    Certification certification = Certification::Candidate;
    bool viewInclusion = false;   // V(I1) ⊆ V(I2)
    bool i1Saturated = false;
    bool i2Saturated = false;
    // Refutation level of Q on I2.
    Entailment i2Check = Entailment::Unknown;
    // Approximation (or disjunct) of Q the counterexample came from.
    ConjunctiveQuery source;
};

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::string method;
    std::optional<Counterexample> counterexample;
    std::string report;
    size_t approximations = 0;
    size_t branches = 0;
};

// Independent check of a counterexample: nullopt when it is valid at its
// certification level, otherwise the first failing condition.
std::optional<std::string> checkCounterexample(const MonDetProblem& p, const Counterexample& c);

// The UCQ over the view schema certain-answering Q from a view instance
// under Σ (the R2 stage of decideLinearCQ).
UnionQuery linearViewRewriting(const MonDetProblem& p, const RewriteConfig& cfg = {});

// Exact for UCQ Q, CQ views and linear Σ. The chase budget only shapes the
// counterexample attached to a negative verdict.
Verdict decideLinearCQ(const MonDetProblem& p, const RewriteConfig& cfg = {},
                       const ChaseConfig& chaseCfg = ChaseConfig{2000, 2000, std::nullopt});

struct FullConfig {
    // Above this many backV choices for one view image, FANOUT_LIMIT.
    size_t fanoutLimit = 100000;
    ChaseConfig chase;
};

// Exact for UCQ Q, CQ/UCQ views and full Σ.
Verdict decideFull(const MonDetProblem& p, const FullConfig& cfg = {});

struct SearchBudget {
    size_t unfoldDepth = 3;
    size_t maxLeaves = 64;
    ChaseConfig chase{250, 250, std::nullopt};
    size_t backVLimit = 1000;
    // Unfolding depth for Datalog view definitions.
    size_t viewUnfoldDepth = 3;
};

// Bounded pipeline run. DETERMINED only when the run covered every
// approximation and every witness choice.
Verdict searchCounterexample(const MonDetProblem& p, const SearchBudget& budget = {});

// decideFull, then decideLinearCQ, then searchCounterexample, by class.
Verdict decide(const MonDetProblem& p, const SearchBudget& budget = {});

struct BruteForceResult {
    bool found = false;
    std::optional<Counterexample> counterexample;
    size_t models = 0;
};

// All Σ-satisfying instance pairs over a common domain of maxDomain fresh
// elements plus the problem's constants. SCHEMA_TOO_LARGE above 16
// possible facts.
BruteForceResult bruteForceMondet(const MonDetProblem& p, size_t maxDomain);

} // namespace mondet
