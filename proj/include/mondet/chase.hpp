#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mondet/decomposition.hpp"
#include "mondet/query.hpp"
#include "mondet/tgd.hpp"

namespace mondet {

struct ChaseConfig {
    size_t maxSteps = 100000;
    size_t maxNewNulls = 100000;
    // First null id; by default one past the largest null of the input.
    std::optional<uint64_t> nullCounterStart;
};

enum class ChaseStatus { Saturated, BudgetExhausted, Stopped };

const char* chaseStatusName(ChaseStatus s);

struct ChaseStep {
    size_t ruleIndex = 0;
    Substitution trigger;   // over the rule's body variables
    uint64_t firstNull = 0; // id given to the first existential
};

struct ChaseResult {
    Instance instance;
    ChaseStatus status = ChaseStatus::Saturated;
    std::vector<ChaseStep> stepLog;
    std::optional<TreeDecomposition> decomposition;
    std::vector<TGD> rules;
    size_t inputSize = 0;
    uint64_t nextNull = 1;

    bool saturated() const { return status == ChaseStatus::Saturated; }
};

// Called after each fired trigger with the facts it added; return true to
// stop the chase.
using ChaseObserver = std::function<bool(const Instance&, const std::vector<Atom>&)>;

// Restricted chase with a FIFO trigger queue.
ChaseResult chase(const Instance& input, const std::vector<TGD>& rules, const ChaseConfig& cfg = {},
                  const ChaseObserver& observer = {});

// Re-applies a step log to the input.
Instance replayChase(const Instance& input, const std::vector<TGD>& rules, const std::vector<ChaseStep>& log);

// Every trigger of every rule is satisfied in inst.
bool satisfiesRules(const Instance& inst, const std::vector<TGD>& rules);

enum class Entailment { Entailed, NotEntailedCertified, Unknown };

const char* entailmentName(Entailment e);

struct CertainAnswerResult {
    Entailment kind = Entailment::Unknown;
    std::optional<Substitution> witness;
    size_t disjunct = 0;
    size_t stepCount = 0;
    ChaseResult chase;
};

// Boolean q only (NON_BOOLEAN_QUERY otherwise).
CertainAnswerResult certainAnswer(const Instance& db, const std::vector<TGD>& rules, const UnionQuery& q,
                                  const ChaseConfig& cfg = {});
// Whether the tuple is a certain answer; the tuple's terms must be in db.
CertainAnswerResult certainAnswerAt(const Instance& db, const std::vector<TGD>& rules, const UnionQuery& q,
                                    const Tuple& tuple, const ChaseConfig& cfg = {});

// Extends a decomposition of the chase input by one child per non-full step.
TreeDecomposition emitDecomposition(const ChaseResult& result, const TreeDecomposition& seed);

} // namespace mondet
