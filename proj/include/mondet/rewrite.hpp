#pragma once

#include <optional>
#include <vector>

#include "mondet/chase.hpp"
#include "mondet/datalog.hpp"
#include "mondet/views.hpp"

namespace mondet {

struct RewriteConfig {
    // Exceeding this many distinct disjuncts raises SATURATION_BUDGET.
    size_t maxDisjuncts = 5000;
    // Drop disjuncts contained in another one from the final union.
    bool minimize = true;
};

struct RewriteStep {
    size_t disjunct = 0;          // index into RewriteTrace::disjuncts
    size_t rule = 0;
    std::vector<size_t> piece;    // atom indices of the rewritten disjunct
    Substitution unifier;
    size_t result = 0;            // index of the produced disjunct
};

struct RewriteTrace {
    std::vector<ConjunctiveQuery> disjuncts;
    std::vector<RewriteStep> steps;
    UnionQuery final;
};

// Piece rewriting to saturation. Requires linear or source-to-target
// rules (UNSUPPORTED_CLASS otherwise).
UnionQuery backwardRewriteUCQ(const UnionQuery& q, const std::vector<TGD>& rules, const RewriteConfig& cfg = {},
                              RewriteTrace* trace = nullptr);

// One rewriting step of a disjunct: all piece rewritings with the rule.
std::vector<ConjunctiveQuery> pieceRewritings(const ConjunctiveQuery& q, const TGD& rule);

// Replaces each view atom by its definition, distributing unions.
UnionQuery expandViews(const UnionQuery& r, const ViewSet& views);

// Certain-answer rewriting of P over CQ views under full rules, as a
// Datalog program over the view schema.
DatalogProgram inverseRules(const DatalogProgram& p, const ViewSet& views, const std::vector<TGD>& rules);

// A UCQ as a Datalog program with goal `goal`.
DatalogProgram ucqAsProgram(const UnionQuery& q, Symbol goal = Symbol("Goal"));

enum class ViewImageStatus { Ok, Degenerate, Unknown };

const char* viewImageStatusName(ViewImageStatus s);

struct ViewImageRewriting {
    ViewImageStatus status = ViewImageStatus::Unknown;
    UnionQuery rewriting;
    std::string reason;
};

// Chases each disjunct's canonical database and reads the view image
// back as a CQ over the view schema.
ViewImageRewriting viewImageRewriting(const UnionQuery& q, const ViewSet& views, const std::vector<TGD>& rules,
                                      const ChaseConfig& cfg = {});

} // namespace mondet
