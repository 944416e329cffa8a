#pragma once

#include <string>
#include <vector>

#include "mondet/atom.hpp"

namespace mondet {

// body -> exists existentials. head.
class TGD {
public:
    TGD() = default;
    // An empty body is allowed (a seed rule); the head must be nonempty.
    TGD(std::vector<Atom> body, std::vector<Atom> head);

    const std::vector<Atom>& body() const { return body_; }
    const std::vector<Atom>& head() const { return head_; }
    const std::vector<Term>& frontier() const { return frontier_; }
    const std::vector<Term>& existentials() const { return existentials_; }
    const std::vector<Term>& bodyVariables() const { return bodyVars_; }

    bool isFull() const { return existentials_.empty(); }
    bool isLinear() const { return body_.size() == 1; }
    // Index of the first body atom containing the whole frontier, or -1.
    int guardIndex() const;

    friend bool operator==(const TGD& a, const TGD& b) { return a.body_ == b.body_ && a.head_ == b.head_; }

private:
    std::vector<Atom> body_;
    std::vector<Atom> head_;
    std::vector<Term> bodyVars_;
    std::vector<Term> frontier_;
    std::vector<Term> existentials_;
};

std::string toString(const TGD& r);

struct RuleFlags {
    bool linear = false;
    bool full = false;
    bool frontierGuarded = false;
    bool frontierOne = false;
    bool uid = false;
    bool datalogShaped = false;
};

// Set-level flags hold when every rule has the property; sourceToTarget is
// checked across the set.
struct RuleClassification {
    bool linear = true;
    bool full = true;
    bool frontierGuarded = true;
    bool frontierOne = true;
    bool uid = true;
    bool sourceToTarget = true;
    bool datalogShaped = true;
    // Every rule is linear or frontier-one.
    bool linearOrFrontierOne = true;
    std::vector<RuleFlags> perRule;
};

RuleFlags classifyRule(const TGD& r);
RuleClassification classifyRules(const std::vector<TGD>& rules);

} // namespace mondet
