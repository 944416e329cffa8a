#include "mondet/tgd.hpp"

#include <algorithm>
#include <set>

#include "mondet/error.hpp"

namespace mondet {

namespace {

bool has(const std::vector<Term>& v, const Term& t) { return std::find(v.begin(), v.end(), t) != v.end(); }

bool hasConstant(const Atom& a) {
    return std::any_of(a.args.begin(), a.args.end(), [](const Term& t) { return t.isConstant(); });
}

bool hasRepeat(const Atom& a) {
    std::set<Term> seen;
    for (const auto& t : a.args)
        if (!seen.insert(t).second) return true;
    return false;
}

} // namespace

TGD::TGD(std::vector<Atom> body, std::vector<Atom> head) : body_(std::move(body)), head_(std::move(head)) {
    if (head_.empty()) throw Error(ErrorCode::InvalidArgument, "rule head is empty");
    for (const auto& a : body_)
        for (const auto& t : a.args)
            if (t.isNull()) throw Error(ErrorCode::InvalidArgument, "rule mentions a null");
    bodyVars_ = variablesOf(body_);
    for (const auto& v : variablesOf(head_)) {
        if (has(bodyVars_, v)) continue;
        existentials_.push_back(v);
    }
    auto headVars = variablesOf(head_);
    for (const auto& v : bodyVars_)
        if (has(headVars, v)) frontier_.push_back(v);
}

int TGD::guardIndex() const {
    for (size_t i = 0; i < body_.size(); ++i) {
        std::vector<Term> vars;
        collectVariables(body_[i], vars);
        bool all = std::all_of(frontier_.begin(), frontier_.end(), [&](const Term& v) { return has(vars, v); });
        if (all) return static_cast<int>(i);
    }
    return -1;
}

std::string toString(const TGD& r) {
    std::string s = r.body().empty() ? std::string("true") : toString(r.body());
    s += " -> ";
    if (!r.existentials().empty()) {
        s += "exists ";
        for (size_t i = 0; i < r.existentials().size(); ++i) {
            if (i) s += ",";
            s += r.existentials()[i].name();
        }
        s += ". ";
    }
    return s + toString(r.head());
}

RuleFlags classifyRule(const TGD& r) {
    RuleFlags f;
    f.linear = r.isLinear();
    f.full = r.isFull();
    f.frontierGuarded = r.frontier().empty() || r.guardIndex() >= 0;
    f.frontierOne = r.frontier().size() <= 1;
    bool simple = r.head().size() == 1;
    for (const auto& a : r.body()) simple = simple && !hasConstant(a) && !hasRepeat(a);
    for (const auto& a : r.head()) simple = simple && !hasConstant(a) && !hasRepeat(a);
    f.uid = f.linear && f.frontierOne && simple;
    f.datalogShaped = f.full && r.head().size() == 1;
    return f;
}

RuleClassification classifyRules(const std::vector<TGD>& rules) {
    RuleClassification c;
    std::set<Symbol> headPreds, bodyPreds;
    for (const auto& r : rules) {
        RuleFlags f = classifyRule(r);
        c.perRule.push_back(f);
        c.linear = c.linear && f.linear;
        c.full = c.full && f.full;
        c.frontierGuarded = c.frontierGuarded && f.frontierGuarded;
        c.frontierOne = c.frontierOne && f.frontierOne;
        c.uid = c.uid && f.uid;
        c.datalogShaped = c.datalogShaped && f.datalogShaped;
        c.linearOrFrontierOne = c.linearOrFrontierOne && (f.linear || f.frontierOne);
        for (const auto& a : r.head()) headPreds.insert(a.predicate);
        for (const auto& a : r.body()) bodyPreds.insert(a.predicate);
    }
    for (Symbol p : headPreds)
        if (bodyPreds.count(p)) c.sourceToTarget = false;
    return c;
}

} // namespace mondet
