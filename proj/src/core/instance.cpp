#include "mondet/instance.hpp"

#include <algorithm>

#include "mondet/error.hpp"

namespace mondet {

namespace {
const std::vector<uint32_t> kNoFacts;
}

Instance::Instance(std::initializer_list<Atom> facts) {
    for (const auto& f : facts) add(f);
}

bool Instance::add(const Atom& fact) {
    for (const auto& t : fact.args)
        if (t.isVariable())
            throw Error(ErrorCode::InvalidArgument, "instance facts must be ground: " + toString(fact));
    schema_.declare(fact.predicate, fact.arity());
    if (!set_.insert(fact).second) return false;
    auto idx = static_cast<uint32_t>(facts_.size());
    facts_.push_back(fact);
    byPred_[fact.predicate].push_back(idx);
    for (size_t i = 0; i < fact.args.size(); ++i) byPos_[PosKey{fact.predicate, i, fact.args[i]}].push_back(idx);
    return true;
}

void Instance::addAll(const Instance& other) {
    schema_.merge(other.schema_);
    for (const auto& f : other.facts_) add(f);
}

void Instance::addAll(const std::vector<Atom>& facts) {
    for (const auto& f : facts) add(f);
}

std::vector<Term> Instance::activeDomain() const {
    std::vector<Term> out;
    std::unordered_set<Term> seen;
    for (const auto& f : facts_)
        for (const auto& t : f.args)
            if (seen.insert(t).second) out.push_back(t);
    return out;
}

uint64_t Instance::maxNullId() const {
    uint64_t m = 0;
    for (const auto& f : facts_)
        for (const auto& t : f.args)
            if (t.isNull()) m = std::max(m, t.id());
    return m;
}

const std::vector<uint32_t>& Instance::withPredicate(Symbol p) const {
    auto it = byPred_.find(p);
    return it == byPred_.end() ? kNoFacts : it->second;
}

const std::vector<uint32_t>& Instance::withTermAt(Symbol p, size_t pos, const Term& t) const {
    auto it = byPos_.find(PosKey{p, pos, t});
    return it == byPos_.end() ? kNoFacts : it->second;
}

Instance Instance::restrictTo(const std::vector<Symbol>& preds) const {
    Instance out;
    for (Symbol p : preds)
        if (auto info = schema_.find(p)) out.schema_.declare(p, info->arity, info->tag);
    for (const auto& f : facts_)
        if (std::find(preds.begin(), preds.end(), f.predicate) != preds.end()) out.add(f);
    return out;
}

bool Instance::isSubsetOf(const Instance& other) const {
    return std::all_of(facts_.begin(), facts_.end(), [&](const Atom& f) { return other.contains(f); });
}

bool operator==(const Instance& a, const Instance& b) {
    return a.size() == b.size() && a.isSubsetOf(b);
}

std::string toString(const Instance& inst) {
    std::string s = "{";
    for (size_t i = 0; i < inst.facts().size(); ++i) {
        if (i) s += ", ";
        s += toString(inst.facts()[i]);
    }
    return s + "}";
}

} // namespace mondet
