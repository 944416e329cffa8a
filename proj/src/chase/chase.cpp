#include "mondet/chase.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "mondet/error.hpp"
#include "mondet/homomorphism.hpp"

namespace mondet {

const char* chaseStatusName(ChaseStatus s) {
    switch (s) {
    case ChaseStatus::Saturated: return "SATURATED";
    case ChaseStatus::BudgetExhausted: return "BUDGET_EXHAUSTED";
    case ChaseStatus::Stopped: return "STOPPED";
    }
    return "?";
}

const char* entailmentName(Entailment e) {
    switch (e) {
    case Entailment::Entailed: return "ENTAILED";
    case Entailment::NotEntailedCertified: return "NOT_ENTAILED_CERTIFIED";
    case Entailment::Unknown: return "UNKNOWN";
    }
    return "?";
}

namespace {

struct TriggerKey {
    size_t rule;
    std::vector<Term> slots;
    bool operator==(const TriggerKey& o) const { return rule == o.rule && slots == o.slots; }
};

struct TriggerKeyHash {
    size_t operator()(const TriggerKey& k) const {
        size_t h = std::hash<size_t>()(k.rule);
        for (const auto& t : k.slots) h = hashCombine(h, std::hash<Term>()(t));
        return h;
    }
};

struct CompiledRule {
    const TGD* rule;
    Matcher body;
    Matcher head;
    // Head-matcher slot of each frontier variable, paired with its body slot.
    std::vector<std::pair<int, int>> frontierSlots;
    std::vector<int> existentialHeadSlots;

    explicit CompiledRule(const TGD& r) : rule(&r), body(r.body()), head(r.head(), true) {
        for (const auto& v : r.frontier()) frontierSlots.emplace_back(head.slotOf(v), body.slotOf(v));
    }
};

Atom instantiate(const Atom& a, const Substitution& s) { return s.apply(a); }

class ChaseSession {
public:
    ChaseSession(const Instance& input, const std::vector<TGD>& rules, const ChaseConfig& cfg,
                 const ChaseObserver& observer)
        : cfg_(cfg), observer_(observer) {
        result_.instance = input;
        result_.rules = rules;
        result_.inputSize = input.size();
        nextNull_ = cfg.nullCounterStart ? *cfg.nullCounterStart : std::max<uint64_t>(input.maxNullId() + 1, 1);
        compiled_.reserve(result_.rules.size());
        for (const auto& r : result_.rules) compiled_.emplace_back(r);
    }

    ChaseResult run() {
        Instance& inst = result_.instance;
        for (size_t r = 0; r < compiled_.size(); ++r) {
            compiled_[r].body.run(inst, std::vector<std::optional<Term>>{}, [&](const std::vector<Term>& slots) {
                enqueue(r, slots);
                return true;
            });
        }
        size_t newNulls = 0;
        while (!queue_.empty()) {
            TriggerKey trig = std::move(queue_.front());
            queue_.pop_front();
            const CompiledRule& cr = compiled_[trig.rule];
            if (!active(cr, trig.slots)) continue;
            size_t needed = cr.rule->existentials().size();
            if (result_.stepLog.size() >= cfg_.maxSteps || newNulls + needed > cfg_.maxNewNulls) {
                result_.status = ChaseStatus::BudgetExhausted;
                break;
            }
            Substitution s = cr.body.toSubstitution(trig.slots);
            ChaseStep step{trig.rule, s, nextNull_};
            for (const auto& e : cr.rule->existentials()) s.set(e, Term::null(nextNull_++));
            newNulls += needed;
            std::vector<Atom> added;
            for (const auto& h : cr.rule->head()) {
                Atom f = instantiate(h, s);
                if (inst.add(f)) added.push_back(std::move(f));
            }
            result_.stepLog.push_back(std::move(step));
            for (const auto& f : added) discover(f);
            if (observer_ && observer_(inst, added)) {
                result_.status = ChaseStatus::Stopped;
                break;
            }
        }
        result_.nextNull = nextNull_;
        return std::move(result_);
    }

private:
    void enqueue(size_t rule, const std::vector<Term>& slots) {
        TriggerKey k{rule, slots};
        if (seen_.insert(k).second) queue_.push_back(std::move(k));
    }

    void discover(const Atom& fact) {
        const Instance& inst = result_.instance;
        for (size_t r = 0; r < compiled_.size(); ++r) {
            const auto& body = compiled_[r].rule->body();
            for (size_t i = 0; i < body.size(); ++i) {
                if (body[i].predicate != fact.predicate) continue;
                compiled_[r].body.runFrom(inst, i, fact, [&](const std::vector<Term>& slots) {
                    enqueue(r, slots);
                    return true;
                });
            }
        }
    }

    bool active(const CompiledRule& cr, const std::vector<Term>& bodySlots) const {
        std::vector<std::optional<Term>> seed(cr.head.variables().size());
        for (auto [hs, bs] : cr.frontierSlots) seed[hs] = bodySlots[bs];
        bool found = false;
        cr.head.run(result_.instance, seed, [&](const std::vector<Term>&) {
            found = true;
            return false;
        });
        return !found;
    }

    ChaseConfig cfg_;
    const ChaseObserver& observer_;
    ChaseResult result_;
    std::vector<CompiledRule> compiled_;
    std::deque<TriggerKey> queue_;
    std::unordered_set<TriggerKey, TriggerKeyHash> seen_;
    uint64_t nextNull_ = 1;
};

} // namespace

ChaseResult chase(const Instance& input, const std::vector<TGD>& rules, const ChaseConfig& cfg,
                  const ChaseObserver& observer) {
    ChaseSession session(input, rules, cfg, observer);
    return session.run();
}

Instance replayChase(const Instance& input, const std::vector<TGD>& rules, const std::vector<ChaseStep>& log) {
    Instance inst = input;
    for (const auto& step : log) {
        const TGD& r = rules.at(step.ruleIndex);
        Substitution s = step.trigger;
        uint64_t n = step.firstNull;
        for (const auto& e : r.existentials()) s.set(e, Term::null(n++));
        for (const auto& h : r.head()) inst.add(s.apply(h));
    }
    return inst;
}

bool satisfiesRules(const Instance& inst, const std::vector<TGD>& rules) {
    for (const auto& r : rules) {
        bool ok = true;
        forEachHomomorphism(r.body(), inst, {}, [&](const Substitution& s) {
            Substitution f;
            for (const auto& v : r.frontier()) f.set(v, *s.get(v));
            if (!hasHomomorphism(r.head(), inst, f)) ok = false;
            return ok;
        });
        if (!ok) return false;
    }
    return true;
}

namespace {

// Seeds binding each disjunct's head to the tuple; nullopt when a disjunct
// cannot produce the tuple at all.
std::vector<std::optional<Substitution>> headSeeds(const UnionQuery& q, const Tuple& tuple) {
    std::vector<std::optional<Substitution>> out;
    for (const auto& d : q.disjuncts) {
        Substitution s;
        bool ok = d.head.size() == tuple.size();
        for (size_t i = 0; ok && i < d.head.size(); ++i) {
            if (d.head[i].isVariable())
                ok = s.bind(d.head[i], tuple[i]);
            else
                ok = d.head[i] == tuple[i];
        }
        if (ok)
            out.emplace_back(std::move(s));
        else
            out.emplace_back(std::nullopt);
    }
    return out;
}

CertainAnswerResult certainImpl(const Instance& db, const std::vector<TGD>& rules, const UnionQuery& q,
                                const Tuple& tuple, const ChaseConfig& cfg) {
    auto seeds = headSeeds(q, tuple);
    CertainAnswerResult out;
    auto checkAll = [&](const Instance& inst, const std::vector<Atom>* added) {
        for (size_t i = 0; i < q.disjuncts.size(); ++i) {
            if (!seeds[i]) continue;
            const auto& body = q.disjuncts[i].body;
            std::optional<Substitution> w;
            if (added)
                w = findHomomorphismInvolving(body, inst, *added, *seeds[i]);
            else
                w = findHomomorphism(body, inst, *seeds[i]);
            if (w) {
                out.witness = std::move(w);
                out.disjunct = i;
                return true;
            }
        }
        return false;
    };
    if (checkAll(db, nullptr)) {
        out.kind = Entailment::Entailed;
        out.chase.instance = db;
        out.chase.rules = rules;
        out.chase.inputSize = db.size();
        out.chase.status = ChaseStatus::Stopped;
        return out;
    }
    out.chase = chase(db, rules, cfg, [&](const Instance& inst, const std::vector<Atom>& added) {
        return !added.empty() && checkAll(inst, &added);
    });
    out.stepCount = out.chase.stepLog.size();
    if (out.witness)
        out.kind = Entailment::Entailed;
    else if (out.chase.saturated())
        out.kind = Entailment::NotEntailedCertified;
    else
        out.kind = Entailment::Unknown;
    return out;
}

} // namespace

CertainAnswerResult certainAnswer(const Instance& db, const std::vector<TGD>& rules, const UnionQuery& q,
                                  const ChaseConfig& cfg) {
    if (!q.isBoolean()) throw Error(ErrorCode::NonBooleanQuery, "certainAnswer expects a Boolean query");
    return certainImpl(db, rules, q, {}, cfg);
}

CertainAnswerResult certainAnswerAt(const Instance& db, const std::vector<TGD>& rules, const UnionQuery& q,
                                    const Tuple& tuple, const ChaseConfig& cfg) {
    if (tuple.size() != q.arity) throw Error(ErrorCode::ArityMismatch, "tuple arity differs from query arity");
    return certainImpl(db, rules, q, tuple, cfg);
}

TreeDecomposition emitDecomposition(const ChaseResult& result, const TreeDecomposition& seed) {
    auto cls = classifyRules(result.rules);
    if (!cls.frontierGuarded) throw Error(ErrorCode::NotFrontierGuarded, "rule set is not frontier-guarded");
    for (const auto& r : result.rules)
        for (const auto& h : r.head())
            for (const auto& t : h.args)
                if (t.isConstant())
                    throw Error(ErrorCode::InvalidArgument, "rule heads with constants are not decomposable");
    TreeDecomposition td = seed;
    if (td.vertices.empty()) td.addVertex({}, -1);
    for (const auto& step : result.stepLog) {
        const TGD& r = result.rules.at(step.ruleIndex);
        if (r.isFull()) continue;
        std::vector<Term> bag;
        for (const auto& v : r.frontier()) {
            Term t = step.trigger.apply(v);
            if (std::find(bag.begin(), bag.end(), t) == bag.end()) bag.push_back(t);
        }
        int parent = 0;
        if (!bag.empty()) {
            parent = -1;
            for (size_t i = 0; i < td.vertices.size() && parent < 0; ++i) {
                const auto& b = td.vertices[i].bag;
                bool all = std::all_of(bag.begin(), bag.end(),
                                       [&](const Term& t) { return std::find(b.begin(), b.end(), t) != b.end(); });
                if (all) parent = static_cast<int>(i);
            }
            if (parent < 0)
                throw Error(ErrorCode::InvalidDecomposition, "seed does not cover the frontier image of a step");
        }
        for (size_t i = 0; i < r.existentials().size(); ++i) bag.push_back(Term::null(step.firstNull + i));
        td.addVertex(std::move(bag), parent);
    }
    return td;
}

} // namespace mondet
