#include <algorithm>
#include <map>
#include <set>

#include "mondet/datalog.hpp"

namespace mondet {

namespace {

class Unfolder {
public:
    Unfolder(const DatalogProgram& p, size_t maxLeaves, const std::function<bool(const Approximation&)>& visit,
             std::set<std::string>& seen, UnfoldStats& stats)
        : p_(p), rules_(p.huRules()), maxLeaves_(maxLeaves), visit_(visit), seen_(seen), stats_(stats) {
        for (size_t i = 0; i < rules_.size(); ++i) rulesFor_[rules_[i].head.predicate].push_back(i);
    }

    // Emits every tree of height exactly h; false once visit asked to stop.
    bool runHeight(size_t h) {
        height_ = h;
        for (size_t ri : rulesFor_[p_.goal()]) {
            if (stopped_) break;
            counter_ = 0;
            nodes_.clear();
            pending_.clear();
            bounds_.clear();
            leaves_ = 0;
            Substitution fresh = freshen(rules_[ri], {});
            ApproxNode root;
            root.label = fresh.apply(rules_[ri].head);
            nodes_.push_back(root);
            bounds_.push_back(h);
            expandWith(0, ri, fresh);
        }
        return !stopped_;
    }

private:
    Substitution freshen(const DatalogRule& r, Substitution s) {
        for (const auto& v : variablesOf({r.head}))
            if (!s.contains(v)) s.set(v, Term::variable("U" + std::to_string(counter_++)));
        for (const auto& v : variablesOf(r.body))
            if (!s.contains(v)) s.set(v, Term::variable("U" + std::to_string(counter_++)));
        return s;
    }

    bool hasIdbBody(const DatalogRule& r) const {
        return std::any_of(r.body.begin(), r.body.end(), [&](const Atom& a) { return p_.isHuIdb(a.predicate); });
    }

    // Applies rule ri at node n under s, then continues with pending nodes.
    void expandWith(int n, size_t ri, const Substitution& s) {
        const DatalogRule& r = rules_[ri];
        size_t bound = bounds_[n];
        if (bound == 0 && hasIdbBody(r)) return;
        size_t savedNodes = nodes_.size(), savedLeaves = leaves_, savedPending = pending_.size();
        nodes_[n].rule = static_cast<int>(ri);
        std::vector<int> idbChildren;
        bool overBudget = false;
        for (const auto& b : r.body) {
            ApproxNode c;
            c.label = s.apply(b);
            c.parent = n;
            int id = static_cast<int>(nodes_.size());
            nodes_.push_back(c);
            bounds_.push_back(bound == 0 ? 0 : bound - 1);
            nodes_[n].children.push_back(id);
            if (p_.isHuIdb(b.predicate))
                idbChildren.push_back(id);
            else if (++leaves_ > maxLeaves_)
                overBudget = true;
        }
        if (overBudget) {
            stats_.leafTruncated = true;
        } else {
            for (auto it = idbChildren.rbegin(); it != idbChildren.rend(); ++it) pending_.push_back(*it);
            step();
        }
        pending_.resize(savedPending);
        nodes_.resize(savedNodes);
        bounds_.resize(savedNodes);
        nodes_[n].children.clear();
        nodes_[n].rule = -1;
        leaves_ = savedLeaves;
    }

    void step() {
        if (stopped_) return;
        if (pending_.empty()) {
            emit();
            return;
        }
        int n = pending_.back();
        pending_.pop_back();
        uint64_t savedCounter = counter_;
        auto it = rulesFor_.find(nodes_[n].label.predicate);
        if (it != rulesFor_.end()) {
            for (size_t ri : it->second) {
                if (stopped_) break;
                const DatalogRule& r = rules_[ri];
                Substitution s;
                bool ok = true;
                for (size_t i = 0; ok && i < r.head.args.size(); ++i) {
                    const Term& h = r.head.args[i];
                    const Term& l = nodes_[n].label.args[i];
                    ok = h.isVariable() ? s.bind(h, l) : h == l;
                }
                if (ok) expandWith(n, ri, freshen(r, s));
                counter_ = savedCounter;
            }
        }
        pending_.push_back(n);
    }

    size_t heightOf(int n) const {
        size_t h = 0;
        bool anyIdb = false;
        for (int c : nodes_[n].children) {
            if (nodes_[c].isLeaf() && !p_.isHuIdb(nodes_[c].label.predicate)) continue;
            anyIdb = true;
            h = std::max(h, heightOf(c));
        }
        return anyIdb ? h + 1 : 0;
    }

    void emit() {
        if (heightOf(0) != height_) return;
        Approximation a;
        a.height = height_;
        a.query.head = nodes_[0].label.args;
        for (const auto& n : nodes_)
            if (n.isLeaf()) a.query.body.push_back(n.label);
        std::string key = toString(normalizeCQ(a.query));
        if (!seen_.insert(key).second) {
            ++stats_.duplicates;
            return;
        }
        a.tree.nodes = nodes_;
        for (size_t i = 0; i < a.tree.nodes.size(); ++i) {
            auto& n = a.tree.nodes[i];
            if (n.isLeaf()) continue;
            std::vector<Term> bag;
            auto add = [&](const Term& t) {
                if (std::find(bag.begin(), bag.end(), t) == bag.end()) bag.push_back(t);
            };
            for (const auto& t : n.label.args) add(t);
            for (int c : n.children)
                for (const auto& t : a.tree.nodes[c].label.args) add(t);
            int parentVertex = n.parent < 0 ? -1 : a.tree.nodes[n.parent].vertex;
            n.vertex = a.decomposition.addVertex(std::move(bag), parentVertex);
        }
        for (auto& n : a.tree.nodes)
            if (n.isLeaf()) n.vertex = a.tree.nodes[n.parent].vertex;
        ++stats_.yielded;
        if (!visit_(a)) stopped_ = true;
    }

    const DatalogProgram& p_;
    const std::vector<DatalogRule>& rules_;
    size_t maxLeaves_;
    const std::function<bool(const Approximation&)>& visit_;
    std::set<std::string>& seen_;
    UnfoldStats& stats_;
    std::map<Symbol, std::vector<size_t>> rulesFor_;

    size_t height_ = 0;
    std::vector<ApproxNode> nodes_;
    std::vector<size_t> bounds_;
    std::vector<int> pending_;
    size_t leaves_ = 0;
    uint64_t counter_ = 0;
    bool stopped_ = false;
};

} // namespace

UnfoldStats unfoldApproximations(const DatalogProgram& p, size_t maxDepth, size_t maxLeaves,
                                 const std::function<bool(const Approximation&)>& visit) {
    UnfoldStats stats;
    std::set<std::string> seen;
    Unfolder u(p, maxLeaves, visit, seen, stats);
    for (size_t h = 0; h <= maxDepth; ++h)
        if (!u.runHeight(h)) break;
    return stats;
}

std::vector<Approximation> approximations(const DatalogProgram& p, size_t maxDepth, size_t maxLeaves,
                                          UnfoldStats* stats) {
    std::vector<Approximation> out;
    auto st = unfoldApproximations(p, maxDepth, maxLeaves, [&](const Approximation& a) {
        out.push_back(a);
        return true;
    });
    if (stats) *stats = st;
    return out;
}

std::optional<size_t> maxDerivationHeight(const DatalogProgram& p) {
    const auto& rules = p.huRules();
    std::set<Symbol> productive;
    bool changed = true;
    auto usable = [&](const DatalogRule& r) {
        return std::all_of(r.body.begin(), r.body.end(),
                           [&](const Atom& a) { return !p.isHuIdb(a.predicate) || productive.count(a.predicate); });
    };
    while (changed) {
        changed = false;
        for (const auto& r : rules)
            if (!productive.count(r.head.predicate) && usable(r)) {
                productive.insert(r.head.predicate);
                changed = true;
            }
    }
    if (!productive.count(p.goal())) return 0;
    std::map<Symbol, size_t> memo;
    std::set<Symbol> onStack;
    bool cyclic = false;
    std::function<size_t(Symbol)> height = [&](Symbol q) -> size_t {
        if (auto it = memo.find(q); it != memo.end()) return it->second;
        if (onStack.count(q)) {
            cyclic = true;
            return 0;
        }
        onStack.insert(q);
        size_t best = 0;
        for (const auto& r : rules) {
            if (r.head.predicate != q || !usable(r)) continue;
            bool anyIdb = false;
            size_t h = 0;
            for (const auto& a : r.body) {
                if (!p.isHuIdb(a.predicate)) continue;
                anyIdb = true;
                h = std::max(h, height(a.predicate));
            }
            best = std::max(best, anyIdb ? h + 1 : 0);
        }
        onStack.erase(q);
        memo[q] = best;
        return best;
    };
    size_t h = height(p.goal());
    if (cyclic) return std::nullopt;
    return h;
}

} // namespace mondet
