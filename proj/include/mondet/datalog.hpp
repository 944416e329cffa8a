#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mondet/decomposition.hpp"
#include "mondet/query.hpp"
#include "mondet/tgd.hpp"

namespace mondet {

struct DatalogRule {
    Atom head;
    std::vector<Atom> body;
    // Rule of the source program this rule was derived from.
    int source = -1;

    friend bool operator==(const DatalogRule& a, const DatalogRule& b) {
        return a.head == b.head && a.body == b.body;
    }
};

std::string toString(const DatalogRule& r);

// A positive Datalog program. Construction checks safety and computes the
// head-unique (HU) form, where non-goal IDB atoms never repeat a term:
// an IDB predicate P used with equality pattern s becomes "P__s" (the
// all-distinct pattern keeps the name P).
class DatalogProgram {
public:
    DatalogProgram() = default;
    DatalogProgram(std::vector<DatalogRule> rules, Symbol goal, std::optional<size_t> goalArity = std::nullopt);

    const std::vector<DatalogRule>& rules() const { return rules_; }
    const std::vector<DatalogRule>& huRules() const { return hu_; }
    Symbol goal() const { return goal_; }
    size_t goalArity() const { return goalArity_; }

    bool isIdb(Symbol p) const { return idb_.count(p) != 0; }
    bool isHuIdb(Symbol p) const { return huIdb_.count(p) != 0; }
    const std::set<Symbol>& idbPredicates() const { return idb_; }
    const std::set<Symbol>& huIdbPredicates() const { return huIdb_; }
    // EDB and IDB predicates with arities; IDBs tagged Idb.
    const Schema& schema() const { return schema_; }
    std::vector<Symbol> edbPredicates() const;

    // The HU rules as a program of their own.
    DatalogProgram huProgram() const;

private:
    void normalize();

    std::vector<DatalogRule> rules_;
    std::vector<DatalogRule> hu_;
    Symbol goal_;
    size_t goalArity_ = 0;
    std::set<Symbol> idb_;
    std::set<Symbol> huIdb_;
    Schema schema_;
};

std::string toString(const DatalogProgram& p);

// Least fixpoint by semi-naive iteration: the input plus all derived facts.
Instance evalDatalog(const DatalogProgram& p, const Instance& input);
TupleSet goalTuples(const DatalogProgram& p, const Instance& input);
bool evalGoal(const DatalogProgram& p, const Instance& input);

struct DatalogClassification {
    bool mdl = true;
    bool fgdl = true;
    bool ec = true;
    // Index of the first violating rule, or -1.
    int mdlViolation = -1;
    int fgdlViolation = -1;
    int ecViolation = -1;
};

DatalogClassification classifyDatalog(const DatalogProgram& p);

struct ApproxNode {
    Atom label;
    int parent = -1;
    std::vector<int> children;
    // HU rule applied at an internal node, -1 at leaves.
    int rule = -1;
    // Decomposition vertex of the node (leaves share their parent's).
    int vertex = -1;

    bool isLeaf() const { return rule < 0; }
};

struct ApproximationTree {
    std::vector<ApproxNode> nodes; // node 0 is the root
};

struct Approximation {
    ConjunctiveQuery query;
    ApproximationTree tree;
    // One bag per internal node; bags hold CQ terms.
    TreeDecomposition decomposition;
    size_t height = 0;
};

struct UnfoldStats {
    size_t yielded = 0;
    size_t duplicates = 0;
    // Some tree was skipped for exceeding the leaf budget.
    bool leafTruncated = false;
};

// Derivation height: a node whose rule has only EDB atoms has height 0,
// otherwise one more than its tallest IDB child. Trees are produced by
// increasing height, deduplicated by normalizeCQ. Visit returns false to
// stop.
UnfoldStats unfoldApproximations(const DatalogProgram& p, size_t maxDepth, size_t maxLeaves,
                                 const std::function<bool(const Approximation&)>& visit);
std::vector<Approximation> approximations(const DatalogProgram& p, size_t maxDepth, size_t maxLeaves,
                                          UnfoldStats* stats = nullptr);

// Largest derivation height of the goal, or nullopt when unbounded. Zero
// derivations gives 0.
std::optional<size_t> maxDerivationHeight(const DatalogProgram& p);

struct RulesAsTGDs {
    std::vector<TGD> rules;
    // Goal(X0..Xn-1) <- Goal(X0..Xn-1).
    UnionQuery goalQuery;
};

RulesAsTGDs datalogToTGDs(const DatalogProgram& p);

} // namespace mondet
