#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mondet/datalog.hpp"
#include "mondet/decomposition.hpp"

namespace mondet {

// Partial injective map on local names 1..k. image[l-1] is g(l), or 0
// when l is outside the domain.
struct PartialInjection {
    std::vector<size_t> image;

    static PartialInjection empty(size_t k) { return {std::vector<size_t>(k, 0)}; }
    static PartialInjection identity(size_t k);
    bool defined(size_t l) const { return image[l - 1] != 0; }
    size_t operator()(size_t l) const { return image[l - 1]; }
    bool injective() const;

    friend auto operator<=>(const PartialInjection&, const PartialInjection&) = default;
};

// Every partial injection on 1..k, in lexicographic order of images.
std::vector<PartialInjection> partialInjections(size_t k);

// T^R_n: predicate R holds of the elements named n.
struct CodeFact {
    Symbol predicate;
    std::vector<size_t> names;

    friend bool operator==(const CodeFact& a, const CodeFact& b) {
        return a.predicate == b.predicate && a.names == b.names;
    }
    friend bool operator<(const CodeFact& a, const CodeFact& b);
};

// The set of code predicates true at one node, stored as sorted sets.
struct Letter {
    std::set<std::pair<size_t, size_t>> equalities; // T^=_{l,l'}
    std::set<CodeFact> facts;                        // T^R_n
    std::set<PartialInjection> maps;                 // T_g

    friend bool operator==(const Letter&, const Letter&) = default;
    friend bool operator<(const Letter& a, const Letter& b);
};

std::string toString(const Letter& l);

// Reflexive equalities only, the given facts and the single map g.
Letter discreteLetter(size_t k, const PartialInjection& g, std::set<CodeFact> facts = {});

struct CodeNode {
    Letter label;
    std::vector<size_t> children;
};

// Node 0 is the root; internal nodes have exactly r ordered children.
struct TreeCode {
    size_t k = 1;
    size_t r = 2;
    std::vector<CodeNode> nodes;

    // Parent of every node, -1 for the root. Throws INVALID_ARGUMENT when
    // the nodes do not form a tree of branching r over names 1..k.
    std::vector<int> parents() const;
    size_t depth() const;
};

// First violated coherence condition (1..5) of one letter, checking only
// the per-node conditions 1, 2 and 5.
std::optional<int> letterViolation(const Letter& l, size_t k);
// First violated coherence condition (1..5), or nullopt.
std::optional<int> coherenceViolation(const TreeCode& t);
// Throws INCOHERENT with the condition index as detail.
void checkCoherent(const TreeCode& t);

// Quotient of (node, name) pairs. Class i (1-based, ordered by least
// (node index, name)) becomes constant e<i>.
Instance decode(const TreeCode& t);

// k defaults to the decomposition width (at least 1). Each fact goes to
// the first vertex covering it, nullary facts to every node. Vertices with
// more than r children are split into copies of their bag; short child
// lists are padded with empty-bag leaves labelled T_∅.
TreeCode encode(const Instance& inst, const TreeDecomposition& td, size_t r,
                std::optional<size_t> k = std::nullopt);
// As encode, with the facts of each vertex given explicitly.
TreeCode encodePlaced(const TreeDecomposition& td, const std::vector<std::vector<Atom>>& placed, size_t r,
                      std::optional<size_t> k = std::nullopt);

struct LeafTransition {
    Letter letter;
    size_t target = 0;
};

struct InternalTransition {
    std::vector<size_t> children;
    Letter letter;
    size_t target = 0;
};

// Bottom-up nondeterministic automaton over Codes(sigma, k) trees of
// branching r. States are 0..states-1.
struct TreeAutomaton {
    Schema sigma;
    size_t k = 1;
    size_t r = 2;
    size_t states = 0;
    std::set<size_t> accepting;
    std::vector<LeafTransition> leaves;
    std::vector<InternalTransition> internal;

    // INVALID_ARGUMENT on bad states, child counts or letters outside the
    // alphabet; INCOHERENT when a letter is not a coherent letter.
    void validate() const;
};

struct AutomatonRun {
    bool accepted = false;
    // State of every node in one accepting run.
    std::optional<std::vector<size_t>> states;
};

// ALPHABET_MISMATCH when k, r or the code's predicates disagree with A.
AutomatonRun runAutomaton(const TreeAutomaton& a, const TreeCode& t);

// The program E_A with 0-ary goal "Goal". LOCAL_L rules are emitted only
// for letters of transitions, and P_{q,g} rules only for pairs some
// transition can derive.
DatalogProgram backwardMap(const TreeAutomaton& a, size_t k);

// Accepts exactly the approximation codes of p. k is the largest number
// of terms in an HU rule, r the largest body (at least 2). Throws
// INVALID_ARGUMENT for rules with constants or nullary EDB atoms.
TreeAutomaton approxAutomaton(const DatalogProgram& p);

// Code of an approximation's decomposition: local names follow bag order
// and each node carries the EDB atoms of its own rule.
TreeCode approximationCode(const Approximation& a, size_t k, size_t r);

} // namespace mondet
