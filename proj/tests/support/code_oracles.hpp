#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mondet/treecode.hpp"
#include "oracles.hpp"

namespace testkit {

// Letter from a partition of the names (class of each name, 1-based) with
// facts closed under equal names.
mondet::Letter classLetter(const std::vector<size_t>& cls, const std::set<mondet::CodeFact>& facts,
                           const mondet::PartialInjection& g);

mondet::TreeCode singleNode(size_t k, size_t r, mondet::Letter l);

// Random instance with a decomposition of width at most maxWidth: each
// bag keeps part of its parent's bag and adds fresh elements.
std::pair<mondet::Instance, mondet::TreeDecomposition> randomDecomposed(Rng& rng, size_t maxWidth,
                                                                       size_t maxVertices);

// Facts with every term replaced by a variable, for homomorphism search.
std::vector<mondet::Atom> asPattern(const mondet::Instance& inst);

// Automaton over sigma = {R/2, U/1}, k = r = 2, at most 3 states. Internal
// letters are discrete, so every tree over its letters is coherent.
mondet::TreeAutomaton randomAutomaton(Rng& rng);

// Instance over R and U with at most 4 elements.
mondet::Instance randomSmallInstance(Rng& rng);

// Least height of an accepted code mapping into m, by a bottom-up run of
// the automaton over assignments of names to elements of m.
std::optional<size_t> productHeight(const mondet::TreeAutomaton& a, const mondet::Instance& m);

// Decodings of accepted codes of depth at most d, built from transitions.
std::vector<mondet::Instance> acceptedDecodings(const mondet::TreeAutomaton& a, size_t d);

struct BackwardMapTally {
    size_t pairs = 0;
    size_t positives = 0;
    // E_A agrees with enumeration of accepted codes up to depth |states|.
    size_t agreeEnumeration = 0;
    // E_A agrees with the product run.
    size_t agreeProduct = 0;
    std::string firstDisagreement;
};

BackwardMapTally backwardMapSuite(unsigned seed, size_t automata, size_t instancesEach);

} // namespace testkit
