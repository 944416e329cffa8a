#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mondet/instance.hpp"

namespace mondet {

// Rooted ordered tree; vertex 0 is the root.
struct TreeDecomposition {
    struct Vertex {
        std::vector<Term> bag;
        int parent = -1;
        std::vector<int> children;
    };
    std::vector<Vertex> vertices;

    int addVertex(std::vector<Term> bag, int parent);
    // Largest bag size.
    size_t width() const;
    size_t size() const { return vertices.size(); }
};

// One bag holding the whole active domain.
TreeDecomposition singleBagDecomposition(const Instance& inst);

// Empty when both decomposition conditions hold, otherwise a description
// of the first violation.
std::optional<std::string> checkDecomposition(const Instance& inst, const TreeDecomposition& td);

} // namespace mondet
