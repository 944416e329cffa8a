#include "mondet/decomposition.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mondet {

int TreeDecomposition::addVertex(std::vector<Term> bag, int parent) {
    int id = static_cast<int>(vertices.size());
    vertices.push_back(Vertex{std::move(bag), parent, {}});
    if (parent >= 0) vertices[parent].children.push_back(id);
    return id;
}

size_t TreeDecomposition::width() const {
    size_t w = 0;
    for (const auto& v : vertices) w = std::max(w, v.bag.size());
    return w;
}

TreeDecomposition singleBagDecomposition(const Instance& inst) {
    TreeDecomposition td;
    td.addVertex(inst.activeDomain(), -1);
    return td;
}

std::optional<std::string> checkDecomposition(const Instance& inst, const TreeDecomposition& td) {
    const auto& vs = td.vertices;
    if (vs.empty()) {
        if (inst.empty()) return std::nullopt;
        return std::string("no vertices");
    }
    if (vs[0].parent != -1) return std::string("vertex 0 is not a root");
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i > 0 && (vs[i].parent < 0 || vs[i].parent >= static_cast<int>(vs.size())))
            return "vertex " + std::to_string(i) + " has no valid parent";
        if (i > 0) {
            const auto& sib = vs[vs[i].parent].children;
            if (std::count(sib.begin(), sib.end(), static_cast<int>(i)) != 1)
                return "vertex " + std::to_string(i) + " missing from its parent's children";
        }
        for (int c : vs[i].children)
            if (c <= 0 || c >= static_cast<int>(vs.size()) || vs[c].parent != static_cast<int>(i))
                return "vertex " + std::to_string(i) + " has an inconsistent child";
        std::set<Term> distinct(vs[i].bag.begin(), vs[i].bag.end());
        if (distinct.size() != vs[i].bag.size()) return "bag " + std::to_string(i) + " repeats a term";
    }
    // Reachability from the root rules out cycles.
    std::vector<char> seen(vs.size(), 0);
    std::vector<int> stack{0};
    size_t reached = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (seen[v]) return std::string("tree has a cycle");
        seen[v] = 1;
        ++reached;
        for (int c : vs[v].children) stack.push_back(c);
    }
    if (reached != vs.size()) return std::string("tree is not connected");

    std::vector<std::set<Term>> bags;
    for (const auto& v : vs) bags.emplace_back(v.bag.begin(), v.bag.end());
    for (const auto& f : inst.facts()) {
        bool covered = false;
        for (const auto& b : bags) {
            if (std::all_of(f.args.begin(), f.args.end(), [&](const Term& t) { return b.count(t) != 0; })) {
                covered = true;
                break;
            }
        }
        if (!covered) return "fact " + toString(f) + " lies in no bag";
    }
    std::map<Term, std::vector<int>> occurrences;
    for (size_t i = 0; i < vs.size(); ++i)
        for (const auto& t : vs[i].bag) occurrences[t].push_back(static_cast<int>(i));
    for (const auto& [t, where] : occurrences) {
        // Connected iff exactly one occurrence has a parent outside the set.
        size_t tops = 0;
        for (int v : where) {
            int p = vs[v].parent;
            if (p < 0 || !bags[p].count(t)) ++tops;
        }
        if (tops != 1) return "vertices holding " + toString(t) + " are not connected";
    }
    return std::nullopt;
}

} // namespace mondet
