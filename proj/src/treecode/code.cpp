#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "mondet/error.hpp"
#include "mondet/treecode.hpp"

namespace mondet {

PartialInjection PartialInjection::identity(size_t k) {
    PartialInjection g = empty(k);
    std::iota(g.image.begin(), g.image.end(), size_t{1});
    return g;
}

bool PartialInjection::injective() const {
    std::set<size_t> seen;
    for (size_t v : image)
        if (v != 0 && !seen.insert(v).second) return false;
    return true;
}

std::vector<PartialInjection> partialInjections(size_t k) {
    std::vector<PartialInjection> out;
    PartialInjection g = PartialInjection::empty(k);
    std::vector<char> used(k + 1, 0);
    std::function<void(size_t)> go = [&](size_t i) {
        if (i == k) {
            out.push_back(g);
            return;
        }
        for (size_t v = 0; v <= k; ++v) {
            if (v != 0 && used[v]) continue;
            g.image[i] = v;
            if (v != 0) used[v] = 1;
            go(i + 1);
            if (v != 0) used[v] = 0;
        }
        g.image[i] = 0;
    };
    go(0);
    return out;
}

bool operator<(const CodeFact& a, const CodeFact& b) {
    if (a.predicate != b.predicate) return a.predicate.name() < b.predicate.name();
    return a.names < b.names;
}

bool operator<(const Letter& a, const Letter& b) {
    if (a.equalities != b.equalities) return a.equalities < b.equalities;
    if (a.facts != b.facts) return a.facts < b.facts;
    return a.maps < b.maps;
}

std::string toString(const Letter& l) {
    std::string s = "{";
    bool first = true;
    auto sep = [&] {
        if (!first) s += ", ";
        first = false;
    };
    for (const auto& [a, b] : l.equalities)
        if (a != b) {
            sep();
            s += "=" + std::to_string(a) + "," + std::to_string(b);
        }
    for (const auto& f : l.facts) {
        sep();
        s += f.predicate.name() + "(";
        for (size_t i = 0; i < f.names.size(); ++i) s += (i ? "," : "") + std::to_string(f.names[i]);
        s += ")";
    }
    for (const auto& g : l.maps) {
        sep();
        s += "g[";
        for (size_t i = 0; i < g.image.size(); ++i) s += (i ? "," : "") + std::to_string(g.image[i]);
        s += "]";
    }
    return s + "}";
}

Letter discreteLetter(size_t k, const PartialInjection& g, std::set<CodeFact> facts) {
    Letter l;
    for (size_t i = 1; i <= k; ++i) l.equalities.insert({i, i});
    l.facts = std::move(facts);
    l.maps.insert(g);
    return l;
}

namespace {

void checkLetterShape(const Letter& l, size_t k, std::map<Symbol, size_t>& arities) {
    auto inRange = [&](size_t n) { return n >= 1 && n <= k; };
    for (const auto& [a, b] : l.equalities)
        if (!inRange(a) || !inRange(b)) throw Error(ErrorCode::InvalidArgument, "equality name out of range");
    for (const auto& f : l.facts) {
        for (size_t n : f.names)
            if (!inRange(n)) throw Error(ErrorCode::InvalidArgument, "fact name out of range");
        auto [it, fresh] = arities.emplace(f.predicate, f.names.size());
        if (!fresh && it->second != f.names.size())
            throw Error(ErrorCode::ArityMismatch, "predicate " + f.predicate.name() + " used with two arities");
    }
    for (const auto& g : l.maps) {
        if (g.image.size() != k) throw Error(ErrorCode::InvalidArgument, "map of wrong width");
        for (size_t v : g.image)
            if (v > k) throw Error(ErrorCode::InvalidArgument, "map image out of range");
        if (!g.injective()) throw Error(ErrorCode::InvalidArgument, "map is not injective");
    }
}

bool condition1(const Letter& l, size_t k) {
    const auto& eq = l.equalities;
    for (size_t i = 1; i <= k; ++i)
        if (!eq.count({i, i})) return false;
    for (const auto& [a, b] : eq) {
        if (!eq.count({b, a})) return false;
        for (const auto& [c, d] : eq)
            if (c == b && !eq.count({a, d})) return false;
    }
    return true;
}

bool condition2(const Letter& l) {
    for (const auto& [a, b] : l.equalities)
        for (const auto& f : l.facts)
            for (size_t i = 0; i < f.names.size(); ++i) {
                if (f.names[i] != a) continue;
                CodeFact g = f;
                g.names[i] = b;
                if (!l.facts.count(g)) return false;
            }
    return true;
}

bool condition3(const Letter& parent, const Letter& child) {
    for (const auto& g : child.maps)
        for (const auto& [a, b] : parent.equalities) {
            if (g.defined(a) != g.defined(b)) return false;
            if (g.defined(a) && !child.equalities.count({g(a), g(b)})) return false;
        }
    return true;
}

std::set<Symbol> nullaryFacts(const Letter& l) {
    std::set<Symbol> out;
    for (const auto& f : l.facts)
        if (f.names.empty()) out.insert(f.predicate);
    return out;
}

} // namespace

std::vector<int> TreeCode::parents() const {
    if (nodes.empty()) throw Error(ErrorCode::InvalidArgument, "tree code has no nodes");
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "tree code width must be positive");
    std::vector<int> parent(nodes.size(), -2);
    parent[0] = -1;
    std::map<Symbol, size_t> arities;
    for (size_t v = 0; v < nodes.size(); ++v) {
        checkLetterShape(nodes[v].label, k, arities);
        const auto& ch = nodes[v].children;
        if (!ch.empty() && ch.size() != r)
            throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(v) + " does not have r children");
        for (size_t c : ch) {
            if (c == 0 || c >= nodes.size() || parent[c] != -2)
                throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(v) + " has an invalid child");
            parent[c] = static_cast<int>(v);
        }
    }
    std::vector<size_t> stack{0};
    size_t reached = 0;
    std::vector<char> seen(nodes.size(), 0);
    while (!stack.empty()) {
        size_t v = stack.back();
        stack.pop_back();
        if (seen[v]) throw Error(ErrorCode::InvalidArgument, "tree code has a cycle");
        seen[v] = 1;
        ++reached;
        for (size_t c : nodes[v].children) stack.push_back(c);
    }
    if (reached != nodes.size()) throw Error(ErrorCode::InvalidArgument, "tree code is not connected");
    return parent;
}

size_t TreeCode::depth() const {
    parents();
    std::function<size_t(size_t)> d = [&](size_t v) {
        size_t best = 0;
        for (size_t c : nodes[v].children) best = std::max(best, d(c));
        return best + 1;
    };
    return d(0);
}

std::optional<int> letterViolation(const Letter& l, size_t k) {
    std::map<Symbol, size_t> arities;
    checkLetterShape(l, k, arities);
    if (!condition1(l, k)) return 1;
    if (!condition2(l)) return 2;
    if (l.maps.size() != 1) return 5;
    return std::nullopt;
}

std::optional<int> coherenceViolation(const TreeCode& t) {
    auto parent = t.parents();
    for (const auto& n : t.nodes)
        if (!condition1(n.label, t.k)) return 1;
    for (const auto& n : t.nodes)
        if (!condition2(n.label)) return 2;
    for (size_t v = 1; v < t.nodes.size(); ++v)
        if (!condition3(t.nodes[parent[v]].label, t.nodes[v].label)) return 3;
    auto nullary = nullaryFacts(t.nodes[0].label);
    for (const auto& n : t.nodes)
        if (nullaryFacts(n.label) != nullary) return 4;
    for (const auto& n : t.nodes)
        if (n.label.maps.size() != 1) return 5;
    return std::nullopt;
}

void checkCoherent(const TreeCode& t) {
    if (auto c = coherenceViolation(t))
        throw Error(ErrorCode::Incoherent, "coherence condition " + std::to_string(*c) + " fails", *c);
}

Instance decode(const TreeCode& t) {
    checkCoherent(t);
    auto parent = t.parents();
    const size_t k = t.k;
    std::vector<size_t> uf(t.nodes.size() * k);
    std::iota(uf.begin(), uf.end(), size_t{0});
    std::function<size_t(size_t)> find = [&](size_t x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    // Union by least index keeps every root the least pair of its class.
    auto unite = [&](size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        uf[b] = a;
    };
    auto id = [&](size_t v, size_t l) { return v * k + (l - 1); };
    for (size_t v = 0; v < t.nodes.size(); ++v) {
        const auto& lab = t.nodes[v].label;
        for (const auto& [a, b] : lab.equalities) unite(id(v, a), id(v, b));
        if (parent[v] < 0) continue;
        const auto& g = *lab.maps.begin();
        for (size_t l = 1; l <= k; ++l)
            if (g.defined(l)) unite(id(static_cast<size_t>(parent[v]), l), id(v, g(l)));
    }
    std::map<size_t, Term> element;
    for (size_t x = 0; x < uf.size(); ++x) {
        size_t root = find(x);
        if (!element.count(root)) element.emplace(root, Term::constant("e" + std::to_string(element.size() + 1)));
    }
    Instance out;
    for (size_t v = 0; v < t.nodes.size(); ++v)
        for (const auto& f : t.nodes[v].label.facts) {
            std::vector<Term> args;
            for (size_t n : f.names) args.push_back(element.at(find(id(v, n))));
            out.add(Atom(f.predicate, std::move(args)));
        }
    return out;
}

namespace {

class Encoder {
public:
    Encoder(const TreeDecomposition& td, const std::vector<std::vector<Atom>>& placed, size_t r, size_t k)
        : td_(td), placed_(placed), r_(r), k_(k) {
        for (const auto& fs : placed)
            for (const auto& f : fs)
                if (f.args.empty()) nullary_.insert(CodeFact{f.predicate, {}});
        code_.k = k;
        code_.r = r;
    }

    TreeCode run() {
        if (td_.vertices.empty()) {
            addNode(discreteLetter(k_, PartialInjection::empty(k_), nullary_));
        } else {
            build(0, td_.vertices[0].children, nullptr, false);
        }
        return std::move(code_);
    }

private:
    size_t addNode(Letter l) {
        code_.nodes.push_back(CodeNode{std::move(l), {}});
        return code_.nodes.size() - 1;
    }

    std::map<Term, size_t> namesOf(int v) const {
        std::map<Term, size_t> names;
        const auto& bag = td_.vertices[v].bag;
        for (size_t i = 0; i < bag.size(); ++i) names[bag[i]] = i + 1;
        return names;
    }

    // Node for vertex v (a copy of it when copy is set) carrying the given
    // children of v.
    size_t build(int v, std::vector<int> children, const std::map<Term, size_t>* parentNames, bool copy) {
        auto names = namesOf(v);
        PartialInjection g = PartialInjection::empty(k_);
        if (parentNames)
            for (const auto& [t, pl] : *parentNames)
                if (auto it = names.find(t); it != names.end()) g.image[pl - 1] = it->second;
        std::set<CodeFact> facts = nullary_;
        if (!copy)
            for (const auto& f : placed_[v]) {
                CodeFact cf{f.predicate, {}};
                for (const auto& a : f.args) cf.names.push_back(names.at(a));
                facts.insert(std::move(cf));
            }
        size_t node = addNode(discreteLetter(k_, g, std::move(facts)));
        if (children.empty()) return node;
        std::vector<size_t> kids;
        if (children.size() <= r_) {
            for (int c : children) kids.push_back(build(c, td_.vertices[c].children, &names, false));
            while (kids.size() < r_) kids.push_back(addNode(discreteLetter(k_, PartialInjection::empty(k_), nullary_)));
        } else {
            for (size_t i = 0; i + 1 < r_; ++i)
                kids.push_back(build(children[i], td_.vertices[children[i]].children, &names, false));
            std::vector<int> rest(children.begin() + static_cast<long>(r_ - 1), children.end());
            kids.push_back(build(v, std::move(rest), &names, true));
        }
        code_.nodes[node].children = std::move(kids);
        return node;
    }

    const TreeDecomposition& td_;
    const std::vector<std::vector<Atom>>& placed_;
    size_t r_;
    size_t k_;
    std::set<CodeFact> nullary_;
    TreeCode code_;
};

size_t resolveWidth(const TreeDecomposition& td, size_t r, std::optional<size_t> k) {
    if (r < 2) throw Error(ErrorCode::InvalidArgument, "branching width must be at least 2");
    size_t w = td.width();
    size_t kk = k.value_or(std::max<size_t>(1, w));
    if (kk == 0) throw Error(ErrorCode::InvalidArgument, "width must be positive");
    if (w > kk)
        throw Error(ErrorCode::WidthExceeded, "bag of size " + std::to_string(w) + " exceeds width " + std::to_string(kk));
    return kk;
}

} // namespace

TreeCode encodePlaced(const TreeDecomposition& td, const std::vector<std::vector<Atom>>& placed, size_t r,
                      std::optional<size_t> k) {
    if (placed.size() != td.vertices.size())
        throw Error(ErrorCode::InvalidArgument, "one fact list per vertex expected");
    Instance all;
    for (const auto& fs : placed)
        for (const auto& f : fs) all.add(f);
    if (auto bad = checkDecomposition(all, td)) throw Error(ErrorCode::InvalidDecomposition, *bad);
    for (size_t v = 0; v < placed.size(); ++v) {
        std::set<Term> bag(td.vertices[v].bag.begin(), td.vertices[v].bag.end());
        for (const auto& f : placed[v])
            for (const auto& a : f.args)
                if (!bag.count(a))
                    throw Error(ErrorCode::InvalidDecomposition, toString(f) + " placed outside its bag");
    }
    size_t kk = resolveWidth(td, r, k);
    return Encoder(td, placed, r, kk).run();
}

TreeCode encode(const Instance& inst, const TreeDecomposition& td, size_t r, std::optional<size_t> k) {
    if (auto bad = checkDecomposition(inst, td)) throw Error(ErrorCode::InvalidDecomposition, *bad);
    std::vector<std::vector<Atom>> placed(td.vertices.size());
    std::vector<std::set<Term>> bags;
    for (const auto& v : td.vertices) bags.emplace_back(v.bag.begin(), v.bag.end());
    for (const auto& f : inst.facts()) {
        for (size_t v = 0; v < bags.size(); ++v)
            if (std::all_of(f.args.begin(), f.args.end(), [&](const Term& t) { return bags[v].count(t) != 0; })) {
                placed[v].push_back(f);
                break;
            }
    }
    return encodePlaced(td, placed, r, k);
}

TreeCode approximationCode(const Approximation& a, size_t k, size_t r) {
    auto freeze = [](const Term& t) { return t.isVariable() ? Term::constant("c_" + t.name()) : t; };
    TreeDecomposition td = a.decomposition;
    for (auto& v : td.vertices)
        for (auto& t : v.bag) t = freeze(t);
    std::vector<std::vector<Atom>> placed(td.vertices.size());
    for (const auto& n : a.tree.nodes)
        if (n.isLeaf()) {
            Atom f = n.label;
            for (auto& t : f.args) t = freeze(t);
            placed.at(static_cast<size_t>(n.vertex)).push_back(std::move(f));
        }
    return encodePlaced(td, placed, r, k);
}

} // namespace mondet
