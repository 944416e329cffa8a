#include <set>

#include "build.hpp"
#include "mondet/corpus.hpp"
#include "mondet/error.hpp"

namespace mondet {

using corpus_detail::atom;
using corpus_detail::append;

void CASpec::validate() const {
    if (states == 0) throw Error(ErrorCode::InvalidArgument, "cellular automaton without states");
    if (target >= states) throw Error(ErrorCode::InvalidArgument, "target state out of range");
    std::map<std::vector<size_t>, size_t> seen;
    for (const auto& t : transitions) {
        if (t.from.size() != 2 && t.from.size() != 3)
            throw Error(ErrorCode::InvalidArgument, "transition windows have two or three cells");
        for (size_t s : t.from)
            if (s >= states) throw Error(ErrorCode::InvalidArgument, "transition state out of range");
        if (t.to >= states) throw Error(ErrorCode::InvalidArgument, "transition state out of range");
        auto [it, fresh] = seen.emplace(t.from, t.to);
        if (!fresh && it->second != t.to)
            throw Error(ErrorCode::NondeterministicSpec, "two outputs for one window");
    }
}

std::optional<size_t> CASpec::apply(const std::vector<size_t>& window) const {
    for (const auto& t : transitions)
        if (t.from == window) return t.to;
    return std::nullopt;
}

std::string caStatePredicate(size_t i) { return "T" + std::to_string(i); }

namespace {

// z2 is the right neighbour of z1.
std::vector<Atom> rightOf(const std::string& z1, const std::string& z2, const std::string& tag) {
    std::string y = "Y" + tag, x1 = "X" + tag + "a", x2 = "X" + tag + "b";
    return {atom("YProj", {y, z1}), atom("XProj", {x1, z1}), atom("XSucc", {x1, x2}),
            atom("XProj", {x2, z2}), atom("YProj", {y, z2})};
}

// z2 is the downward neighbour of z1.
std::vector<Atom> downTo(const std::string& z1, const std::string& z2, const std::string& tag) {
    std::string x = "X" + tag, y1 = "Y" + tag + "a", y2 = "Y" + tag + "b";
    return {atom("XProj", {x, z2}), atom("YProj", {y2, z2}), atom("YSucc", {y2, y1}),
            atom("YProj", {y1, z1}), atom("XProj", {x, z1})};
}

std::vector<Atom> startAtoms() {
    return {atom("G", {"Z0", "X0", "X1"}), atom("Xzero", {"X0"}), atom("Gp", {"Z0", "Y0", "Y1"}),
            atom("Yzero", {"Y0"})};
}

} // namespace

MonDetProblem genCellular(const CASpec& spec) {
    spec.validate();
    MonDetProblem p;
    p.query = UnionQuery(ConjunctiveQuery({}, startAtoms()));

    ViewSet views;
    views.add(ViewDefinition(Symbol("S"), UnionQuery(ConjunctiveQuery(
                                               corpus_detail::vars({"X", "Y"}),
                                               {atom("XProj", {"X", "Z"}), atom("YProj", {"Y", "Z"})}))));
    views.add(corpus_detail::atomicView("Xzero", 1));
    views.add(corpus_detail::atomicView("Yzero", 1));
    views.add(corpus_detail::atomicView("XSucc", 2));
    views.add(corpus_detail::atomicView("YSucc", 2));
    p.views = std::move(views);

    auto& r = p.rules;
    r.emplace_back(std::vector<Atom>{atom("G", {"Z", "X", "X1"})}, std::vector<Atom>{atom("G", {"Z", "X1", "X2"})});
    r.emplace_back(std::vector<Atom>{atom("G", {"Z", "X", "X1"})},
                   std::vector<Atom>{atom("XProj", {"X", "Z"}), atom("XSucc", {"X", "X1"})});
    r.emplace_back(std::vector<Atom>{atom("Gp", {"Z", "Y", "Y1"})}, std::vector<Atom>{atom("Gp", {"Z", "Y1", "Y2"})});
    r.emplace_back(std::vector<Atom>{atom("Gp", {"Z", "Y", "Y1"})},
                   std::vector<Atom>{atom("YProj", {"Y", "Z"}), atom("YSucc", {"Y", "Y1"})});

    r.emplace_back(std::vector<Atom>{atom("YProj", {"Y", "Z"}), atom("Yzero", {"Y"})},
                   std::vector<Atom>{atom("A", {"Z"})});
    r.emplace_back(std::vector<Atom>{atom("A", {"Z"})}, std::vector<Atom>{atom(caStatePredicate(0), {"Z"})});
    for (const auto& t : spec.transitions) {
        std::vector<Atom> body;
        if (t.from.size() == 2) {
            body.push_back(atom(caStatePredicate(t.from[0]), {"C"}));
            body.push_back(atom("XProj", {"Xe", "C"}));
            body.push_back(atom("Xzero", {"Xe"}));
            append(body, rightOf("C", "D", "r"));
            body.push_back(atom(caStatePredicate(t.from[1]), {"D"}));
        } else {
            body.push_back(atom(caStatePredicate(t.from[0]), {"B"}));
            append(body, rightOf("B", "C", "l"));
            body.push_back(atom(caStatePredicate(t.from[1]), {"C"}));
            append(body, rightOf("C", "D", "r"));
            body.push_back(atom(caStatePredicate(t.from[2]), {"D"}));
        }
        append(body, downTo("N", "C", "d"));
        r.emplace_back(std::move(body), std::vector<Atom>{atom(caStatePredicate(t.to), {"N"})});
    }
    r.emplace_back(std::vector<Atom>{atom(caStatePredicate(spec.target), {"W"})}, startAtoms());
    return p;
}

CAReport simulateCA(const CASpec& spec, size_t maxGenerations) {
    spec.validate();
    CAReport rep;
    rep.generations = maxGenerations;
    std::set<size_t> produced;
    for (const auto& t : spec.transitions) produced.insert(t.to);
    rep.provablyUnreachable = spec.target != 0 && produced.count(spec.target) == 0;

    size_t width = 2 * maxGenerations + 2;
    rep.rows.emplace_back(width, std::optional<size_t>(0));
    for (size_t g = 0;; ++g) {
        const auto& row = rep.rows.back();
        // Cells beyond g + 1 repeat cell g + 1, so these cover the whole tape.
        for (size_t x = 0; x < row.size() && x <= g + 1; ++x)
            if (row[x] == spec.target && !rep.reachedAt) rep.reachedAt = g;
        if (g == maxGenerations) break;
        std::vector<std::optional<size_t>> next(row.size() - 1);
        for (size_t x = 0; x + 1 < row.size(); ++x) {
            std::vector<size_t> window;
            bool defined = true;
            for (size_t c = x == 0 ? 0 : x - 1; c <= x + 1; ++c) {
                if (!row[c]) defined = false;
                else window.push_back(*row[c]);
            }
            if (defined) next[x] = spec.apply(window);
        }
        rep.rows.push_back(std::move(next));
    }
    return rep;
}

} // namespace mondet
