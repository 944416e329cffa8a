#include <functional>

#include "build.hpp"
#include "mondet/corpus.hpp"
#include "mondet/error.hpp"

namespace mondet {

using corpus_detail::append;
using corpus_detail::atom;

void TilingSpec::validate() const {
    if (tiles.empty()) throw Error(ErrorCode::EmptyTileset, "tiling without tiles");
    for (const auto& t : tiles)
        if (t.empty()) throw Error(ErrorCode::InvalidArgument, "empty tile name");
    for (const auto& f : forbidden)
        if (f.first >= tiles.size() || f.second >= tiles.size())
            throw Error(ErrorCode::InvalidArgument, "forbidden pair names an unknown tile");
    if (initial && *initial >= tiles.size()) throw Error(ErrorCode::InvalidArgument, "unknown initial tile");
}

bool TilingSpec::allowed(size_t a, size_t b, Orientation o) const {
    for (const auto& f : forbidden)
        if (f.first == a && f.second == b && f.orientation == o) return false;
    return true;
}

std::string tilePredicate(const TilingSpec& spec, size_t tile) { return "T_" + spec.tiles.at(tile); }

namespace {

std::string idx(const std::string& base, size_t k) { return base + std::to_string(k); }

std::vector<Atom> badQuery(const TilingSpec& spec, const ForbiddenPair& p, size_t k) {
    std::string v = idx("P", k), w = idx("W", k);
    std::string xa = idx("Xa", k), xb = idx("Xb", k), xc = idx("Xc", k);
    std::string ya = idx("Ya", k), yb = idx("Yb", k), yc = idx("Yc", k);
    std::vector<Atom> out{atom(tilePredicate(spec, p.first), {v}), atom(tilePredicate(spec, p.second), {w})};
    if (p.orientation == Orientation::Vertical) {
        append(out, {atom("Grid_x", {v, xa, xb}), atom("Grid_x", {w, xa, xb}), atom("Grid_y", {v, ya, yb}),
                     atom("Grid_y", {w, yb, yc})});
    } else {
        append(out, {atom("Grid_x", {v, xa, xb}), atom("Grid_x", {w, xb, xc}), atom("Grid_y", {v, ya, yb}),
                     atom("Grid_y", {w, ya, yb})});
    }
    return out;
}

std::vector<Atom> netClique(size_t pairs) {
    std::vector<std::string> nodes{"V0"};
    for (size_t k = 1; k <= pairs; ++k) nodes.push_back(idx("P", k));
    std::vector<Atom> out;
    for (const auto& a : nodes)
        for (const auto& b : nodes)
            if (a != b) out.push_back(atom("Net", {a, b}));
    return out;
}

std::vector<Atom> slot(const TilingSpec& spec, const std::string& x) {
    std::vector<Atom> out{atom("GridSource", {x})};
    for (size_t i = 0; i < spec.tiles.size(); ++i) out.push_back(atom(tilePredicate(spec, i), {x}));
    append(out, {atom("Axis_x", {x, x}), atom("Axis_y", {x, x}), atom("Grid_x", {x, x, x}),
                 atom("Grid_y", {x, x, x})});
    return out;
}

MonDetProblem tilingCQ(const TilingSpec& spec) {
    size_t f = spec.forbidden.size();
    std::vector<Atom> free{atom("Axis_x", {"X0", "X1"}), atom("Axis_y", {"Y0", "Y1"}), atom("GridSource", {"V0"})};
    append(free, netClique(f));
    for (size_t k = 1; k <= f; ++k) append(free, badQuery(spec, spec.forbidden[k - 1], k));

    MonDetProblem p;
    p.query = UnionQuery(ConjunctiveQuery({}, free));

    std::vector<Term> head = corpus_detail::vars({"X0", "X1", "Y0", "Y1"});
    for (size_t k = 1; k <= f; ++k) head.push_back(corpus_detail::var(idx("P", k)));
    std::vector<ConjunctiveQuery> disjuncts{ConjunctiveQuery(head, free)};
    for (size_t i = 0; i < spec.tiles.size(); ++i) {
        std::vector<Atom> chose{atom(tilePredicate(spec, i), {"V0"}), atom("Grid_x", {"V0", "X0", "X1"}),
                                atom("Grid_y", {"V0", "Y0", "Y1"})};
        append(chose, netClique(f));
        for (size_t k = 1; k <= f; ++k) append(chose, slot(spec, idx("P", k)));
        disjuncts.emplace_back(head, std::move(chose));
    }
    ViewSet views;
    views.add(ViewDefinition(Symbol("V"), UnionQuery(head.size(), std::move(disjuncts))));
    p.views = std::move(views);

    p.rules.emplace_back(std::vector<Atom>{atom("Axis_x", {"X", "X1"})}, std::vector<Atom>{atom("Axis_x", {"X1", "X2"})});
    p.rules.emplace_back(std::vector<Atom>{atom("Axis_y", {"Y", "Y1"})}, std::vector<Atom>{atom("Axis_y", {"Y1", "Y2"})});
    return p;
}

std::vector<Atom> horizontalAdjacent(const std::string& z1, const std::string& z2, const std::string& y,
                                     const std::string& x1, const std::string& x2) {
    return {atom("XProj", {x1, z1}), atom("YProj", {y, z1}), atom("XProj", {x2, z2}), atom("YProj", {y, z2}),
            atom("XSucc", {x1, x2})};
}

std::vector<Atom> verticalAdjacent(const std::string& z1, const std::string& z2, const std::string& y1,
                                   const std::string& y2, const std::string& x) {
    return {atom("XProj", {x, z1}), atom("YProj", {y1, z1}), atom("XProj", {x, z2}), atom("YProj", {y2, z2}),
            atom("YSucc", {y1, y2})};
}

MonDetProblem tilingUCQ(const TilingSpec& spec) {
    MonDetProblem p;
    std::vector<ConjunctiveQuery> q{ConjunctiveQuery({}, {atom("Init", {"X"}), atom("Origin", {"X"})})};
    for (const auto& f : spec.forbidden) {
        std::vector<Atom> body = f.orientation == Orientation::Horizontal
                                     ? horizontalAdjacent("Z1", "Z2", "Y", "X1", "X2")
                                     : verticalAdjacent("Z1", "Z2", "Y1", "Y2", "X");
        body.push_back(atom(tilePredicate(spec, f.first), {"Z1"}));
        body.push_back(atom(tilePredicate(spec, f.second), {"Z2"}));
        q.emplace_back(std::vector<Term>{}, std::move(body));
    }
    if (spec.initial)
        for (size_t i = 0; i < spec.tiles.size(); ++i)
            if (i != *spec.initial)
                q.emplace_back(std::vector<Term>{},
                               std::vector<Atom>{atom("Origin", {"X"}), atom(tilePredicate(spec, i), {"X"})});
    p.query = UnionQuery(0, std::move(q));

    ViewSet views;
    std::vector<Term> sHead = corpus_detail::vars({"X", "Y"});
    std::vector<ConjunctiveQuery> s{ConjunctiveQuery(sHead, {atom("A1", {"X"}), atom("A2", {"Y"})})};
    for (size_t i = 0; i < spec.tiles.size(); ++i)
        s.emplace_back(sHead, std::vector<Atom>{atom("XProj", {"X", "Z"}), atom(tilePredicate(spec, i), {"Z"}),
                                                atom("YProj", {"Y", "Z"})});
    views.add(ViewDefinition(Symbol("S"), UnionQuery(2, std::move(s))));
    views.add(corpus_detail::atomicView("YSucc", 2));
    views.add(corpus_detail::atomicView("XSucc", 2));
    views.add(corpus_detail::atomicView("Origin", 1));
    for (size_t i = 0; i < spec.tiles.size(); ++i) views.add(corpus_detail::atomicView(tilePredicate(spec, i), 1));
    views.add(ViewDefinition(Symbol("V_HA"),
                             UnionQuery(ConjunctiveQuery(corpus_detail::vars({"Z1", "Z2", "Y", "X1", "X2"}),
                                                         horizontalAdjacent("Z1", "Z2", "Y", "X1", "X2")))));
    views.add(ViewDefinition(Symbol("V_VA"),
                             UnionQuery(ConjunctiveQuery(corpus_detail::vars({"Z1", "Z2", "Y1", "Y2", "X"}),
                                                         verticalAdjacent("Z1", "Z2", "Y1", "Y2", "X")))));
    p.views = std::move(views);

    auto& r = p.rules;
    r.emplace_back(std::vector<Atom>{atom("Init", {"X"})}, std::vector<Atom>{atom("A1", {"X"}), atom("A2", {"X"})});
    r.emplace_back(std::vector<Atom>{atom("A1", {"X"})}, std::vector<Atom>{atom("XSucc", {"X", "Y"}), atom("A1", {"Y"})});
    r.emplace_back(std::vector<Atom>{atom("A2", {"X"})}, std::vector<Atom>{atom("YSucc", {"X", "Y"}), atom("A2", {"Y"})});
    r.emplace_back(std::vector<Atom>{atom("A1", {"X"})}, std::vector<Atom>{atom("Init", {"Y"}), atom("Origin", {"Y"})});
    r.emplace_back(std::vector<Atom>{atom("A2", {"X"})}, std::vector<Atom>{atom("Init", {"Y"}), atom("Origin", {"Y"})});
    return p;
}

} // namespace

MonDetProblem genTiling(const TilingSpec& spec, TilingMode mode) {
    spec.validate();
    return mode == TilingMode::CQ ? tilingCQ(spec) : tilingUCQ(spec);
}

bool tilingValid(const TilingSpec& spec, const std::vector<std::vector<size_t>>& tiling) {
    for (size_t y = 0; y < tiling.size(); ++y)
        for (size_t x = 0; x < tiling[y].size(); ++x) {
            if (x + 1 < tiling[y].size() && !spec.allowed(tiling[y][x], tiling[y][x + 1], Orientation::Horizontal))
                return false;
            if (y + 1 < tiling.size() && x < tiling[y + 1].size() &&
                !spec.allowed(tiling[y][x], tiling[y + 1][x], Orientation::Vertical))
                return false;
        }
    return true;
}

TilingReport simulateTiling(const TilingSpec& spec, size_t maxSize) {
    spec.validate();
    TilingReport rep;
    for (size_t n = 1; n <= maxSize; ++n) {
        std::vector<std::vector<size_t>> grid(n, std::vector<size_t>(n, 0));
        std::optional<std::vector<std::vector<size_t>>> witness;
        bool withInitial = false;
        // Fills cells in row-major order, checking the left and lower neighbours.
        std::function<void(size_t)> fill = [&](size_t cell) {
            if (witness && (withInitial || !spec.initial)) return;
            if (cell == n * n) {
                if (!witness) witness = grid;
                if (spec.initial && grid[0][0] == *spec.initial) withInitial = true;
                return;
            }
            size_t y = cell / n, x = cell % n;
            for (size_t t = 0; t < spec.tiles.size(); ++t) {
                if (x > 0 && !spec.allowed(grid[y][x - 1], t, Orientation::Horizontal)) continue;
                if (y > 0 && !spec.allowed(grid[y - 1][x], t, Orientation::Vertical)) continue;
                grid[y][x] = t;
                fill(cell + 1);
            }
        };
        fill(0);
        rep.validBySize.push_back(witness.has_value());
        rep.validWithInitialBySize.push_back(spec.initial ? withInitial : witness.has_value());
        rep.witnesses.push_back(witness);
    }
    return rep;
}

} // namespace mondet
