#include <algorithm>
#include <cctype>
#include <set>

#include "build.hpp"
#include "mondet/corpus.hpp"
#include "mondet/error.hpp"

namespace mondet {

using corpus_detail::atom;

namespace {

bool identifier(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

bool member(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

} // namespace

void TMSpec::validate() const {
    for (const auto& a : alphabet)
        if (!identifier(a)) throw Error(ErrorCode::InvalidArgument, "bad tape symbol '" + a + "'");
    for (const auto& s : states)
        if (!identifier(s)) throw Error(ErrorCode::InvalidArgument, "bad state name '" + s + "'");
    for (const auto* s : {&blank, &left, &right})
        if (!member(alphabet, *s)) throw Error(ErrorCode::InvalidArgument, "alphabet lacks " + *s);
    if (blank == left || blank == right || left == right)
        throw Error(ErrorCode::InvalidArgument, "blank and end marks must differ");
    if (!member(states, start) || !member(states, end))
        throw Error(ErrorCode::InvalidArgument, "states lack the start or end state");
    std::map<std::pair<std::string, std::string>, const TMTransition*> seen;
    for (const auto& t : delta) {
        if (!member(states, t.state) || !member(states, t.next) || !member(alphabet, t.read) ||
            !member(alphabet, t.write))
            throw Error(ErrorCode::InvalidArgument, "transition uses an unknown state or symbol");
        if (t.state == end) throw Error(ErrorCode::InvalidArgument, "transition out of the end state");
        if ((t.read == left || t.read == right || t.write == left || t.write == right) && t.read != t.write)
            throw Error(ErrorCode::InvalidArgument, "transition writes over an end mark");
        if ((t.read == left && t.move == Move::Left) || (t.read == right && t.move == Move::Right))
            throw Error(ErrorCode::InvalidArgument, "transition moves past an end mark");
        auto [it, fresh] = seen.emplace(std::make_pair(t.state, t.read), &t);
        if (!fresh) {
            const auto& o = *it->second;
            if (o.next != t.next || o.write != t.write || o.move != t.move)
                throw Error(ErrorCode::NondeterministicSpec, "two transitions for " + t.state + " on " + t.read);
        }
    }
}

const TMTransition* TMSpec::find(const std::string& state, const std::string& read) const {
    for (const auto& t : delta)
        if (t.state == state && t.read == read) return &t;
    return nullptr;
}

std::string cellPredicate(const Cell& c) {
    return c.state ? "Head_" + *c.state + "_" + c.symbol : "Cell_" + c.symbol;
}

const char* tmOutcomeName(TMOutcome o) {
    switch (o) {
    case TMOutcome::Halted: return "HALTED";
    case TMOutcome::Stuck: return "STUCK";
    case TMOutcome::Running: return "RUNNING";
    }
    return "?";
}

namespace {

// Content of B after one step; nullopt when the head in the window has no
// transition or the window holds two heads.
std::optional<Cell> step(const TMSpec& spec, const Cell* a, const Cell& b, const Cell* c) {
    int heads = (a && a->state) + (b.state ? 1 : 0) + (c && c->state);
    if (heads > 1) return std::nullopt;
    auto moved = [&](const Cell& h) -> const TMTransition* { return spec.find(*h.state, h.symbol); };
    if (b.state) {
        if (*b.state == spec.end) return b;
        const TMTransition* t = moved(b);
        if (!t) return std::nullopt;
        if (t->move == Move::Stay) return Cell{t->write, t->next};
        return Cell{t->write, std::nullopt};
    }
    for (auto [n, dir] : {std::pair{a, Move::Right}, std::pair{c, Move::Left}}) {
        if (!n || !n->state) continue;
        if (*n->state == spec.end) return b;
        const TMTransition* t = moved(*n);
        if (!t) return std::nullopt;
        if (t->move == dir) return Cell{b.symbol, t->next};
    }
    return b;
}

std::vector<Cell> allCells(const TMSpec& spec) {
    std::vector<Cell> out;
    for (const auto& a : spec.alphabet) {
        out.push_back(Cell{a, std::nullopt});
        for (const auto& s : spec.states) out.push_back(Cell{a, s});
    }
    return out;
}

} // namespace

CellTables cellTables(const TMSpec& spec) {
    spec.validate();
    CellTables t;
    auto cells = allCells(spec);
    for (const auto& a : cells)
        for (const auto& b : cells) {
            if (a.symbol == spec.left && b.symbol != spec.left)
                if (auto n = step(spec, nullptr, a, &b)) t.left.emplace(std::pair{a, b}, *n);
            if (b.symbol == spec.right && a.symbol != spec.right)
                if (auto n = step(spec, &a, b, nullptr)) t.right.emplace(std::pair{a, b}, *n);
            if (b.symbol == spec.left || b.symbol == spec.right || a.symbol == spec.right) continue;
            for (const auto& c : cells) {
                if (c.symbol == spec.left) continue;
                if (auto n = step(spec, &a, b, &c)) t.mid.emplace(std::tuple{a, b, c}, *n);
            }
        }
    return t;
}

MonDetProblem genTM(const TMSpec& spec) {
    CellTables tables = cellTables(spec);
    MonDetProblem p;

    std::vector<DatalogRule> q;
    q.push_back({Atom("Goal", {}), {atom("Reached", {"X"}), atom("Last", {"X"})}});
    q.push_back({atom("Reached", {"X"}), {atom("First", {"X"})}});
    q.push_back({atom("Reached", {"Y"}), {atom("Reached", {"X"}), atom("Succ", {"X", "Y"})}});
    p.query = DatalogProgram(std::move(q), Symbol("Goal"));

    ViewSet views;
    views.add(corpus_detail::atomicView("First", 1));
    views.add(corpus_detail::atomicView("Last", 1));
    p.views = std::move(views);

    auto rule = [&](std::vector<Atom> body, Atom head) {
        p.rules.emplace_back(std::move(body), std::vector<Atom>{std::move(head)});
    };
    auto cell = [](const Cell& c, const std::string& s, const std::string& t) { return atom(cellPredicate(c), {s, t}); };
    Cell startCell{spec.left, spec.start};
    Cell rightCell{spec.right, std::nullopt};
    Cell blankCell{spec.blank, std::nullopt};

    rule({atom("Succ", {"X", "Y"})}, atom("SuccPlus", {"X", "Y"}));
    rule({atom("SuccPlus", {"X", "Y"}), atom("Succ", {"Y", "Z"})}, atom("SuccPlus", {"X", "Z"}));

    rule({atom("First", {"S"}), atom("First", {"T"}), atom("Succ", {"T", "T1"})}, cell(startCell, "S", "T"));
    rule({atom("Last", {"S"}), atom("First", {"T"}), atom("Succ", {"T", "T1"})}, cell(rightCell, "S", "T"));
    rule({atom("First", {"S"}), atom("SuccPlus", {"S", "S1"}), atom("SuccPlus", {"S1", "S2"}), atom("Last", {"S2"}),
          atom("First", {"T"})},
         cell(blankCell, "S1", "T"));

    for (const auto& [w, n] : tables.left)
        rule({atom("First", {"S"}), atom("Succ", {"S", "S1"}), cell(w.first, "S", "T"), cell(w.second, "S1", "T"),
              atom("Succ", {"T", "T1"})},
             cell(n, "S", "T1"));
    for (const auto& [w, n] : tables.mid)
        rule({atom("Succ", {"S", "S1"}), atom("Succ", {"S1", "S2"}), cell(std::get<0>(w), "S", "T"),
              cell(std::get<1>(w), "S1", "T"), cell(std::get<2>(w), "S2", "T"), atom("Succ", {"T", "T1"})},
             cell(n, "S1", "T1"));
    for (const auto& [w, n] : tables.right)
        rule({atom("Succ", {"S", "S1"}), atom("Last", {"S1"}), cell(w.first, "S", "T"), cell(w.second, "S1", "T"),
              atom("Succ", {"T", "T1"})},
             cell(n, "S1", "T1"));

    for (const auto& c : allCells(spec))
        if (c.state && *c.state != spec.end) rule({cell(c, "C", "T"), atom("Last", {"T"})}, atom("First", {"T"}));
    return p;
}

TMRun runTM(const TMSpec& spec, size_t length) {
    if (length < 2) throw Error(ErrorCode::InvalidArgument, "tape length must be at least 2");
    TMRun run;
    run.length = length;
    std::vector<std::string> tape(length, spec.blank);
    tape.front() = spec.left;
    tape.back() = spec.right;
    size_t head = 0;
    std::string state = spec.start;
    auto snapshot = [&] {
        std::vector<Cell> row;
        for (size_t s = 0; s < length; ++s)
            row.push_back(Cell{tape[s], s == head ? std::optional<std::string>(state) : std::nullopt});
        run.cells.push_back(std::move(row));
    };
    snapshot();
    for (size_t t = 1; t < length; ++t) {
        if (state != spec.end) {
            const TMTransition* tr = spec.find(state, tape[head]);
            if (!tr) {
                run.outcome = TMOutcome::Stuck;
                return run;
            }
            tape[head] = tr->write;
            head = static_cast<size_t>(static_cast<long>(head) + static_cast<int>(tr->move));
            state = tr->next;
            ++run.steps;
        }
        snapshot();
    }
    run.outcome = state == spec.end ? TMOutcome::Halted : TMOutcome::Running;
    return run;
}

TMReport simulateTM(const TMSpec& spec, size_t maxLength) {
    spec.validate();
    TMReport rep;
    for (size_t len = 2; len <= maxLength; ++len) {
        rep.runs.push_back(runTM(spec, len));
        if (rep.runs.back().halts() && !rep.haltingLength) rep.haltingLength = len;
    }
    return rep;
}

} // namespace mondet
