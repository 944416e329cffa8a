#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mondet/determinacy.hpp"

namespace mondet {

// ---- Cellular automata ----

// T_{from...} -> T_to with a window of two (left edge) or three cells.
struct CATransition {
    std::vector<size_t> from;
    size_t to = 0;
};

// States T_0..T_{states-1}; T_0 is the blank state.
struct CASpec {
    size_t states = 1;
    std::vector<CATransition> transitions;
    size_t target = 0;

    // NONDETERMINISTIC_SPEC on two outputs for one window, INVALID_ARGUMENT
    // on bad state indices or window sizes.
    void validate() const;
    std::optional<size_t> apply(const std::vector<size_t>& window) const;
};

// Q with G, Gp, Xzero and Yzero atoms; the join view S plus atomic views;
// grid rules, transition rules and acceptance rules.
MonDetProblem genCellular(const CASpec& spec);
// Predicate holding the cell state T_i.
std::string caStatePredicate(size_t i);

struct CAReport {
    // First generation in which the target appears, within the bound.
    std::optional<size_t> reachedAt;
    // No transition produces the target and the target is not blank.
    bool provablyUnreachable = false;
    size_t generations = 0;
    // rows[g][x]: state of cell x in generation g, for x <= 2 * bound + 1 - g.
    std::vector<std::vector<std::optional<size_t>>> rows;
};

CAReport simulateCA(const CASpec& spec, size_t maxGenerations);

// ---- Tilings ----

enum class Orientation { Horizontal, Vertical };

struct ForbiddenPair {
    size_t first = 0;
    size_t second = 0;
    Orientation orientation = Orientation::Horizontal;

    friend auto operator<=>(const ForbiddenPair&, const ForbiddenPair&) = default;
};

struct TilingSpec {
    std::vector<std::string> tiles;
    std::vector<ForbiddenPair> forbidden;
    std::optional<size_t> initial;

    // EMPTY_TILESET without tiles, INVALID_ARGUMENT on bad tile indices.
    void validate() const;
    bool allowed(size_t a, size_t b, Orientation o) const;
};

enum class TilingMode { CQ, UCQ };

MonDetProblem genTiling(const TilingSpec& spec, TilingMode mode);
std::string tilePredicate(const TilingSpec& spec, size_t tile);

struct TilingReport {
    // validBySize[n-1]: an n x n tiling without forbidden pairs exists.
    std::vector<bool> validBySize;
    // With the initial tile at (0,0); equal to validBySize without one.
    std::vector<bool> validWithInitialBySize;
    // One witness tiling per size, row-major [y][x], when valid.
    std::vector<std::optional<std::vector<std::vector<size_t>>>> witnesses;
};

TilingReport simulateTiling(const TilingSpec& spec, size_t maxSize);
// No forbidden pair occurs in the finite tiling, given as [y][x].
bool tilingValid(const TilingSpec& spec, const std::vector<std::vector<size_t>>& tiling);

// ---- Turing machines ----

enum class Move { Left = -1, Stay = 0, Right = 1 };

struct TMTransition {
    std::string state;
    std::string read;
    std::string next;
    std::string write;
    Move move = Move::Stay;
};

struct TMSpec {
    std::vector<std::string> alphabet;
    std::string blank = "Blank";
    std::string left = "Left";
    std::string right = "Right";
    std::vector<std::string> states;
    std::string start = "start";
    std::string end = "end";
    std::vector<TMTransition> delta;

    // NONDETERMINISTIC_SPEC on two transitions for one (state, symbol);
    // INVALID_ARGUMENT on unknown names, transitions out of the end state,
    // writes over the end marks or moves past them.
    void validate() const;
    const TMTransition* find(const std::string& state, const std::string& read) const;
};

// Tape cell content: a symbol, with the head in a state when present.
struct Cell {
    std::string symbol;
    std::optional<std::string> state;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

// "Cell_<symbol>" without the head, "Head_<state>_<symbol>" with it.
std::string cellPredicate(const Cell& c);

// New content of a cell from its window. left maps (cell 1, cell 2) to cell
// 1, right maps (cell i-1, cell i) to cell i, mid maps three neighbours to
// the middle one. Windows that cannot occur on a tape, or whose head has no
// transition, are left out.
struct CellTables {
    std::map<std::pair<Cell, Cell>, Cell> left;
    std::map<std::tuple<Cell, Cell, Cell>, Cell> mid;
    std::map<std::pair<Cell, Cell>, Cell> right;
};

CellTables cellTables(const TMSpec& spec);

// MDL query Goal/Reached over First, Last and Succ; atomic views V_First and
// V_Last; full rules for Succ+, the initial tape, the transitions and the
// non-halting check.
MonDetProblem genTM(const TMSpec& spec);

enum class TMOutcome { Halted, Stuck, Running };

const char* tmOutcomeName(TMOutcome o);

struct TMRun {
    size_t length = 0;
    TMOutcome outcome = TMOutcome::Running;
    // Transitions executed, at most length - 1.
    size_t steps = 0;
    // cells[t-1][s-1] is the content of cell s at time t, for times up to
    // length. The configuration stays fixed after halting; a stuck run has
    // no rows after the stuck time.
    std::vector<std::vector<Cell>> cells;

    // Halted or stuck before the last time step.
    bool halts() const { return outcome != TMOutcome::Running; }
};

struct TMReport {
    std::vector<TMRun> runs; // tape lengths 2..maxLength
    std::optional<size_t> haltingLength;
};

// Direct run on the initial tape of every length 2..maxLength, for length - 1
// steps each.
TMReport simulateTM(const TMSpec& spec, size_t maxLength);
TMRun runTM(const TMSpec& spec, size_t length);

} // namespace mondet
