#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mondet/corpus.hpp"
#include "mondet/determinacy.hpp"
#include "mondet/error.hpp"

namespace mondet {

// 1-based line and column; 0 for nodes built outside the parser.
struct SourcePos {
    size_t line = 0;
    size_t col = 0;
};

// Error raised with a source position. The message reads
// "<CODE>: <line>:<col>: <text>".
class DslError : public Error {
public:
    DslError(ErrorCode code, SourcePos pos, const std::string& text);

    SourcePos pos() const { return pos_; }
    const std::string& text() const { return text_; }

private:
    SourcePos pos_;
    std::string text_;
};

struct PredDecl {
    std::string name;
    size_t arity = 0;
    SourcePos pos;
};

struct FactDecl {
    Atom fact;
    SourcePos pos;
};

struct TgdDecl {
    TGD rule;
    SourcePos pos;
    // Body atoms first, then head atoms.
    std::vector<SourcePos> atomPos;
};

struct ProgramDecl {
    std::string name;
    std::vector<DatalogRule> rules;
    std::string goal;
    SourcePos pos;
    std::vector<SourcePos> rulePos;
};

// `Name(Head) := B | B ... .` or `Name(Head) := program P.`
struct QueryDecl {
    std::string name;
    std::vector<Term> head;
    std::optional<UnionQuery> ucq;
    std::string program;
    SourcePos pos;
    // One entry per disjunct.
    std::vector<SourcePos> disjunctPos;

    bool isProgram() const { return !ucq.has_value(); }
};

enum class MachineKind { TM, CA, Tiling };

const char* machineKindName(MachineKind k);

struct MachineDecl {
    std::variant<TMSpec, CASpec, TilingSpec> spec;
    SourcePos pos;

    MachineKind kind() const { return static_cast<MachineKind>(spec.index()); }
};

struct ProblemFile {
    std::vector<PredDecl> preds;
    std::vector<FactDecl> facts;
    std::vector<TgdDecl> tgds;
    std::vector<QueryDecl> views;
    std::vector<QueryDecl> queries;
    std::vector<ProgramDecl> programs;
    std::vector<MachineDecl> machines;

    Instance instance() const;
    std::vector<TGD> rules() const;
    // UNDECLARED_PREDICATE for an unknown name.
    DatalogProgram program(const std::string& name, std::optional<size_t> goalArity = std::nullopt) const;
    ViewSet viewSet() const;
    // The named query, or the only one. INVALID_ARGUMENT when absent or
    // ambiguous.
    const QueryDecl& query(const std::optional<std::string>& name = std::nullopt) const;
    std::variant<UnionQuery, DatalogProgram> queryValue(const QueryDecl& q) const;
    MonDetProblem problem(const std::optional<std::string>& queryName = std::nullopt) const;
};

// PARSE_ERROR on malformed text, UNDECLARED_PREDICATE on an atom whose
// predicate is neither declared, a view or query name, nor an IDB of the
// enclosing program; ARITY_MISMATCH on arity disagreement. All are
// DslError.
ProblemFile parseProblem(std::string_view text);
ProblemFile parseProblemFile(const std::string& path);

// Canonical text form; parseProblem(printProblem(f)) reproduces f up to
// source positions.
std::string printProblem(const ProblemFile& f);

// A problem file holding a generated problem: declarations for every base
// predicate, the rules, the views and the query (named Q).
ProblemFile problemFile(const MonDetProblem& p);

// Printed forms used by the printer and by command reports.
std::string printTerm(const Term& t);
std::string printAtom(const Atom& a);
std::string printAtoms(const std::vector<Atom>& atoms);
std::string printTgd(const TGD& r);
std::string printRule(const DatalogRule& r);
std::string printInstance(const Instance& inst);

// Same declarations, facts, rules, views, queries, programs and
// machines, compared with distinct-variable renaming per declaration.
bool alphaEquivalent(const ProblemFile& a, const ProblemFile& b);

} // namespace mondet
