#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"

namespace mondet {

using namespace dsl_detail;

DslError::DslError(ErrorCode code, SourcePos pos, const std::string& text)
    : Error(code, std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + text), pos_(pos), text_(text) {}

const char* machineKindName(MachineKind k) {
    switch (k) {
    case MachineKind::TM: return "tm";
    case MachineKind::CA: return "ca";
    case MachineKind::Tiling: return "tiling";
    }
    return "?";
}

namespace {

struct Use {
    std::string pred;
    size_t arity = 0;
    SourcePos pos;
    int program = -1;
};

struct Entry {
    std::string key;
    std::vector<Token> before;
    std::vector<Token> after;
    bool arrow = false;
    SourcePos pos;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    ProblemFile run() {
        while (peek().kind != Tok::End) declaration();
        checkUses();
        return std::move(f_);
    }

private:
    const Token& peek(size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (i_ < toks_.size() - 1) ++i_;
        return t;
    }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        next();
        return true;
    }
    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw DslError(ErrorCode::ParseError, t.pos, "expected " + expected + ", found " + found);
    }
    const Token& expect(Tok k) {
        if (peek().kind != k) fail(tokName(k));
        return next();
    }
    bool atKeyword(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

    void declaration() {
        if (atKeyword("pred")) return pred();
        if (atKeyword("fact")) return fact();
        if (atKeyword("tgd")) return tgd();
        if (atKeyword("view")) return f_.views.push_back(query("view"));
        if (atKeyword("query")) return f_.queries.push_back(query("query"));
        if (atKeyword("program")) return program();
        if (atKeyword("machine")) return machine();
        fail("a declaration (pred, fact, tgd, view, query, program or machine)");
    }

    void pred() {
        SourcePos pos = next().pos;
        PredDecl d;
        d.name = expect(Tok::Ident).text;
        d.pos = pos;
        expect(Tok::Slash);
        const Token& n = expect(Tok::Number);
        try {
            d.arity = std::stoul(n.text);
        } catch (const std::exception&) {
            throw DslError(ErrorCode::ParseError, n.pos, "expected an arity, found '" + n.text + "'");
        }
        expect(Tok::Dot);
        f_.preds.push_back(d);
    }

    Term term() {
        const Token& t = peek();
        if (t.kind == Tok::Number || t.kind == Tok::Quoted) return Term::constant(next().text);
        if (t.kind != Tok::Ident) fail("a term");
        next();
        if (isNullName(t.text)) return Term::null(std::stoull(t.text.substr(1)));
        if (isVariableName(t.text)) return Term::variable(t.text);
        return Term::constant(t.text);
    }

    std::vector<Term> termList() {
        std::vector<Term> out;
        expect(Tok::LParen);
        if (accept(Tok::RParen)) return out;
        do out.push_back(term());
        while (accept(Tok::Comma));
        expect(Tok::RParen);
        return out;
    }

    Atom atom(std::vector<SourcePos>* positions) {
        if (peek().kind != Tok::Ident) fail("an atom");
        const Token& name = next();
        std::vector<Term> args;
        if (peek().kind == Tok::LParen) args = termList();
        uses_.push_back({name.text, args.size(), name.pos, program_});
        if (positions) positions->push_back(name.pos);
        return Atom(name.text, std::move(args));
    }

    std::vector<Atom> conjunction(std::vector<SourcePos>* positions) {
        std::vector<Atom> out;
        do out.push_back(atom(positions));
        while (accept(Tok::Comma));
        return out;
    }

    void fact() {
        next();
        std::vector<SourcePos> positions;
        auto atoms = conjunction(&positions);
        expect(Tok::Dot);
        for (size_t k = 0; k < atoms.size(); ++k) {
            for (const auto& t : atoms[k].args)
                if (t.isVariable())
                    throw DslError(ErrorCode::ParseError, positions[k], "expected a ground fact, found variable " +
                                                                            t.name());
            f_.facts.push_back({atoms[k], positions[k]});
        }
    }

    void tgd() {
        SourcePos pos = next().pos;
        TgdDecl d;
        d.pos = pos;
        std::vector<Atom> body;
        if (peek().kind != Tok::Arrow) body = conjunction(&d.atomPos);
        expect(Tok::Arrow);
        auto head = conjunction(&d.atomPos);
        expect(Tok::Dot);
        try {
            d.rule = TGD(std::move(body), std::move(head));
        } catch (const Error& e) {
            throw DslError(e.code(), pos, e.what());
        }
        f_.tgds.push_back(std::move(d));
    }

    QueryDecl query(const char* what) {
        SourcePos pos = next().pos;
        QueryDecl d;
        d.pos = pos;
        d.name = expect(Tok::Ident).text;
        if (peek().kind == Tok::LParen) d.head = termList();
        expect(Tok::Define);
        if (atKeyword("program") && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Dot) {
            next();
            d.program = next().text;
            next();
            return d;
        }
        std::vector<ConjunctiveQuery> disjuncts;
        do {
            d.disjunctPos.push_back(peek().pos);
            std::vector<Term> head = d.head;
            if (peek().kind == Tok::LParen) {
                SourcePos hp = peek().pos;
                head = termList();
                if (head.size() != d.head.size())
                    throw DslError(ErrorCode::ArityMismatch, hp,
                                   "disjunct head has " + std::to_string(head.size()) + " terms, " + d.name +
                                       " has " + std::to_string(d.head.size()));
            }
            disjuncts.emplace_back(head, conjunction(nullptr));
        } while (accept(Tok::Bar));
        expect(Tok::Dot);
        try {
            d.ucq = UnionQuery(d.head.size(), std::move(disjuncts));
            d.ucq->validate();
        } catch (const Error& e) {
            throw DslError(e.code(), pos, std::string(what) + " " + d.name + ": " + e.what());
        }
        return d;
    }

    void program() {
        SourcePos pos = next().pos;
        ProgramDecl d;
        d.pos = pos;
        d.name = expect(Tok::Ident).text;
        program_ = static_cast<int>(f_.programs.size());
        idbs_.emplace_back();
        expect(Tok::LBrace);
        while (!accept(Tok::RBrace)) {
            if (atKeyword("goal") && peek(1).kind == Tok::Ident) {
                next();
                d.goal = next().text;
                idbs_.back().insert(d.goal);
                expect(Tok::Dot);
                continue;
            }
            d.rulePos.push_back(peek().pos);
            DatalogRule r;
            r.head = atom(nullptr);
            idbs_.back().insert(r.head.predicate.name());
            expect(Tok::If);
            r.body = conjunction(nullptr);
            expect(Tok::Dot);
            d.rules.push_back(std::move(r));
        }
        if (d.goal.empty()) throw DslError(ErrorCode::ParseError, pos, "expected 'goal' in program " + d.name);
        program_ = -1;
        try {
            (void)DatalogProgram(d.rules, Symbol(d.goal));
        } catch (const Error& e) {
            throw DslError(e.code(), pos, "program " + d.name + ": " + e.what());
        }
        f_.programs.push_back(std::move(d));
    }

    std::vector<Entry> entries() {
        std::vector<Entry> out;
        expect(Tok::LBrace);
        while (!accept(Tok::RBrace)) {
            Entry e;
            e.pos = peek().pos;
            e.key = expect(Tok::Ident).text;
            while (peek().kind != Tok::Dot) {
                if (accept(Tok::Arrow)) {
                    if (e.arrow) fail("'.'");
                    e.arrow = true;
                    continue;
                }
                if (peek().kind != Tok::Ident && peek().kind != Tok::Number) fail("a name or '.'");
                (e.arrow ? e.after : e.before).push_back(next());
            }
            next();
            out.push_back(std::move(e));
        }
        return out;
    }

    static std::vector<std::string> words(const std::vector<Token>& ts) {
        std::vector<std::string> out;
        for (const auto& t : ts) out.push_back(t.text);
        return out;
    }

    static void shape(const Entry& e, size_t before, std::optional<size_t> after, const std::string& form) {
        bool ok = after ? (e.arrow && e.before.size() == before && e.after.size() == *after)
                        : (!e.arrow && (before == 0 ? !e.before.empty() : e.before.size() == before));
        if (!ok) throw DslError(ErrorCode::ParseError, e.pos, "expected '" + form + "'");
    }

    static size_t number(const Token& t) {
        if (t.kind != Tok::Number) throw DslError(ErrorCode::ParseError, t.pos, "expected a number, found '" + t.text + "'");
        return std::stoul(t.text);
    }

    [[noreturn]] static void unknownKey(const Entry& e, const char* kind) {
        throw DslError(ErrorCode::ParseError, e.pos, "expected a " + std::string(kind) + " entry, found '" + e.key + "'");
    }

    static Move move(const Token& t) {
        const auto& s = t.text;
        if (s == "L" || s == "left") return Move::Left;
        if (s == "S" || s == "stay") return Move::Stay;
        if (s == "R" || s == "right") return Move::Right;
        throw DslError(ErrorCode::ParseError, t.pos, "expected a move (L, S or R), found '" + s + "'");
    }

    static TMSpec tmSpec(const std::vector<Entry>& es) {
        TMSpec m;
        m.alphabet.clear();
        m.states.clear();
        for (const auto& e : es) {
            if (e.key == "alphabet" || e.key == "states") {
                shape(e, 0, std::nullopt, e.key + " Name ... .");
                auto ws = words(e.before);
                auto& to = e.key == "alphabet" ? m.alphabet : m.states;
                to.insert(to.end(), ws.begin(), ws.end());
            } else if (e.key == "blank" || e.key == "left" || e.key == "right" || e.key == "start" || e.key == "end") {
                shape(e, 1, std::nullopt, e.key + " Name.");
                std::string& slot = e.key == "blank"   ? m.blank
                                    : e.key == "left"  ? m.left
                                    : e.key == "right" ? m.right
                                    : e.key == "start" ? m.start
                                                       : m.end;
                slot = e.before[0].text;
            } else if (e.key == "delta") {
                shape(e, 2, 3, "delta State Symbol -> State Symbol Move.");
                m.delta.push_back({e.before[0].text, e.before[1].text, e.after[0].text, e.after[1].text, move(e.after[2])});
            } else {
                unknownKey(e, "tm");
            }
        }
        return m;
    }

    static CASpec caSpec(const std::vector<Entry>& es) {
        CASpec s;
        for (const auto& e : es) {
            if (e.key == "states") {
                shape(e, 1, std::nullopt, "states Count.");
                s.states = number(e.before[0]);
            } else if (e.key == "target") {
                shape(e, 1, std::nullopt, "target State.");
                s.target = number(e.before[0]);
            } else if (e.key == "rule") {
                if (!e.arrow || e.after.size() != 1 || (e.before.size() != 2 && e.before.size() != 3))
                    throw DslError(ErrorCode::ParseError, e.pos, "expected 'rule State State [State] -> State.'");
                CATransition t;
                for (const auto& w : e.before) t.from.push_back(number(w));
                t.to = number(e.after[0]);
                s.transitions.push_back(t);
            } else {
                unknownKey(e, "ca");
            }
        }
        return s;
    }

    static TilingSpec tilingSpec(const std::vector<Entry>& es) {
        TilingSpec s;
        auto index = [&](const Token& t) -> size_t {
            for (size_t k = 0; k < s.tiles.size(); ++k)
                if (s.tiles[k] == t.text) return k;
            throw DslError(ErrorCode::InvalidArgument, t.pos, "unknown tile " + t.text);
        };
        for (const auto& e : es) {
            if (e.key == "tiles") {
                shape(e, 0, std::nullopt, "tiles Name ... .");
                for (const auto& w : words(e.before)) s.tiles.push_back(w);
            }
        }
        for (const auto& e : es) {
            if (e.key == "tiles") continue;
            if (e.key == "forbid") {
                shape(e, 3, std::nullopt, "forbid Tile Tile horizontal|vertical.");
                const auto& o = e.before[2].text;
                Orientation orient;
                if (o == "horizontal" || o == "h") orient = Orientation::Horizontal;
                else if (o == "vertical" || o == "v") orient = Orientation::Vertical;
                else throw DslError(ErrorCode::ParseError, e.before[2].pos, "expected horizontal or vertical, found '" + o + "'");
                s.forbidden.push_back({index(e.before[0]), index(e.before[1]), orient});
            } else if (e.key == "initial") {
                shape(e, 1, std::nullopt, "initial Tile.");
                s.initial = index(e.before[0]);
            } else {
                unknownKey(e, "tiling");
            }
        }
        return s;
    }

    void machine() {
        SourcePos pos = next().pos;
        if (peek().kind != Tok::Ident) fail("a machine kind (tm, ca or tiling)");
        std::string kind = peek().text;
        if (kind != "tm" && kind != "ca" && kind != "tiling") fail("a machine kind (tm, ca or tiling)");
        next();
        auto es = entries();
        MachineDecl d;
        d.pos = pos;
        try {
            if (kind == "tm") {
                auto m = tmSpec(es);
                m.validate();
                d.spec = m;
            } else if (kind == "ca") {
                auto s = caSpec(es);
                s.validate();
                d.spec = s;
            } else {
                auto s = tilingSpec(es);
                s.validate();
                d.spec = s;
            }
        } catch (const DslError&) {
            throw;
        } catch (const Error& e) {
            throw DslError(e.code(), pos, e.what());
        }
        f_.machines.push_back(std::move(d));
    }

    void checkUses() {
        std::map<std::string, size_t> base;
        for (const auto& p : f_.preds) {
            auto [it, fresh] = base.emplace(p.name, p.arity);
            if (!fresh && it->second != p.arity)
                throw DslError(ErrorCode::ArityMismatch, p.pos,
                               p.name + " declared with arity " + std::to_string(it->second) + " and " +
                                   std::to_string(p.arity));
        }
        std::map<std::string, size_t> views;
        for (const auto& v : f_.views) views[v.name] = v.head.size();
        std::vector<std::map<std::string, size_t>> idbArity(idbs_.size());
        for (const auto& u : uses_) {
            std::optional<size_t> want;
            if (u.program >= 0 && idbs_[u.program].count(u.pred)) {
                auto [it, fresh] = idbArity[u.program].emplace(u.pred, u.arity);
                if (!fresh) want = it->second;
            } else if (auto it = base.find(u.pred); it != base.end()) {
                want = it->second;
            } else if (auto vt = views.find(u.pred); vt != views.end()) {
                want = vt->second;
            } else {
                throw DslError(ErrorCode::UndeclaredPredicate, u.pos, "predicate " + u.pred + " is not declared");
            }
            if (want && *want != u.arity)
                throw DslError(ErrorCode::ArityMismatch, u.pos,
                               u.pred + " has arity " + std::to_string(*want) + ", used with " + std::to_string(u.arity));
        }
    }

    std::vector<Token> toks_;
    size_t i_ = 0;
    ProblemFile f_;
    std::vector<Use> uses_;
    std::vector<std::set<std::string>> idbs_;
    int program_ = -1;
};

} // namespace

ProblemFile parseProblem(std::string_view text) { return Parser(text).run(); }

ProblemFile parseProblemFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parseProblem(ss.str());
}

Instance ProblemFile::instance() const {
    Instance inst;
    for (const auto& p : preds) inst.schema().declare(Symbol(p.name), p.arity);
    for (const auto& f : facts) inst.add(f.fact);
    return inst;
}

std::vector<TGD> ProblemFile::rules() const {
    std::vector<TGD> out;
    for (const auto& t : tgds) out.push_back(t.rule);
    return out;
}

DatalogProgram ProblemFile::program(const std::string& name, std::optional<size_t> goalArity) const {
    for (const auto& p : programs)
        if (p.name == name) {
            try {
                return DatalogProgram(p.rules, Symbol(p.goal), goalArity);
            } catch (const Error& e) {
                throw DslError(e.code(), p.pos, "program " + name + ": " + e.what());
            }
        }
    throw Error(ErrorCode::UndeclaredPredicate, "no program named " + name);
}

ViewSet ProblemFile::viewSet() const {
    ViewSet out;
    for (const auto& v : views) {
        if (v.isProgram())
            out.add(ViewDefinition(Symbol(v.name), program(v.program, v.head.size())));
        else
            out.add(ViewDefinition(Symbol(v.name), *v.ucq));
    }
    return out;
}

const QueryDecl& ProblemFile::query(const std::optional<std::string>& name) const {
    if (name) {
        for (const auto& q : queries)
            if (q.name == *name) return q;
        throw Error(ErrorCode::InvalidArgument, "no query named " + *name);
    }
    if (queries.size() != 1)
        throw Error(ErrorCode::InvalidArgument,
                    queries.empty() ? "the file has no query" : "the file has several queries; name one");
    return queries.front();
}

std::variant<UnionQuery, DatalogProgram> ProblemFile::queryValue(const QueryDecl& q) const {
    if (q.isProgram()) return program(q.program, q.head.size());
    return *q.ucq;
}

MonDetProblem ProblemFile::problem(const std::optional<std::string>& queryName) const {
    MonDetProblem p{queryValue(query(queryName)), viewSet(), rules()};
    p.validate();
    return p;
}

} // namespace mondet
