#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "mondet/error.hpp"
#include "mondet/rewrite.hpp"

namespace mondet {

namespace {

// Term shape at a predicate position: a plain value, the Skolem term
// f_{view,index}(head vars), or a fixed constant. Skolem shapes flatten to
// `width` arguments, constant shapes to none.
struct Shape {
    enum Kind { Plain, Skolem, Const } kind = Plain;
    std::string token = "p";
    size_t width = 1;
    Term constant;

    static Shape skolem(const std::string& view, size_t index, size_t width) {
        return Shape{Skolem, "f" + view + "_" + std::to_string(index), width, Term()};
    }
    static Shape fixed(const Term& c) { return Shape{Const, "k" + c.name(), 0, c}; }

    bool operator==(const Shape& o) const { return token == o.token && constant == o.constant; }
    bool operator<(const Shape& o) const {
        return token != o.token ? token < o.token : constant < o.constant;
    }
};

using ShapeVec = std::vector<Shape>;

struct Rule {
    Atom head;
    std::vector<Atom> body;
};

class InverseRules {
public:
    InverseRules(const DatalogProgram& p, const ViewSet& views, const std::vector<TGD>& rules) : p_(p), views_(views) {
        for (const auto& v : views.views())
            if (v.kind() != ViewKind::CQ)
                throw Error(ErrorCode::NonCqView, "view " + v.name.name() + " is not a CQ");
        for (const auto& r : rules) {
            if (!r.isFull()) throw Error(ErrorCode::NonFullSigma, "rule " + toString(r) + " has existentials");
            for (const auto& h : r.head()) rules_.push_back(Rule{h, r.body()});
        }
        for (const auto& r : p.rules()) rules_.push_back(Rule{r.head, r.body});
    }

    DatalogProgram build() {
        seedBackward();
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& r : rules_) changed = enumerate(r, false) || changed;
        }
        for (const auto& r : rules_) enumerate(r, true);
        return DatalogProgram(std::move(out_), p_.goal(), p_.goalArity());
    }

private:
    bool isGoal(Symbol p) const { return p == p_.goal(); }

    Symbol annotated(Symbol pred, const ShapeVec& s) const {
        bool plain = std::all_of(s.begin(), s.end(), [](const Shape& x) { return x.kind == Shape::Plain; });
        if (plain) return pred;
        std::string n = pred.name() + "_";
        for (const auto& x : s) n += "_" + x.token;
        return Symbol(n);
    }

    void emit(DatalogRule r) {
        std::string key = toString(r);
        if (keys_.insert(key).second) out_.push_back(std::move(r));
    }

    // V(h) produces each definition atom with existentials as Skolem terms.
    void seedBackward() {
        for (const auto& v : views_.views()) {
            const auto& d = v.ucq.disjuncts[0];
            std::vector<Term> headVars;
            for (const auto& t : d.head)
                if (t.isVariable() && std::find(headVars.begin(), headVars.end(), t) == headVars.end())
                    headVars.push_back(t);
            auto ex = d.existentialVariables();
            Atom viewAtom(v.name, d.head);
            for (const auto& a : d.body) {
                ShapeVec s;
                std::vector<Term> args;
                for (const auto& t : a.args) {
                    auto it = std::find(ex.begin(), ex.end(), t);
                    if (it != ex.end()) {
                        s.push_back(Shape::skolem(v.name.name(), static_cast<size_t>(it - ex.begin()) + 1,
                                                  headVars.size()));
                        args.insert(args.end(), headVars.begin(), headVars.end());
                    } else if (t.isConstant() && !isGoal(a.predicate)) {
                        s.push_back(Shape::fixed(t));
                    } else {
                        s.push_back(Shape());
                        args.push_back(t);
                    }
                }
                available_[a.predicate].insert(s);
                emit(DatalogRule{Atom(annotated(a.predicate, s), args), {viewAtom}, -1});
            }
        }
    }

    // Tries every shape assignment for the body; returns true when a new head
    // shape appears. With `write`, emits the flattened rules.
    bool enumerate(const Rule& r, bool write) {
        std::vector<const ShapeVec*> chosen(r.body.size(), nullptr);
        bool changed = false;
        std::function<void(size_t)> go = [&](size_t i) {
            if (i == r.body.size()) {
                changed = instantiate(r, chosen, write) || changed;
                return;
            }
            auto it = available_.find(r.body[i].predicate);
            if (it == available_.end()) return;
            std::vector<ShapeVec> options(it->second.begin(), it->second.end());
            for (const auto& s : options) {
                if (s.size() != r.body[i].arity()) continue;
                chosen[i] = &s;
                go(i + 1);
            }
        };
        go(0);
        return changed;
    }

    bool instantiate(const Rule& r, const std::vector<const ShapeVec*>& chosen, bool write) {
        std::map<Term, Shape> type;
        for (size_t i = 0; i < r.body.size(); ++i) {
            const auto& s = *chosen[i];
            for (size_t k = 0; k < s.size(); ++k) {
                const Term& t = r.body[i].args[k];
                if (t.isConstant()) {
                    if (s[k].kind == Shape::Skolem) return false;
                    if (s[k].kind == Shape::Const && s[k].constant != t) return false;
                    continue;
                }
                auto [it, fresh] = type.emplace(t, s[k]);
                if (fresh || it->second == s[k]) continue;
                // A fixed constant may meet a plain occurrence; Skolem terms never do.
                if (it->second.kind == Shape::Plain && s[k].kind == Shape::Const)
                    it->second = s[k];
                else if (!(it->second.kind == Shape::Const && s[k].kind == Shape::Plain))
                    return false;
            }
        }
        auto flat = [&](const Term& t, const Shape& pos, std::vector<Term>& args) {
            if (pos.kind == Shape::Const) return;
            if (t.isConstant()) {
                args.push_back(t);
                return;
            }
            const Shape& ty = type.at(t);
            if (pos.kind == Shape::Skolem) {
                for (size_t j = 1; j <= ty.width; ++j) args.push_back(Term::variable(t.name() + "__" + std::to_string(j)));
            } else {
                args.push_back(ty.kind == Shape::Const ? ty.constant : t);
            }
        };
        std::vector<Atom> body;
        for (size_t i = 0; i < r.body.size(); ++i) {
            std::vector<Term> args;
            for (size_t k = 0; k < r.body[i].args.size(); ++k) flat(r.body[i].args[k], (*chosen[i])[k], args);
            body.emplace_back(annotated(r.body[i].predicate, *chosen[i]), std::move(args));
        }
        ShapeVec hs;
        std::vector<Term> hargs;
        bool goal = isGoal(r.head.predicate);
        for (const auto& t : r.head.args) {
            Shape s = t.isConstant() ? Shape::fixed(t) : type.at(t);
            if (goal && s.kind == Shape::Const) s = Shape();
            hs.push_back(s);
            flat(t, s, hargs);
        }
        bool changed = available_[r.head.predicate].insert(hs).second;
        if (write) emit(DatalogRule{Atom(annotated(r.head.predicate, hs), hargs), body, -1});
        return changed;
    }

    const DatalogProgram& p_;
    const ViewSet& views_;
    std::vector<Rule> rules_;
    std::map<Symbol, std::set<ShapeVec>> available_;
    std::vector<DatalogRule> out_;
    std::set<std::string> keys_;
};

} // namespace

DatalogProgram inverseRules(const DatalogProgram& p, const ViewSet& views, const std::vector<TGD>& rules) {
    return InverseRules(p, views, rules).build();
}

} // namespace mondet
