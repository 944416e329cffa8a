#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "mondet/atom.hpp"
#include "mondet/query.hpp"
#include "mondet/views.hpp"

namespace mondet::corpus_detail {

inline Term var(std::string_view name) { return Term::variable(name); }

inline Atom atom(std::string_view pred, std::initializer_list<std::string> vars) {
    std::vector<Term> args;
    for (const auto& v : vars) args.push_back(var(v));
    return Atom(pred, std::move(args));
}

inline void append(std::vector<Atom>& to, const std::vector<Atom>& from) {
    to.insert(to.end(), from.begin(), from.end());
}

inline std::vector<Term> vars(std::initializer_list<std::string> names) {
    std::vector<Term> out;
    for (const auto& n : names) out.push_back(var(n));
    return out;
}

// V_<pred>(X1..Xn) := pred(X1..Xn).
inline ViewDefinition atomicView(std::string_view pred, size_t arity) {
    std::vector<Term> head;
    for (size_t i = 1; i <= arity; ++i) head.push_back(var("X" + std::to_string(i)));
    return ViewDefinition(Symbol("V_" + std::string(pred)), UnionQuery(ConjunctiveQuery(head, {Atom(pred, head)})));
}

} // namespace mondet::corpus_detail
