#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace mondet {

// Interned identifier. Interning is process-global and thread-safe.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::string_view name);

    const std::string& name() const;
    uint32_t id() const { return id_; }
    bool valid() const { return id_ != 0; }

    friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
    friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }
    // Order by id; use name() for presentation order.
    friend bool operator<(Symbol a, Symbol b) { return a.id_ < b.id_; }

private:
    uint32_t id_ = 0;
};

enum class TermKind : uint8_t { Constant = 0, Variable = 1, Null = 2 };

class Term {
public:
    Term() = default;

    static Term constant(std::string_view name);
    static Term variable(std::string_view name);
    static Term null(uint64_t id);

    TermKind kind() const { return kind_; }
    bool isConstant() const { return kind_ == TermKind::Constant; }
    bool isVariable() const { return kind_ == TermKind::Variable; }
    bool isNull() const { return kind_ == TermKind::Null; }
    bool isGround() const { return kind_ != TermKind::Variable; }

    // Symbol id for constants and variables, the counter value for nulls.
    uint64_t id() const { return id_; }
    // Constant or variable name; "n<id>" for nulls.
    std::string name() const;

    friend bool operator==(const Term& a, const Term& b) { return a.kind_ == b.kind_ && a.id_ == b.id_; }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) {
        return a.kind_ != b.kind_ ? a.kind_ < b.kind_ : a.id_ < b.id_;
    }

private:
    Term(TermKind kind, uint64_t id) : kind_(kind), id_(id) {}
    TermKind kind_ = TermKind::Constant;
    uint64_t id_ = 0;
};

// Kind first, then name for constants/variables and id for nulls.
bool presentationLess(const Term& a, const Term& b);

inline size_t hashCombine(size_t seed, size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace mondet

template <>
struct std::hash<mondet::Symbol> {
    size_t operator()(mondet::Symbol s) const noexcept { return std::hash<uint32_t>()(s.id()); }
};

template <>
struct std::hash<mondet::Term> {
    size_t operator()(const mondet::Term& t) const noexcept {
        return mondet::hashCombine(static_cast<size_t>(t.kind()), std::hash<uint64_t>()(t.id()));
    }
};
