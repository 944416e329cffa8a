#include "mondet/term.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "mondet/error.hpp"

namespace mondet {

namespace {

class SymbolTable {
public:
    static SymbolTable& instance() {
        static SymbolTable table;
        return table;
    }

    uint32_t intern(std::string_view name) {
        {
            std::shared_lock lock(mutex_);
            auto it = ids_.find(std::string(name));
            if (it != ids_.end()) return it->second;
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] = ids_.emplace(std::string(name), 0);
        if (inserted) {
            names_.emplace_back(name);
            it->second = static_cast<uint32_t>(names_.size() - 1);
        }
        return it->second;
    }

    const std::string& name(uint32_t id) {
        std::shared_lock lock(mutex_);
        return names_.at(id);
    }

private:
    SymbolTable() { names_.emplace_back(""); }

    std::shared_mutex mutex_;
    std::unordered_map<std::string, uint32_t> ids_;
    std::deque<std::string> names_;
};

} // namespace

Symbol::Symbol(std::string_view name) : id_(SymbolTable::instance().intern(name)) {
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "empty symbol name");
}

const std::string& Symbol::name() const { return SymbolTable::instance().name(id_); }

Term Term::constant(std::string_view name) { return Term(TermKind::Constant, Symbol(name).id()); }
Term Term::variable(std::string_view name) { return Term(TermKind::Variable, Symbol(name).id()); }
Term Term::null(uint64_t id) { return Term(TermKind::Null, id); }

std::string Term::name() const {
    if (kind_ == TermKind::Null) return "n" + std::to_string(id_);
    return SymbolTable::instance().name(static_cast<uint32_t>(id_));
}

bool presentationLess(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    if (a.isNull()) return a.id() < b.id();
    return a.name() < b.name();
}

} // namespace mondet
