#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mondet/datalog.hpp"
#include "mondet/query.hpp"
#include "mondet/tgd.hpp"

namespace mondet {

enum class ViewKind { CQ, UCQ, Datalog };

const char* viewKindName(ViewKind k);

struct ViewDefinition {
    Symbol name;
    // Union definitions; a single disjunct is a CQ view.
    UnionQuery ucq;
    // Set for Datalog views; the goal arity is the view arity.
    std::optional<DatalogProgram> program;

    ViewDefinition() = default;
    ViewDefinition(Symbol n, UnionQuery q) : name(n), ucq(std::move(q)) {}
    ViewDefinition(Symbol n, DatalogProgram p) : name(n), program(std::move(p)) {}

    size_t arity() const { return program ? program->goalArity() : ucq.arity; }
    ViewKind kind() const;
};

class ViewSet {
public:
    ViewSet() = default;
    explicit ViewSet(std::vector<ViewDefinition> views);

    // Throws INVALID_ARGUMENT on a duplicate name.
    void add(ViewDefinition v);
    const std::vector<ViewDefinition>& views() const { return views_; }
    const ViewDefinition* find(Symbol name) const;
    bool isView(Symbol p) const { return find(p) != nullptr; }
    size_t size() const { return views_.size(); }
    bool empty() const { return views_.empty(); }

    Schema viewSchema() const;
    bool allCQ() const;
    bool allUnion() const;
    bool anyDatalog() const;

private:
    std::vector<ViewDefinition> views_;
};

// One fact V(t) per answer tuple t of each definition.
Instance viewImage(const Instance& inst, const ViewSet& views);

// Per-fact witness choices for UCQ views, enumerated in mixed-radix order
// (facts in insertion order, the last fact varying fastest). Fresh nulls
// start above the largest null of J. Visit returns false to stop.
// Returns the number of instances produced.
size_t backV(const Instance& j, const ViewSet& views, size_t limit,
             const std::function<bool(const Instance&)>& visit);
std::vector<Instance> backVAll(const Instance& j, const ViewSet& views, size_t limit);
// Number of choice combinations, saturating at the given cap.
size_t backVChoiceCount(const Instance& j, const ViewSet& views, size_t cap);

// V(x) -> exists y. body for each CQ view (NON_CQ_VIEW otherwise).
std::vector<TGD> backVRules(const ViewSet& views);

} // namespace mondet
