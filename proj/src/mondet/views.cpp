#include "mondet/views.hpp"

#include <algorithm>

#include "mondet/error.hpp"

namespace mondet {

const char* viewKindName(ViewKind k) {
    switch (k) {
    case ViewKind::CQ: return "CQ";
    case ViewKind::UCQ: return "UCQ";
    case ViewKind::Datalog: return "DATALOG";
    }
    return "?";
}

ViewKind ViewDefinition::kind() const {
    if (program) return ViewKind::Datalog;
    return ucq.disjuncts.size() == 1 ? ViewKind::CQ : ViewKind::UCQ;
}

ViewSet::ViewSet(std::vector<ViewDefinition> views) {
    for (auto& v : views) add(std::move(v));
}

void ViewSet::add(ViewDefinition v) {
    if (find(v.name)) throw Error(ErrorCode::InvalidArgument, "duplicate view " + v.name.name());
    if (!v.program) v.ucq.validate();
    views_.push_back(std::move(v));
}

const ViewDefinition* ViewSet::find(Symbol name) const {
    for (const auto& v : views_)
        if (v.name == name) return &v;
    return nullptr;
}

Schema ViewSet::viewSchema() const {
    Schema s;
    for (const auto& v : views_) s.declare(v.name, v.arity(), PredicateTag::View);
    return s;
}

bool ViewSet::allCQ() const {
    return std::all_of(views_.begin(), views_.end(), [](const ViewDefinition& v) { return v.kind() == ViewKind::CQ; });
}

bool ViewSet::allUnion() const {
    return std::none_of(views_.begin(), views_.end(), [](const ViewDefinition& v) { return v.program.has_value(); });
}

bool ViewSet::anyDatalog() const { return !allUnion(); }

Instance viewImage(const Instance& inst, const ViewSet& views) {
    Instance out(views.viewSchema());
    for (const auto& v : views.views()) {
        TupleSet ts = v.program ? goalTuples(*v.program, inst) : evalQuery(v.ucq, inst);
        for (const auto& t : ts) out.add(Atom(v.name, t));
    }
    return out;
}

namespace {

// Head binding of a disjunct to a view fact's tuple, or nullopt when the
// head cannot produce it.
std::optional<Substitution> bindHead(const ConjunctiveQuery& d, const std::vector<Term>& tuple) {
    Substitution s;
    if (d.head.size() != tuple.size()) return std::nullopt;
    for (size_t i = 0; i < tuple.size(); ++i) {
        if (d.head[i].isVariable()) {
            if (!s.bind(d.head[i], tuple[i])) return std::nullopt;
        } else if (d.head[i] != tuple[i]) {
            return std::nullopt;
        }
    }
    return s;
}

struct FactChoices {
    const Atom* fact;
    std::vector<std::pair<const ConjunctiveQuery*, Substitution>> options;
};

std::vector<FactChoices> choicesFor(const Instance& j, const ViewSet& views) {
    std::vector<FactChoices> out;
    for (const auto& f : j.facts()) {
        const ViewDefinition* v = views.find(f.predicate);
        if (!v) throw Error(ErrorCode::InvalidArgument, "fact " + toString(f) + " is not over a view predicate");
        if (v->program) throw Error(ErrorCode::DatalogViewHere, "view " + v->name.name() + " is defined in Datalog");
        FactChoices fc{&f, {}};
        for (const auto& d : v->ucq.disjuncts)
            if (auto s = bindHead(d, f.args)) fc.options.emplace_back(&d, std::move(*s));
        out.push_back(std::move(fc));
    }
    return out;
}

} // namespace

size_t backVChoiceCount(const Instance& j, const ViewSet& views, size_t cap) {
    size_t n = 1;
    for (const auto& fc : choicesFor(j, views)) {
        if (fc.options.empty()) return 0;
        if (n > cap / fc.options.size()) return cap;
        n *= fc.options.size();
    }
    return std::min(n, cap);
}

size_t backV(const Instance& j, const ViewSet& views, size_t limit, const std::function<bool(const Instance&)>& visit) {
    auto choices = choicesFor(j, views);
    for (const auto& fc : choices)
        if (fc.options.empty()) return 0;
    std::vector<size_t> idx(choices.size(), 0);
    size_t produced = 0;
    uint64_t firstNull = j.maxNullId() + 1;
    while (produced < limit) {
        Instance inst;
        uint64_t next = firstNull;
        for (size_t i = 0; i < choices.size(); ++i) {
            const auto& [d, headSub] = choices[i].options[idx[i]];
            Substitution s = headSub;
            for (const auto& v : d->existentialVariables()) s.set(v, Term::null(next++));
            for (const auto& a : d->body) inst.add(s.apply(a));
        }
        ++produced;
        if (!visit(inst)) break;
        // Advance the mixed-radix counter, last position fastest.
        size_t k = choices.size();
        while (k > 0) {
            --k;
            if (++idx[k] < choices[k].options.size()) break;
            idx[k] = 0;
            if (k == 0) return produced;
        }
        if (choices.empty()) break;
    }
    return produced;
}

std::vector<Instance> backVAll(const Instance& j, const ViewSet& views, size_t limit) {
    std::vector<Instance> out;
    backV(j, views, limit, [&](const Instance& i) {
        out.push_back(i);
        return true;
    });
    return out;
}

std::vector<TGD> backVRules(const ViewSet& views) {
    std::vector<TGD> out;
    for (const auto& v : views.views()) {
        if (v.kind() != ViewKind::CQ) throw Error(ErrorCode::NonCqView, "view " + v.name.name() + " is not a CQ");
        const auto& d = v.ucq.disjuncts[0];
        std::vector<Atom> body = d.body;
        if (body.empty()) continue;
        out.emplace_back(std::vector<Atom>{Atom(v.name, d.head)}, body);
    }
    return out;
}

} // namespace mondet
