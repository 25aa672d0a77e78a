#include "phorslab/transforms.hpp"

#include <deque>
#include <set>

namespace phorslab {

namespace {

std::set<std::string> nonterms_in(const Term& t)
{
    std::set<std::string> out;
    replace_leaves(t, [&](const Term& leaf) -> std::optional<Term> {
        if (leaf.kind() == TermKind::NonTerm) out.insert(leaf.name());
        return std::nullopt;
    });
    return out;
}

}  // namespace

Scheme compose(const Scheme& outer, const Scheme& inner, const std::string& hole, const std::string& plug,
               const ComposeOptions& opt)
{
    auto hole_type = outer.param_type(hole);
    if (!hole_type) throw TransformError("outer scheme has no parameter '" + hole + "'");
    if (!hole_type->finitary()) throw TransformError("parameter '" + hole + "' has a non-finitary type");
    const Rule* p = inner.find(plug);
    if (!p) throw TransformError("inner scheme has no non-terminal '" + plug + "'");
    if (!(p->type == *hole_type))
        throw TransformError("type mismatch: parameter '" + hole + "' has type " + hole_type->str() + " but '" +
                             plug + "' has type " + p->type.str());

    // Rules of the inner scheme reachable from the plug, in declaration order.
    std::set<std::string> needed{plug};
    std::deque<std::string> todo{plug};
    while (!todo.empty()) {
        const Rule* r = inner.find(todo.front());
        todo.pop_front();
        for (const auto& n : nonterms_in(r->body))
            if (needed.insert(n).second) todo.push_back(n);
    }

    std::set<std::string> used;
    for (const auto& r : outer.rules) used.insert(r.name);
    for (const auto& [n, t] : outer.params) used.insert(n);
    for (const auto& [n, t] : inner.params) used.insert(n);
    std::map<std::string, std::string> rename;
    for (const auto& r : inner.rules) {
        if (!needed.count(r.name)) continue;
        std::string n = r.name;
        if (used.count(n)) {
            if (!opt.auto_rename) {
                if (n == outer.start) throw TransformError("start-symbol collision on '" + n + "'");
                throw TransformError("non-terminal '" + n + "' is defined by both schemes");
            }
            for (unsigned i = 2; used.count(n); ++i) n = r.name + "_" + std::to_string(i);
        }
        used.insert(n);
        rename[r.name] = n;
    }

    Scheme out;
    out.start = outer.start;
    for (const auto& [n, t] : outer.params)
        if (n != hole) out.params.emplace_back(n, t);
    for (const auto& [n, t] : inner.params) {
        auto existing = out.param_type(n);
        if (existing && !(*existing == t))
            throw TransformError("shared parameter '" + n + "' has types " + existing->str() + " and " + t.str());
        if (!existing) out.params.emplace_back(n, t);
    }
    Term plugged = Term::nonterm(rename.at(plug));
    for (const auto& r : outer.rules) {
        Term body = replace_leaves(r.body, [&](const Term& leaf) -> std::optional<Term> {
            if (leaf.kind() == TermKind::Param && leaf.name() == hole) return plugged;
            return std::nullopt;
        });
        out.rules.push_back({r.name, r.type, r.params, body});
    }
    for (const auto& r : inner.rules) {
        if (!needed.count(r.name)) continue;
        Term body = replace_leaves(r.body, [&](const Term& leaf) -> std::optional<Term> {
            if (leaf.kind() == TermKind::NonTerm) return Term::nonterm(rename.at(leaf.name()));
            return std::nullopt;
        });
        out.rules.push_back({rename.at(r.name), r.type, r.params, body});
    }
    return out;
}

}  // namespace phorslab
