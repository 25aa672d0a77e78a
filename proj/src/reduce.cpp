#include "phorslab/transforms.hpp"
#include "phorslab/typing.hpp"

#include <deque>
#include <set>

namespace phorslab {

std::string instance_name(const std::string& rule, const std::vector<std::string>& args)
{
    if (args.empty()) return rule;
    std::string n = rule + "_";
    for (const auto& a : args) n += "_" + a;
    return n;
}

namespace {

unsigned unbounded_prefix(const Type& t)
{
    unsigned n = 0;
    for (const Type* c = &t; c->is_arrow() && !c->grade().finite(); c = &c->result()) ++n;
    return n;
}

class Reducer {
public:
    explicit Reducer(const Scheme& s) : s_(s)
    {
        for (const auto& r : s.rules) taken_.insert(r.name);
    }

    Scheme run()
    {
        Scheme out;
        out.start = s_.start;
        request(s_.start, {});
        while (!todo_.empty()) {
            auto [rule, args] = todo_.front();
            todo_.pop_front();
            const Rule* r = s_.find(rule);
            unsigned j = unbounded_prefix(r->type);
            std::map<std::string, Term> subst;
            for (unsigned i = 0; i < j; ++i) subst[r->params[i]] = Term::nonterm(args[i]);
            Term body = replace_leaves(r->body, [&](const Term& leaf) -> std::optional<Term> {
                if (leaf.kind() == TermKind::Var)
                    if (auto it = subst.find(leaf.name()); it != subst.end()) return it->second;
                return std::nullopt;
            });
            std::vector<std::string> params(r->params.begin() + j, r->params.end());
            out.rules.push_back({names_.at({rule, args}), r->type.residual(j), params, rewrite(body)});
        }
        return out;
    }

private:
    const std::string& request(const std::string& rule, const std::vector<std::string>& args)
    {
        auto key = std::make_pair(rule, args);
        auto it = names_.find(key);
        if (it != names_.end()) return it->second;
        std::string n = instance_name(rule, args);
        if (!args.empty())
            while (taken_.count(n)) n += "'";
        taken_.insert(n);
        todo_.push_back(key);
        return names_.emplace(key, n).first->second;
    }

    // Replaces each saturated unbounded application G d1 .. dj by its instance.
    Term rewrite(const Term& t)
    {
        switch (t.kind()) {
        case TermKind::NonTerm:
        case TermKind::App: {
            const Term& h = t.head();
            if (h.kind() != TermKind::NonTerm) break;
            auto args = t.spine_args();
            const Rule* r = s_.find(h.name());
            unsigned j = unbounded_prefix(r->type);
            if (args.size() < j)
                throw TransformError("unsaturated use of '" + h.name() + "' in an unbounded position");
            std::vector<std::string> inst;
            for (unsigned i = 0; i < j; ++i) {
                if (args[i].kind() != TermKind::NonTerm)
                    throw TransformError("argument '" + std::to_string(i + 1) + "' of '" + h.name() +
                                         "' is not a non-terminal");
                inst.push_back(args[i].name());
            }
            Term out = Term::nonterm(request(h.name(), inst));
            for (std::size_t i = j; i < args.size(); ++i) out = Term::app(out, rewrite(args[i]));
            return out;
        }
        default:
            break;
        }
        switch (t.kind()) {
        case TermKind::App: {
            Term f = rewrite(t.fun());
            return Term::app(f, rewrite(t.arg()));
        }
        case TermKind::Choice: {
            Term l = rewrite(t.left());
            return Term::choice(l, t.bias(), rewrite(t.right()));
        }
        case TermKind::Tuple: {
            std::vector<Term> items;
            for (const auto& u : t.items()) items.push_back(rewrite(u));
            return Term::tuple(std::move(items));
        }
        case TermKind::Proj:
            return Term::proj(t.index(), rewrite(t.body()));
        default:
            return t;
        }
    }

    const Scheme& s_;
    std::set<std::string> taken_;
    std::map<std::pair<std::string, std::vector<std::string>>, std::string> names_;
    std::deque<std::pair<std::string, std::vector<std::string>>> todo_;
};

}  // namespace

Scheme reduce_inf(const Scheme& s)
{
    if (!s.closed()) throw TransformError("reduction needs a closed scheme; it has open parameters");
    auto rep = check_inf(s);
    if (!rep.accepted)
        throw TransformError("reduction needs a scheme accepted by check_inf: " +
                             (rep.diagnostics.empty() ? std::string("rejected") : rep.diagnostics.front().message));
    Scheme out = Reducer(s).run();
    auto chk = check_fin(out);
    if (!chk.accepted)
        throw TransformError("internal: reduced scheme is ill-typed: " + chk.diagnostics.front().message);
    return out;
}

}  // namespace phorslab
