#include "phorslab/parser.hpp"
#include "phorslab/transforms.hpp"
#include "phorslab/typing.hpp"

#include <set>

namespace phorslab {

Type affine_type(const Type& t)
{
    if (t.is_ground()) return t;
    if (!t.grade().finite()) throw TransformError("cannot linearize the infinite grade in " + t.str());
    Type arg = affine_type(t.arg());
    Type out = affine_type(t.result());
    for (unsigned i = 0; i < t.grade().value(); ++i) out = Type::arrow(Grade(1), arg, out);
    return out;
}

namespace {

class Linearizer {
public:
    Linearizer(const Scheme& s, const Rule& r, std::map<std::string, std::vector<std::string>> copies)
        : s_(s), locals_(rule_locals(r)), copies_(std::move(copies))
    {
    }

    Term go(const Term& t)
    {
        switch (t.kind()) {
        case TermKind::Var: {
            auto& names = copies_.at(t.name());
            unsigned& u = used_[t.name()];
            if (u >= names.size())
                throw TransformError("variable '" + t.name() + "' used more often than its grade allows");
            return Term::var(names[u++]);
        }
        case TermKind::NonTerm:
        case TermKind::Param:
        case TermKind::Unit:
        case TermKind::Omega:
            return t;
        case TermKind::App: {
            Type ft = term_type(s_, locals_, t.fun());
            Term out = go(t.fun());
            for (unsigned i = 0; i < ft.grade().value(); ++i) out = Term::app(out, go(t.arg()));
            return out;
        }
        case TermKind::Choice: {
            auto before = used_;
            Term l = go(t.left());
            auto after_left = used_;
            used_ = before;
            Term r = go(t.right());
            merge(after_left);
            return Term::choice(l, t.bias(), r);
        }
        case TermKind::Tuple: {
            auto before = used_;
            std::map<std::string, unsigned> most = before;
            std::vector<Term> items;
            for (const auto& it : t.items()) {
                used_ = before;
                items.push_back(go(it));
                for (const auto& [x, n] : used_) most[x] = std::max(most[x], n);
            }
            used_ = most;
            return Term::tuple(std::move(items));
        }
        case TermKind::Proj:
            return Term::proj(t.index(), go(t.body()));
        }
        throw std::logic_error("unreachable");
    }

private:
    void merge(const std::map<std::string, unsigned>& other)
    {
        for (const auto& [x, n] : other) used_[x] = std::max(used_[x], n);
    }

    const Scheme& s_;
    std::map<std::string, Type> locals_;
    std::map<std::string, std::vector<std::string>> copies_;
    std::map<std::string, unsigned> used_;
};

}  // namespace

Scheme linearize(const Scheme& s)
{
    auto rep = check_fin(s);
    if (!rep.accepted)
        throw TransformError("linearize needs a scheme accepted by check_fin: " +
                             (rep.diagnostics.empty() ? std::string("rejected") : rep.diagnostics.front().message));
    Scheme out;
    out.start = s.start;
    for (const auto& [n, t] : s.params) out.params.emplace_back(n, affine_type(t));
    std::set<std::string> taken = {"param", "start", "e", "Omega"};
    for (const auto& r : s.rules) taken.insert(r.name);
    for (const auto& [n, t] : s.params) taken.insert(n);

    for (const auto& r : s.rules) {
        std::set<std::string> names = taken;
        for (const auto& p : r.params) names.insert(p);
        std::map<std::string, std::vector<std::string>> copies;
        std::vector<std::string> params;
        const Type* t = &r.type;
        for (const auto& p : r.params) {
            unsigned k = t->grade().value();
            auto& c = copies[p];
            if (k == 1) {
                c.push_back(p);
            } else {
                for (unsigned i = 1; i <= k; ++i) {
                    std::string n = p + "_" + std::to_string(i);
                    while (names.count(n)) n += "'";
                    names.insert(n);
                    c.push_back(n);
                }
            }
            params.insert(params.end(), c.begin(), c.end());
            t = &t->result();
        }
        Linearizer lin(s, r, copies);
        out.rules.push_back({r.name, affine_type(r.type), params, lin.go(r.body)});
    }
    auto chk = check_fin(out);
    if (!chk.accepted)
        throw TransformError("internal: linearized scheme is ill-typed: " + chk.diagnostics.front().message);
    if (out.max_grade() > 1) throw TransformError("internal: linearized scheme has a grade above 1");
    return out;
}

}  // namespace phorslab
