#include "phorslab/semantics.hpp"
#include "phorslab/parser.hpp"
#include "phorslab/typing.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace phorslab {

std::string fas_var_name(const std::string& owner, const Index& i)
{
    return owner + "@" + i.str();
}

namespace {

struct Formal {
    std::size_t position;  // which rule parameter
    Index index;
};

class Compiler {
public:
    Compiler(const Scheme& s, const CompileOptions& opt) : s_(s), opt_(opt) {}

    Fas run();
    // Raw body polynomial at a ground point, formal variables included.
    Poly body_at(const Rule& r, unsigned point);
    const std::map<VarId, Formal>& formals() const { return formal_; }

private:
    struct Suspect {
        std::string rule;
        std::string why;
    };
    struct Round {
        std::map<std::pair<std::size_t, Index>, Poly> eqs;
        std::vector<Suspect> suspects;
        std::vector<std::pair<const Rule*, Poly>> raw;
    };

    const std::vector<Index>& points(const Type& t);
    Poly interp(const Term& t, const Index& sigma);
    Poly app(const Term& t, const Index& sigma);
    Round round();

    const Scheme& s_;
    CompileOptions opt_;
    std::map<Type, std::vector<Index>> point_cache_;
    std::map<VarId, Formal> formal_;
    // System variables admitted so far; all others are taken to be zero. The
    // rounds grow this set to the productive variables.
    std::set<VarId> live_;
    std::map<std::pair<const void*, Index>, Poly> memo_;

    // Per-rule state.
    const Rule* rule_ = nullptr;
    std::map<std::string, std::pair<std::size_t, Type>> locals_;
    std::map<std::string, Type> local_types_;
};

const std::vector<Index>& Compiler::points(const Type& t)
{
    auto it = point_cache_.find(t);
    if (it != point_cache_.end()) return it->second;
    return point_cache_.emplace(t, enumerate_index(t, opt_.var_cap)).first->second;
}

Poly Compiler::interp(const Term& t, const Index& sigma)
{
    switch (t.kind()) {
    case TermKind::Var: {
        auto it = locals_.find(t.name());
        if (it == locals_.end()) throw CompileError("unbound variable '" + t.name() + "'");
        if (!index_in(sigma, it->second.second)) return {};
        VarId v = var_id("%" + rule_->name + "." + t.name() + "@" + sigma.str());
        formal_.emplace(v, Formal{it->second.first, sigma});
        return Poly::variable(v);
    }
    case TermKind::NonTerm: {
        const Rule* r = s_.find(t.name());
        if (!index_in(sigma, r->type)) return {};
        VarId v = var_id(fas_var_name(r->name, sigma));
        if (!live_.count(v)) return {};
        return Poly::variable(v);
    }
    case TermKind::Param: {
        auto pt = s_.param_type(t.name());
        if (!index_in(sigma, *pt)) return {};
        return Poly::variable(var_id(fas_var_name(t.name(), sigma)));
    }
    case TermKind::Unit:
        return sigma.is_ground() && sigma.point() == 1 ? Poly::constant(Rat(1)) : Poly();
    case TermKind::Omega:
        return {};
    case TermKind::Choice: {
        if (!sigma.is_ground() || sigma.point() != 1) return {};
        Poly zv = Poly::variable(Fas::z());
        Poly l = interp(t.left(), sigma);
        Poly r = interp(t.right(), sigma);
        return (l * zv).scaled(t.bias()) + (r * zv).scaled(Rat(1) - t.bias());
    }
    case TermKind::Tuple:
        if (!sigma.is_ground() || sigma.point() > t.items().size()) return {};
        return interp(t.items()[sigma.point() - 1], Index::ground(1));
    case TermKind::Proj:
        if (!sigma.is_ground() || sigma.point() != 1) return {};
        return interp(t.body(), Index::ground(t.index()));
    case TermKind::App: {
        auto key = std::make_pair(t.identity(), sigma);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Poly p = app(t, sigma);
        memo_.emplace(key, p);
        return p;
    }
    }
    throw std::logic_error("unreachable");
}

Poly Compiler::app(const Term& t, const Index& sigma)
{
    Type ft = term_type(s_, local_types_, t.fun());
    if (!ft.is_arrow() || !ft.grade().finite())
        throw CompileError("application through an infinite grade in '" + print_term(t) +
                           "'; reduce the scheme to a finitary one first");
    unsigned k = ft.grade().value();
    const auto& args = points(ft.arg());
    // Only argument points with a nonzero interpretation can contribute.
    std::vector<std::pair<const Index*, Poly>> live;
    for (const auto& i : args) {
        Poly p = interp(t.arg(), i);
        if (!p.is_zero()) live.emplace_back(&i, std::move(p));
    }
    Poly out;
    std::vector<unsigned> mult(live.size(), 0);
    // Powers of each live argument polynomial, built lazily.
    std::vector<std::vector<Poly>> powers(live.size());
    for (std::size_t j = 0; j < live.size(); ++j) powers[j].push_back(Poly::constant(Rat(1)));
    while (true) {
        Index::Multiset ms;
        for (std::size_t j = 0; j < live.size(); ++j)
            if (mult[j]) ms.emplace_back(*live[j].first, mult[j]);
        Poly head = interp(t.fun(), Index::arrow(ms, sigma));
        if (!head.is_zero()) {
            Poly prod = head;
            for (std::size_t j = 0; j < live.size(); ++j) {
                if (!mult[j]) continue;
                while (powers[j].size() <= mult[j]) powers[j].push_back(powers[j].back() * live[j].second);
                prod = prod * powers[j][mult[j]];
            }
            out += prod;
        }
        std::size_t pos = live.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (mult[pos] < k) {
                ++mult[pos];
                done = false;
                break;
            }
            mult[pos] = 0;
        }
        if (done) break;
    }
    return out;
}

Poly Compiler::body_at(const Rule& r, unsigned point)
{
    rule_ = &r;
    memo_.clear();
    locals_.clear();
    local_types_ = rule_locals(r);
    const Type* t = &r.type;
    for (std::size_t j = 0; j < r.params.size(); ++j) {
        locals_[r.params[j]] = {j, t->arg()};
        t = &t->result();
    }
    return interp(r.body, Index::ground(point));
}

Compiler::Round Compiler::round()
{
    Round out;
    for (const auto& r : s_.rules) {
        std::size_t pos = static_cast<std::size_t>(&r - s_.rules.data());
        const Type& residual = r.type.residual(static_cast<unsigned>(r.params.size()));
        std::vector<Grade> grades;
        const Type* t = &r.type;
        for (std::size_t j = 0; j < r.params.size(); ++j) {
            grades.push_back(t->grade());
            t = &t->result();
        }
        for (unsigned g = 1; g <= residual.width(); ++g) {
            Poly p = body_at(r, g);
            out.raw.emplace_back(&r, p);
            for (const auto& [m, c] : p.terms()) {
                std::vector<Index::Multiset> uses(r.params.size());
                Monomial rest;
                for (const auto& [v, e] : m.factors()) {
                    auto f = formal_.find(v);
                    if (f == formal_.end())
                        rest = rest * Monomial::of(v, e);
                    else
                        uses[f->second.position].emplace_back(f->second.index, e);
                }
                bool inside = true;
                for (std::size_t j = 0; j < uses.size(); ++j) {
                    unsigned total_uses = 0;
                    for (const auto& u : uses[j]) {
                        total_uses += u.second;
                        if (u.second > grades[j].value()) inside = false;
                    }
                    if (total_uses > grades[j].value())
                        out.suspects.push_back({r.name, "degree " + std::to_string(total_uses) + " in '" +
                                                            r.params[j] + "' exceeds its grade " + grades[j].str()});
                }
                if (!inside) continue;
                Index target = Index::ground(g);
                for (std::size_t j = uses.size(); j-- > 0;) target = Index::arrow(uses[j], target);
                out.eqs[{pos, target}].add_term(rest, c);
            }
        }
    }
    return out;
}

Fas Compiler::run()
{
    for (const auto& [n, ty] : s_.params)
        if (!ty.finitary()) throw CompileError("parameter '" + n + "' has a non-finitary type");
    std::size_t total = 0;
    for (const auto& r : s_.rules) {
        if (!r.type.finitary())
            throw CompileError("non-terminal '" + r.name + "' has an infinite grade; reduce the scheme first");
        if (!r.type.residual(static_cast<unsigned>(r.params.size())).is_ground())
            throw CompileError("rule '" + r.name + "' must bind every argument of its type");
        std::size_t c = index_count(r.type);
        total = (c == SIZE_MAX || total + c < total) ? SIZE_MAX : total + c;
        if (total > opt_.var_cap) throw IndexCapExceeded(total, opt_.var_cap);
    }
    if (!s_.find(s_.start)) throw CompileError("no rule for the start symbol '" + s_.start + "'");

    // Start from no admitted variables and admit the productive ones until
    // stable. Monomials over unproductive variables never arise, which keeps
    // the products small.
    VarId start = var_id(fas_var_name(s_.start, Index::ground(1)));
    Fas fas;
    Round rd;
    live_.clear();
    while (true) {
        rd = round();
        fas = Fas();
        fas.start = start;
        for (const auto& [key, poly] : rd.eqs) {
            if (poly.is_zero()) continue;
            VarId v = var_id(fas_var_name(s_.rules[key.first].name, key.second));
            fas.vars.push_back(v);
            fas.eqs[v] = poly;
        }
        if (!fas.has(start)) {
            fas.vars.insert(fas.vars.begin(), start);
            fas.eqs[start] = Poly();
        }
        std::set<VarId> dead = eliminate_unproductive(fas);
        std::set<VarId> productive;
        for (VarId v : fas.vars)
            if (!dead.count(v)) productive.insert(v);
        if (productive == live_) break;
        live_ = std::move(productive);
    }

    if (!rd.suspects.empty())
        throw BugCheckFailure("interpretation of '" + rd.suspects.front().rule + "' has a surviving monomial of " +
                              rd.suspects.front().why);
    if (s_.order() <= 1) {
        std::set<VarId> formal_vars;
        for (const auto& [v, f] : formal_) formal_vars.insert(v);
        for (const auto& [r, p] : rd.raw)
            if (p.degree_in(formal_vars) > 1)
                throw BugCheckFailure("order-1 rule '" + r->name + "' is not affine in its arguments: " + p.str());
    }

    std::set<VarId> params;
    for (VarId v : fas.vars)
        for (VarId u : fas.rhs(v).variables())
            if (u != Fas::z() && !fas.has(u)) params.insert(u);
    fas.params.assign(params.begin(), params.end());
    std::sort(fas.params.begin(), fas.params.end(),
              [](VarId a, VarId b) { return var_name(a) < var_name(b); });
    return fas;
}

}  // namespace

Fas compile(const Scheme& s, const CompileOptions& opt)
{
    Compiler c(s, opt);
    return c.run();
}

Poly interpret_body(const Scheme& s, const std::string& rule, const Index& target, const CompileOptions& opt)
{
    const Rule* r = s.find(rule);
    if (!r) throw CompileError("no rule named '" + rule + "'");
    bool inside = index_in(target, r->type);
    if (!inside && !(opt.allow_skeleton_targets && index_in_skeleton(target, r->type)))
        throw CompileError("index " + target.str() + " is not in the interpretation of " + r->type.str());
    Compiler c(s, opt);
    c.run();
    // Peel the target into per-parameter multisets and a ground point.
    std::vector<Index::Multiset> want;
    Index cur = target;
    for (std::size_t j = 0; j < r->params.size(); ++j) {
        if (cur.is_ground()) throw CompileError("index " + target.str() + " has too few arguments");
        want.push_back(cur.uses());
        Index next = cur.result();
        cur = next;
    }
    if (!cur.is_ground()) throw CompileError("index " + target.str() + " has too many arguments");
    Poly raw = c.body_at(*r, cur.point());
    Poly out;
    for (const auto& [m, coef] : raw.terms()) {
        std::vector<Index::Multiset> uses(r->params.size());
        Monomial rest;
        for (const auto& [v, e] : m.factors()) {
            auto f = c.formals().find(v);
            if (f == c.formals().end())
                rest = rest * Monomial::of(v, e);
            else
                uses[f->second.position].emplace_back(f->second.index, e);
        }
        bool match = true;
        for (std::size_t j = 0; j < uses.size() && match; ++j) {
            Index a = Index::arrow(uses[j], Index());
            Index b = Index::arrow(want[j], Index());
            match = a == b;
        }
        if (match) out.add_term(rest, coef);
    }
    return out;
}

std::vector<RawBody> raw_bodies(const Scheme& s, const CompileOptions& opt)
{
    Compiler c(s, opt);
    c.run();
    std::vector<RawBody> out;
    for (const auto& r : s.rules) {
        unsigned width = r.type.residual(static_cast<unsigned>(r.params.size())).width();
        for (unsigned g = 1; g <= width; ++g) out.push_back({r.name, g, c.body_at(r, g), {}});
    }
    for (auto& b : out)
        for (const auto& [v, f] : c.formals())
            if (f.index.is_ground()) b.argument_vars.insert(v);
    return out;
}

}  // namespace phorslab
