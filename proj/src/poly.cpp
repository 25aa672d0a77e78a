#include "phorslab/poly.hpp"
#include "phorslab/series.hpp"

#include <algorithm>
#include <mutex>

namespace phorslab {

VarRegistry& VarRegistry::global()
{
    static VarRegistry instance;
    return instance;
}

VarId VarRegistry::intern(const std::string& name)
{
    {
        std::shared_lock lock(mutex_);
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    VarId id = static_cast<VarId>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
}

std::optional<VarId> VarRegistry::find(const std::string& name) const
{
    std::shared_lock lock(mutex_);
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& VarRegistry::name(VarId id) const
{
    std::shared_lock lock(mutex_);
    return names_.at(id);
}

std::size_t VarRegistry::size() const
{
    std::shared_lock lock(mutex_);
    return names_.size();
}

// ---- Monomial

Monomial Monomial::of(VarId v, unsigned exp)
{
    Monomial m;
    if (exp > 0) m.factors_.emplace_back(v, exp);
    return m;
}

unsigned Monomial::degree() const
{
    unsigned d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
}

unsigned Monomial::exponent(VarId v) const
{
    auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{v, 0});
    return (it != factors_.end() && it->first == v) ? it->second : 0;
}

Monomial Monomial::operator*(const Monomial& o) const
{
    Monomial r;
    r.factors_.reserve(factors_.size() + o.factors_.size());
    auto a = factors_.begin(), b = o.factors_.begin();
    while (a != factors_.end() || b != o.factors_.end()) {
        if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
            r.factors_.push_back(*a++);
        } else if (a == factors_.end() || b->first < a->first) {
            r.factors_.push_back(*b++);
        } else {
            r.factors_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return r;
}

Monomial Monomial::without(VarId v) const
{
    Monomial r;
    for (const auto& f : factors_)
        if (f.first != v) r.factors_.push_back(f);
    return r;
}

std::string render_monomial(const Monomial& m)
{
    std::vector<std::string> parts;
    for (const auto& [v, e] : m.factors()) parts.push_back(var_name(v) + (e > 1 ? "^" + std::to_string(e) : ""));
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += " ";
        out += p;
    }
    return out;
}

// ---- Poly

Poly Poly::constant(const Rat& c)
{
    Poly p;
    p.add_term(Monomial(), c);
    return p;
}

Poly Poly::variable(VarId v)
{
    return term(Rat(1), Monomial::of(v));
}

Poly Poly::term(const Rat& c, const Monomial& m)
{
    Poly p;
    p.add_term(m, c);
    return p;
}

Rat Poly::constant_term() const
{
    return coefficient(Monomial());
}

Rat Poly::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

unsigned Poly::total_degree() const
{
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.first.degree());
    return d;
}

unsigned Poly::degree_in(const std::set<VarId>& vars) const
{
    unsigned best = 0;
    for (const auto& t : terms_) {
        unsigned d = 0;
        for (const auto& [v, e] : t.first.factors())
            if (vars.count(v)) d += e;
        best = std::max(best, d);
    }
    return best;
}

std::set<VarId> Poly::variables() const
{
    std::set<VarId> out;
    for (const auto& t : terms_)
        for (const auto& f : t.first.factors()) out.insert(f.first);
    return out;
}

void Poly::add_term(const Monomial& m, const Rat& c)
{
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly Poly::operator+(const Poly& o) const
{
    Poly r = *this;
    r += o;
    return r;
}

Poly Poly::operator*(const Poly& o) const
{
    Poly r;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Poly Poly::scaled(const Rat& c) const
{
    if (c == 0) return Poly();
    Poly r = *this;
    for (auto& t : r.terms_) t.second *= c;
    return r;
}

Poly Poly::pow(unsigned e) const
{
    Poly r = constant(Rat(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

Poly Poly::derivative(VarId v) const
{
    Poly r;
    for (const auto& [m, c] : terms_) {
        unsigned e = m.exponent(v);
        if (e == 0) continue;
        Monomial rest = m.without(v) * Monomial::of(v, e - 1);
        r.add_term(rest, c * e);
    }
    return r;
}

Poly Poly::substitute(const std::map<VarId, Poly>& subst) const
{
    Poly r;
    for (const auto& [m, c] : terms_) {
        Poly t = constant(c);
        Monomial kept;
        for (const auto& [v, e] : m.factors()) {
            auto it = subst.find(v);
            if (it == subst.end())
                kept = kept * Monomial::of(v, e);
            else
                t = t * it->second.pow(e);
        }
        r += t * term(Rat(1), kept);
    }
    return r;
}

Poly Poly::kill(const std::set<VarId>& zeros) const
{
    Poly r;
    for (const auto& [m, c] : terms_) {
        bool dead = false;
        for (const auto& f : m.factors())
            if (zeros.count(f.first)) {
                dead = true;
                break;
            }
        if (!dead) r.terms_.emplace(m, c);
    }
    return r;
}

std::string Poly::str() const
{
    if (terms_.empty()) return "0";
    std::vector<std::pair<std::string, std::string>> rendered;
    for (const auto& [m, c] : terms_) {
        std::string mono = render_monomial(m);
        std::string coef = to_string(c);
        std::string text;
        if (mono.empty())
            text = coef;
        else if (c == 1)
            text = mono;
        else
            text = coef + " " + mono;
        rendered.emplace_back(mono, text);
    }
    std::sort(rendered.begin(), rendered.end());
    std::string out;
    for (const auto& r : rendered) {
        if (!out.empty()) out += " + ";
        out += r.second;
    }
    return out;
}

Rat eval(const Poly& p, const std::map<VarId, Rat>& assignment)
{
    return evaluate<Rat>(
        p,
        [&](VarId v) -> const Rat& {
            auto it = assignment.find(v);
            if (it == assignment.end()) throw UnassignedVariable(v);
            return it->second;
        },
        [](const Rat& c) { return c; });
}

long double eval_approx(const Poly& p, const std::map<VarId, long double>& assignment)
{
    return evaluate<long double>(
        p,
        [&](VarId v) -> const long double& {
            auto it = assignment.find(v);
            if (it == assignment.end()) throw UnassignedVariable(v);
            return it->second;
        },
        [](const Rat& c) { return to_long_double(c); });
}

TruncSeries eval_series(const Poly& p, const std::map<VarId, TruncSeries>& assignment, unsigned n)
{
    return evaluate<TruncSeries>(
        p,
        [&](VarId v) -> const TruncSeries& {
            auto it = assignment.find(v);
            if (it == assignment.end()) throw UnassignedVariable(v);
            return it->second;
        },
        [n](const Rat& c) { return TruncSeries::constant(c, n); });
}

}  // namespace phorslab
