#pragma once

#include "phorslab/rational.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace phorslab {

using VarId = std::uint32_t;

// Process-wide interning of variable names. Reads are concurrent, writes
// serialized.
class VarRegistry {
public:
    static VarRegistry& global();

    VarId intern(const std::string& name);
    std::optional<VarId> find(const std::string& name) const;
    const std::string& name(VarId id) const;
    std::size_t size() const;

private:
    mutable std::shared_mutex mutex_;
    std::deque<std::string> names_;
    std::unordered_map<std::string, VarId> ids_;
};

inline VarId var_id(const std::string& name) { return VarRegistry::global().intern(name); }
inline const std::string& var_name(VarId id) { return VarRegistry::global().name(id); }

// Sparse exponent vector, sorted by variable id, exponents >= 1.
class Monomial {
public:
    using Factor = std::pair<VarId, unsigned>;

    Monomial() = default;
    static Monomial of(VarId v, unsigned exp = 1);

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }
    unsigned degree() const;
    unsigned exponent(VarId v) const;
    Monomial operator*(const Monomial& o) const;
    // Drops the given variable entirely.
    Monomial without(VarId v) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.factors_ <=> b.factors_; }

private:
    std::vector<Factor> factors_;
};

class Poly {
public:
    using Terms = std::map<Monomial, Rat>;

    Poly() = default;
    static Poly constant(const Rat& c);
    static Poly variable(VarId v);
    static Poly term(const Rat& c, const Monomial& m);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rat constant_term() const;
    Rat coefficient(const Monomial& m) const;
    unsigned total_degree() const;
    unsigned degree_in(const std::set<VarId>& vars) const;
    std::set<VarId> variables() const;

    void add_term(const Monomial& m, const Rat& c);

    Poly& operator+=(const Poly& o);
    Poly operator+(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const Rat& c) const;
    Poly pow(unsigned e) const;

    // d/dv
    Poly derivative(VarId v) const;
    // Replace each listed variable by a polynomial.
    Poly substitute(const std::map<VarId, Poly>& subst) const;
    // Delete every monomial mentioning a variable in `zeros`.
    Poly kill(const std::set<VarId>& zeros) const;

    // Canonical rendering: monomials sorted by rendered variable names.
    std::string str() const;

    friend bool operator==(const Poly&, const Poly&) = default;

private:
    Terms terms_;
};

std::string render_monomial(const Monomial& m);

// Generic evaluation in any commutative semiring V. `from_rat` lifts
// coefficients; `value_of` supplies variable values.
template <class V, class ValueOf, class FromRat>
V evaluate(const Poly& p, ValueOf&& value_of, FromRat&& from_rat)
{
    V acc = from_rat(Rat(0));
    for (const auto& [mono, coef] : p.terms()) {
        V term = from_rat(coef);
        for (const auto& [v, e] : mono.factors()) {
            const V& x = value_of(v);
            for (unsigned i = 0; i < e; ++i) term = term * x;
        }
        acc = acc + term;
    }
    return acc;
}

class UnassignedVariable : public std::runtime_error {
public:
    explicit UnassignedVariable(VarId v)
        : std::runtime_error("no value assigned to variable '" + var_name(v) + "'"), var(v) {}
    VarId var;
};

Rat eval(const Poly& p, const std::map<VarId, Rat>& assignment);
long double eval_approx(const Poly& p, const std::map<VarId, long double>& assignment);

}  // namespace phorslab
