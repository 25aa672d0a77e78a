#include "phorslab/scheme.hpp"

#include <algorithm>

namespace phorslab {

const Rule* Scheme::find(const std::string& name) const
{
    for (const auto& r : rules)
        if (r.name == name) return &r;
    return nullptr;
}

Rule* Scheme::find(const std::string& name)
{
    for (auto& r : rules)
        if (r.name == name) return &r;
    return nullptr;
}

std::optional<Type> Scheme::param_type(const std::string& name) const
{
    for (const auto& [n, t] : params)
        if (n == name) return t;
    return std::nullopt;
}

bool Scheme::finitary() const
{
    return std::all_of(rules.begin(), rules.end(), [](const Rule& r) { return r.type.finitary(); });
}

unsigned Scheme::order() const
{
    unsigned o = 0;
    for (const auto& r : rules) o = std::max(o, phorslab::order(r.type));
    return o;
}

std::size_t Scheme::size() const
{
    std::size_t m = 0;
    for (const auto& r : rules) m = std::max(m, r.body.size());
    return rules.size() * m;
}

unsigned Scheme::max_grade() const
{
    unsigned g = 0;
    for (const auto& r : rules) g = std::max(g, r.type.max_grade());
    return g;
}

}  // namespace phorslab
