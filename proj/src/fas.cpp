#include "phorslab/fas.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace phorslab {

VarId Fas::z()
{
    static const VarId id = var_id("z");
    return id;
}

const Poly& Fas::rhs(VarId v) const
{
    auto it = eqs.find(v);
    if (it == eqs.end()) throw std::out_of_range("no equation for '" + var_name(v) + "'");
    return it->second;
}

bool Fas::is_param(VarId v) const
{
    return std::find(params.begin(), params.end(), v) != params.end();
}

bool Fas::proper(VarId v) const
{
    const Poly& p = rhs(v);
    if (p.constant_term() != 0) return false;
    for (const auto& [m, c] : p.terms()) {
        if (m.factors().size() == 1 && m.factors()[0].second == 1 && has(m.factors()[0].first)) return false;
    }
    return true;
}

bool Fas::proper() const
{
    return std::all_of(vars.begin(), vars.end(), [&](VarId v) { return proper(v); });
}

std::set<VarId> Fas::dependencies(VarId v) const
{
    std::set<VarId> out;
    for (VarId u : rhs(v).variables())
        if (has(u)) out.insert(u);
    return out;
}

std::string Fas::render() const
{
    std::string out = "start " + var_name(start) + "\n";
    if (!params.empty()) {
        out += "params";
        for (VarId p : params) out += " " + var_name(p);
        out += "\n";
    }
    for (VarId v : vars) {
        out += var_name(v) + " = " + rhs(v).str();
        if (!proper(v)) out += "    # improper";
        out += "\n";
    }
    return out;
}

nlohmann::json poly_to_json(const Poly& p)
{
    // Same order as the canonical text rendering.
    std::vector<std::pair<std::string, nlohmann::json>> terms;
    for (const auto& [m, c] : p.terms()) {
        nlohmann::json mono = nlohmann::json::array();
        std::vector<std::pair<std::string, unsigned>> fs;
        for (const auto& [v, e] : m.factors()) fs.emplace_back(var_name(v), e);
        std::sort(fs.begin(), fs.end());
        for (const auto& [n, e] : fs) mono.push_back({n, e});
        terms.emplace_back(render_monomial(m), nlohmann::json{{"coef", to_string(c)}, {"mono", mono}});
    }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    nlohmann::json arr = nlohmann::json::array();
    for (auto& t : terms) arr.push_back(std::move(t.second));
    return arr;
}

Poly poly_from_json(const nlohmann::json& j)
{
    Poly p;
    for (const auto& t : j) {
        Monomial m;
        for (const auto& f : t.at("mono")) m = m * Monomial::of(var_id(f.at(0).get<std::string>()), f.at(1).get<unsigned>());
        p.add_term(m, parse_rat(t.at("coef").get<std::string>()));
    }
    return p;
}

nlohmann::json Fas::to_json() const
{
    nlohmann::json j;
    j["format"] = "phors-lab/fas";
    j["version"] = kFasFormatVersion;
    j["start"] = var_name(start);
    j["params"] = nlohmann::json::array();
    for (VarId p : params) j["params"].push_back(var_name(p));
    j["equations"] = nlohmann::json::array();
    for (VarId v : vars)
        j["equations"].push_back({{"var", var_name(v)}, {"rhs", poly_to_json(rhs(v))}, {"proper", proper(v)}});
    return j;
}

Fas Fas::from_json(const nlohmann::json& j)
{
    if (j.value("format", "") != "phors-lab/fas") throw std::invalid_argument("not a phors-lab FAS document");
    if (j.value("version", 0) != kFasFormatVersion)
        throw std::invalid_argument("unsupported FAS format version " + std::to_string(j.value("version", 0)));
    Fas f;
    f.start = var_id(j.at("start").get<std::string>());
    for (const auto& p : j.at("params")) f.params.push_back(var_id(p.get<std::string>()));
    for (const auto& e : j.at("equations")) {
        VarId v = var_id(e.at("var").get<std::string>());
        if (f.eqs.count(v)) throw std::invalid_argument("duplicate equation for '" + var_name(v) + "'");
        f.vars.push_back(v);
        f.eqs[v] = poly_from_json(e.at("rhs"));
    }
    if (!f.has(f.start)) throw std::invalid_argument("start variable has no equation");
    for (VarId v : f.vars)
        for (VarId u : f.eqs[v].variables())
            if (u != z() && !f.has(u) && !f.is_param(u))
                throw std::invalid_argument("equation for '" + var_name(v) + "' mentions unknown variable '" +
                                            var_name(u) + "'");
    return f;
}

Fas reachable(const Fas& fas)
{
    std::set<VarId> seen{fas.start};
    std::deque<VarId> todo{fas.start};
    while (!todo.empty()) {
        VarId v = todo.front();
        todo.pop_front();
        for (VarId u : fas.dependencies(v))
            if (seen.insert(u).second) todo.push_back(u);
    }
    Fas out;
    out.start = fas.start;
    std::set<VarId> used_params;
    for (VarId v : fas.vars) {
        if (!seen.count(v)) continue;
        out.vars.push_back(v);
        out.eqs[v] = fas.rhs(v);
        for (VarId u : fas.rhs(v).variables())
            if (fas.is_param(u)) used_params.insert(u);
    }
    for (VarId p : fas.params)
        if (used_params.count(p)) out.params.push_back(p);
    return out;
}

std::set<VarId> eliminate_unproductive(Fas& fas)
{
    std::set<VarId> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (VarId v : fas.vars) {
            if (productive.count(v)) continue;
            for (const auto& [m, c] : fas.rhs(v).terms()) {
                bool ok = true;
                for (const auto& f : m.factors())
                    if (fas.has(f.first) && !productive.count(f.first)) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    productive.insert(v);
                    changed = true;
                    break;
                }
            }
        }
    }
    std::set<VarId> dead;
    for (VarId v : fas.vars)
        if (!productive.count(v)) dead.insert(v);
    std::vector<VarId> kept;
    for (VarId v : fas.vars) {
        if (dead.count(v) && v != fas.start) {
            fas.eqs.erase(v);
            continue;
        }
        kept.push_back(v);
    }
    fas.vars = kept;
    for (VarId v : fas.vars) fas.eqs[v] = dead.count(v) ? Poly() : fas.eqs[v].kill(dead);
    return dead;
}

}  // namespace phorslab
