#pragma once

#include "phorslab/poly.hpp"

#include <json.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace phorslab {

// Fixpoint algebraic system w = P(w, z) with a distinguished start variable.
// Parameter variables are free (never solved).
struct Fas {
    VarId start = 0;
    std::vector<VarId> vars;    // canonical order
    std::map<VarId, Poly> eqs;  // one per element of vars
    std::vector<VarId> params;  // free parameter variables

    static VarId z();

    const Poly& rhs(VarId v) const;
    bool has(VarId v) const { return eqs.count(v) != 0; }
    bool is_param(VarId v) const;
    bool closed() const { return params.empty(); }
    std::size_t size() const { return vars.size(); }

    // Zero constant term and no bare single-variable monomial w_j.
    bool proper(VarId v) const;
    bool proper() const;

    // System variables occurring in v's right-hand side.
    std::set<VarId> dependencies(VarId v) const;

    std::string render() const;
    nlohmann::json to_json() const;
    static Fas from_json(const nlohmann::json& j);
};

inline constexpr int kFasFormatVersion = 1;

// Restrict to variables reachable from start; solutions there are unchanged.
Fas reachable(const Fas& fas);

// Variables whose least solution is identically zero (no derivation reaches a
// monomial free of system variables). Returns the removed set.
std::set<VarId> eliminate_unproductive(Fas& fas);

nlohmann::json poly_to_json(const Poly& p);
Poly poly_from_json(const nlohmann::json& j);

}  // namespace phorslab
