#pragma once

#include "phorslab/fas.hpp"
#include "phorslab/linalg.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace phorslab {

// Machine-checkable evidence for a verdict. Every kind re-checks with exact
// arithmetic on the system alone, without running the solver.
struct Certificate {
    enum class Kind { None, FixpointAtOne, PreFixpointBelowOne, CriticalJacobian, NonsingularLinearSolve };

    // Least-fixpoint evidence for one strongly connected component of the
    // positive part of the system at `values`.
    struct Component {
        std::vector<VarId> vars;
        std::string witness;  // "contracting": (I - J) y = 1, y > 0; "critical": J u = u, u > 0
        RatVector vector;
    };

    Kind kind = Kind::None;
    std::map<VarId, Rat> values;         // solution (or pre-fixpoint) at z = 1
    std::vector<Component> components;   // leastness evidence for `values`
    std::vector<VarId> critical_vars;    // CriticalJacobian
    RatVector eigenvector;
    std::size_t critical_rank = 0;
    std::vector<VarId> path;
    std::map<VarId, Rat> derivative;     // NonsingularLinearSolve

    nlohmann::json to_json() const;
    static Certificate from_json(const nlohmann::json& j);
};

std::string to_string(Certificate::Kind k);

struct CertificateCheck {
    bool ok = false;
    bool least = false;  // `values` verified to be the least fixed point
    std::string reason;
};

// Independent re-verification against the system.
CertificateCheck check_certificate(const Fas& fas, const Certificate& c);

}  // namespace phorslab
