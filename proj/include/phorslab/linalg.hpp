#pragma once

#include "phorslab/rational.hpp"

#include <optional>
#include <vector>

namespace phorslab {

using RatVector = std::vector<Rat>;
using RatMatrix = std::vector<RatVector>;  // row-major, square unless noted

RatMatrix identity(std::size_t n);
RatVector mat_vec(const RatMatrix& a, const RatVector& x);

// Exact rank by fraction-ful Gaussian elimination.
std::size_t rank(RatMatrix a);

// Unique solution of a x = b, or nullopt when a is singular.
std::optional<RatVector> solve(RatMatrix a, RatVector b);

// Basis of { x : a x = 0 }.
std::vector<RatVector> nullspace(RatMatrix a);

using LdVector = std::vector<long double>;
using LdMatrix = std::vector<LdVector>;

// Partial pivoting; nullopt when a pivot falls below `tiny` relative to the
// largest entry.
std::optional<LdVector> solve_ld(LdMatrix a, LdVector b, long double tiny = 1e-14L);

}  // namespace phorslab
