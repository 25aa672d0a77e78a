#pragma once

#include "phorslab/fas.hpp"
#include "phorslab/linalg.hpp"
#include "phorslab/series.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace phorslab {

enum class Arithmetic { Exact, Float };

struct SolveConfig {
    unsigned degree = 10;                      // truncation degree of series
    Rat tolerance = Rat(1, 1000000000);        // interval width regarded as converged
    unsigned max_iterations = 0;               // 0: derived from the system size
    Arithmetic mode = Arithmetic::Exact;
};

class NonStationary : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a Kleene iterate decreases in some coefficient.
class MonotonicityViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Process-wide tallies of the monotonicity check.
struct MonotonicityStats {
    std::uint64_t runs = 0;        // Kleene runs checked
    std::uint64_t comparisons = 0; // coefficient comparisons made
    std::uint64_t violations = 0;
};
MonotonicityStats monotonicity_stats();

using SeriesMap = std::map<VarId, TruncSeries>;

// Exact coefficients up to z^n of the least solution. Parameters, if any,
// take the given series.
SeriesMap kleene_series(const Fas& fas, unsigned n, const SeriesMap& params = {}, unsigned max_iterations = 0);

// Floating-point coefficients up to z^n of the start variable, for closed
// systems. Not counted in the monotonicity tallies.
FloatSeries kleene_series_float(const Fas& fas, unsigned n);

// Strongly connected components of the dependency graph, dependencies first.
std::vector<std::vector<VarId>> scc_bottom_up(const Fas& fas);

// Right-hand sides with z = 1.
std::map<VarId, Poly> at_z_one(const Fas& fas);

// d P_v / d u over the listed variables at an exact point.
RatMatrix jacobian(const std::map<VarId, Poly>& rhs, const std::vector<VarId>& rows, const std::vector<VarId>& cols,
                   const std::map<VarId, Rat>& at);

// How a component's value was shown to be the least fixed point.
enum class LeastWitness {
    None,
    Acyclic,      // no self-dependency: value is a plain evaluation
    Contracting,  // y > 0 with (I - J) y = 1, so the spectral radius is < 1
    Critical,     // nonlinear component, u > 0 with J u = u
};

std::string to_string(LeastWitness w);

struct SccReport {
    std::vector<VarId> vars;
    bool linear = true;
    bool exact = false;
    LeastWitness witness = LeastWitness::None;
    RatVector witness_vector;
    unsigned newton_iterations = 0;
    std::string note;
};

struct MinSolution {
    Fas system;  // reachable, unproductive variables removed (start kept)
    std::map<VarId, Rat> lower;
    std::map<VarId, std::optional<Rat>> upper;  // nullopt: no upper bound found
    std::map<VarId, long double> approx;
    std::vector<SccReport> sccs;  // dependencies first
    std::vector<VarId> zero;      // reachable variables with least solution 0
    bool inconclusive_width = false;

    bool exact() const;
    std::optional<Rat> value(VarId v) const;
    std::map<VarId, Rat> exact_values() const;  // requires exact()
};

// Least nonnegative solution at z = 1.
MinSolution solve_at_one(const Fas& fas, const SolveConfig& cfg = {});

struct ExpectedSteps {
    enum class Kind { Finite, Infinite, Inconclusive };
    Kind kind = Kind::Inconclusive;
    Rat value;                     // Finite
    std::map<VarId, Rat> d;        // Finite: derivative of every variable
    std::optional<long double> approx;
    // Infinite: a component with J u = u, u > 0, and a path start -> ... -> a
    // variable with nonzero z-derivative passing through it.
    std::vector<VarId> critical_vars;
    RatVector eigenvector;
    std::size_t critical_rank = 0;
    std::vector<VarId> path;
    std::string note;
};

class PreconditionViolated : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Expected number of probabilistic steps, the z-derivative of the start
// variable at 1. Requires an exact solution whose start value is 1.
ExpectedSteps expected_steps(const MinSolution& sol, const SolveConfig& cfg = {});

}  // namespace phorslab
