#pragma once

#include "phorslab/rational.hpp"
#include "phorslab/scheme.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace phorslab {

// A ground term with no applicable rule that is neither e nor Omega-headed.
class StuckTerm : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RedexKind { Unfold, Choice, Value, Diverge };

// The leftmost-outermost redex of a ground term. For Unfold, `next` is the
// contractum; for Choice, `left` and `right` are the two outcomes and `bias`
// the probability of `left`.
struct Redex {
    RedexKind kind = RedexKind::Value;
    Term next, left, right;
    Rat bias;
};

Redex head_redex(const Scheme& s, const Term& t);

struct ChoiceMade {
    bool left = true;
    Rat probability;
};

// Returns true to go left when given the left probability.
using DirectionSampler = std::function<bool(const Rat& left_probability)>;

// One call-by-name step. Returns nullopt on e and on Omega-headed terms.
std::optional<std::pair<Term, std::optional<ChoiceMade>>> step(const Scheme& s, const Term& t,
                                                               const DirectionSampler& sample);

inline constexpr std::uint64_t kDefaultStepBudget = 1000000;

// Exact probabilities of terminating after exactly i choices, i <= max_choices.
struct Enumeration {
    unsigned max_choices = 0;
    std::uint64_t step_budget = kDefaultStepBudget;
    std::map<unsigned, Rat> terminating;
    Rat diverged;   // reached an Omega-headed term
    Rat exhausted;  // ran out of deterministic steps between two choices
    Rat cut;        // still running after max_choices choices
    bool lower_bound() const { return exhausted != 0; }
    nlohmann::json to_json() const;
};

Enumeration enumerate(const Scheme& s, unsigned max_choices, std::uint64_t step_budget = kDefaultStepBudget);

struct Interval {
    double lower = 0, upper = 1;
    bool contains(double x) const { return lower <= x && x <= upper; }
};

// Wilson score interval for k successes in n trials; z = 3 is the 99.7% level.
Interval wilson(std::uint64_t k, std::uint64_t n, double z = 3.0);

struct MonteCarloOptions {
    std::uint64_t trials = 100000;
    unsigned choice_cap = 10000;  // a trial making more choices counts as not terminated
    std::uint64_t step_budget = kDefaultStepBudget;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: PHORS_LAB_THREADS, else hardware concurrency
};

struct RunStats {
    static constexpr const char* kGenerator = "splitmix64";
    std::uint64_t seed = 0;
    unsigned choice_cap = 0;
    std::uint64_t trials = 0;
    std::uint64_t terminated = 0;
    std::uint64_t diverged = 0;
    std::uint64_t exhausted = 0;
    std::uint64_t capped = 0;
    std::map<unsigned, std::uint64_t> histogram;  // choices made -> terminated trials
    std::uint64_t steps_terminated = 0;           // total rewriting steps of terminated trials

    double p_term() const { return trials ? double(terminated) / double(trials) : 0.0; }
    Interval p_term_interval(double z = 3.0) const { return wilson(terminated, trials, z); }
    double mean_steps() const { return terminated ? double(steps_terminated) / double(terminated) : 0.0; }
    void merge(const RunStats& o);
    nlohmann::json to_json() const;
    std::string histogram_csv() const;
};

// Reproducible for a fixed seed regardless of the thread count.
RunStats monte_carlo(const Scheme& s, const MonteCarloOptions& opt = {});

// Number of worker threads from PHORS_LAB_THREADS or the hardware.
unsigned worker_count(unsigned requested = 0);

}  // namespace phorslab
