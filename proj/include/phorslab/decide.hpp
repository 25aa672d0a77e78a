#pragma once

#include "phorslab/certificate.hpp"
#include "phorslab/solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace phorslab {

enum class Answer { Yes, No, Inconclusive };
std::string to_string(Answer a);

struct Verdict {
    Answer ast = Answer::Inconclusive;
    Answer past = Answer::Inconclusive;
    // Termination probability: exact when p_lo == p_hi.
    Rat p_lo;
    std::optional<Rat> p_hi;
    long double p_approx = 0;
    // Expected number of probabilistic steps.
    enum class Expectation { Unknown, Finite, Infinite };
    Expectation expectation = Expectation::Unknown;
    Rat expected;
    std::optional<long double> expected_approx;
    Certificate ast_certificate;
    Certificate past_certificate;
    std::vector<std::string> notes;

    std::optional<Rat> p_term() const;
    nlohmann::json to_json() const;
};

// AST part only; past stays inconclusive. `sol` receives the solution.
Verdict decide_ast(const Fas& fas, const SolveConfig& cfg = {}, MinSolution* sol = nullptr);

// Both parts.
Verdict decide(const Fas& fas, const SolveConfig& cfg = {});

}  // namespace phorslab
