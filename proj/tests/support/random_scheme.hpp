#pragma once

#include "phorslab/scheme.hpp"

#include <cstdint>

namespace phorslab::testing {

struct RandomSchemeOptions {
    unsigned nonterminals = 3;  // besides the start symbol
    unsigned max_order = 1;     // 1 or 2
    unsigned max_grade = 2;
    unsigned max_arity = 2;
    unsigned max_depth = 3;
};

// A closed finitary scheme built so that every argument stays within its
// declared grade. Deterministic in the seed.
Scheme random_scheme(std::uint64_t seed, const RandomSchemeOptions& opt = {});

}  // namespace phorslab::testing
