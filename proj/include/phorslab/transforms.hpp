#pragma once

#include "phorslab/scheme.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phorslab {

class TransformError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- linearization

// Aff(o^n) = o^n; Aff(!k A -o R) = Aff(A) -o ... -o Aff(A) -o Aff(R), k copies,
// each with grade 1. A grade-0 argument disappears.
Type affine_type(const Type& t);

// Replaces every k-graded input by k affine inputs. Requires a scheme accepted
// by check_fin; the result is accepted by check_fin with all grades <= 1.
Scheme linearize(const Scheme& s);

// ---- composition

struct ComposeOptions {
    // Rename clashing non-terminals of the plugged scheme instead of failing.
    bool auto_rename = true;
};

// Fills parameter `hole` of `outer` with non-terminal `plug` of `inner`. Only
// the rules of `inner` reachable from `plug` are imported.
Scheme compose(const Scheme& outer, const Scheme& inner, const std::string& hole, const std::string& plug,
               const ComposeOptions& opt = {});

// ---- infinitary reduction

// Name of the finitary instance of `rule` with its unbounded arguments fixed to
// `args`; `rule` itself when there are none.
std::string instance_name(const std::string& rule, const std::vector<std::string>& args);

// Turns a closed scheme accepted by check_inf into a closed finitary scheme
// with the same generating function, keeping only instances reachable from
// the start symbol.
Scheme reduce_inf(const Scheme& s);

// ---- size bounds

// Size of a scheme: rule count times the largest body (Scheme::size).
struct SizeCheck {
    std::size_t before = 0, after = 0, bound = 0;
    bool holds() const { return after <= bound; }
    std::string str() const;
};

// after <= max(1, max grade of before) * size(before). Argument copies nest, so
// this can fail; callers report it rather than abort.
SizeCheck linearize_size_check(const Scheme& before, const Scheme& after);

// after <= size(before) ^ (rule count of before), saturating.
SizeCheck reduce_size_check(const Scheme& before, const Scheme& after);

}  // namespace phorslab
