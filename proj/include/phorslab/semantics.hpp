#pragma once

#include "phorslab/fas.hpp"
#include "phorslab/index.hpp"
#include "phorslab/scheme.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace phorslab {

struct CompileOptions {
    std::size_t var_cap = kDefaultIndexCap;
    // interpret_body only: accept targets in the grade-erased interpretation.
    bool allow_skeleton_targets = false;
};

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant of the interpretation failed. Never expected on
// well-typed input.
class BugCheckFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// FAS variable naming: owner + "@" + index rendering.
std::string fas_var_name(const std::string& owner, const Index& i);

// The polynomial of a rule body at one target index, after substituting 0 for
// the scheme's identically-zero variables.
Poly interpret_body(const Scheme& s, const std::string& rule, const Index& target, const CompileOptions& opt = {});

// A rule body at one ground point before the arguments are read off:
// `argument_vars` are the variables standing for arguments at ground points.
struct RawBody {
    std::string rule;
    unsigned point = 1;
    Poly poly;
    std::set<VarId> argument_vars;
};

std::vector<RawBody> raw_bodies(const Scheme& s, const CompileOptions& opt = {});

// One equation per productive (non-terminal, index) pair of the declared
// index sets; the start variable is (start, *).
Fas compile(const Scheme& s, const CompileOptions& opt = {});

}  // namespace phorslab
