#pragma once

#include "phorslab/scheme.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace phorslab {

enum class TypeSystem { Finitary, Infinitary };

class ContextMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Graded context: variable -> (grade, type). Missing variables have grade 0.
class GradedCtx {
public:
    struct Binding {
        unsigned grade = 0;
        Type type;
        friend bool operator==(const Binding&, const Binding&) = default;
    };

    GradedCtx() = default;
    static GradedCtx single(const std::string& x, unsigned grade, const Type& type);

    const std::map<std::string, Binding>& bindings() const { return bindings_; }
    unsigned grade_of(const std::string& x) const;

    // Partial operations: throw ContextMismatch when types disagree.
    GradedCtx operator+(const GradedCtx& o) const;
    GradedCtx scaled(unsigned k) const;
    // Pointwise maximum; used where premises share one context.
    GradedCtx join(const GradedCtx& o) const;

    // Grade-0 bindings are ignored by equality.
    friend bool operator==(const GradedCtx& a, const GradedCtx& b);

private:
    void check_agree(const GradedCtx& o) const;
    std::map<std::string, Binding> bindings_;
};

bool subtype(const Type& a, const Type& b);

struct Diagnostic {
    std::string rule;
    std::string constraint;  // grade-overflow, infinitary-argument, type-mismatch, ...
    std::string message;
    std::optional<Type> inferred;
    std::optional<Type> declared;
    std::vector<std::string> witness;
};

struct TypingReport {
    bool accepted = false;
    TypeSystem system = TypeSystem::Finitary;
    std::vector<std::pair<std::string, Type>> derived;
    std::vector<Diagnostic> diagnostics;
};

TypingReport check_fin(const Scheme& s);
TypingReport check_inf(const Scheme& s);
TypingReport check(const Scheme& s, TypeSystem sys);

class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Local variable types of a rule, read off its declared type.
std::map<std::string, Type> rule_locals(const Rule& r);

// Skeleton-directed type of a subterm of a well-typed rule body.
Type term_type(const Scheme& s, const std::map<std::string, Type>& locals, const Term& t);

}  // namespace phorslab
