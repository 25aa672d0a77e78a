#pragma once

#include "phorslab/term.hpp"
#include "phorslab/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace phorslab {

struct Rule {
    std::string name;
    Type type;
    std::vector<std::string> params;
    Term body;

    friend bool operator==(const Rule&, const Rule&) = default;
};

struct Scheme {
    std::vector<Rule> rules;                           // declaration order
    std::vector<std::pair<std::string, Type>> params;  // open parameters, grade inf implicitly
    std::string start = "S";

    const Rule* find(const std::string& name) const;
    Rule* find(const std::string& name);
    std::optional<Type> param_type(const std::string& name) const;
    bool closed() const { return params.empty(); }
    bool finitary() const;
    unsigned order() const;
    // Paper's size measure: |N| * max body size.
    std::size_t size() const;
    unsigned max_grade() const;

    friend bool operator==(const Scheme&, const Scheme&) = default;
};

}  // namespace phorslab
