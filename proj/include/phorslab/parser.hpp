#pragma once

#include "phorslab/scheme.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace phorslab {

class ParseError : public std::runtime_error {
public:
    ParseError(unsigned line, unsigned col, const std::string& msg, const std::string& file = "")
        : std::runtime_error((file.empty() ? "" : file + ":") + std::to_string(line) + ":" + std::to_string(col) +
                             ": " + msg),
          line(line), col(col), message(msg)
    {
    }
    unsigned line;
    unsigned col;
    std::string message;
};

// Parses a .phors source. Performs name resolution but no type checking.
Scheme parse(std::string_view source);
Scheme parse_file(const std::string& path);

Type parse_type(std::string_view source);

// Pretty printer; parse(print(s)) == s.
std::string print(const Scheme& s);
std::string print_term(const Term& t);

}  // namespace phorslab
