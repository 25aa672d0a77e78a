#pragma once

#include "phorslab/parser.hpp"
#include "phorslab/scheme.hpp"

#include <string>
#include <vector>

namespace phorslab::testing {

inline std::string scheme_path(const std::string& name)
{
    return std::string(PHORSLAB_SCHEMES_DIR) + "/" + name + ".phors";
}

inline Scheme load_scheme(const std::string& name)
{
    return parse_file(scheme_path(name));
}

// Bundled schemes, by the checker that accepts them.
inline const std::vector<std::string> kFinitarySchemes = {"randomwalk", "geometric", "eq3",   "chain",
                                                          "affine",     "omega",     "unit"};
inline const std::vector<std::string> kInfinitarySchemes = {"dyck"};
inline const std::vector<std::string> kOpenSchemes = {"dyck_core"};
inline const std::vector<std::string> kRejectedSchemes = {"nonalg", "nonalg_inf"};

}  // namespace phorslab::testing
