#include "phorslab/transforms.hpp"

#include <algorithm>
#include <cstdint>

namespace phorslab {

std::string SizeCheck::str() const
{
    return "size " + std::to_string(before) + " -> " + std::to_string(after) + ", bound " + std::to_string(bound) +
           (holds() ? "" : " exceeded");
}

SizeCheck linearize_size_check(const Scheme& before, const Scheme& after)
{
    std::size_t k = std::max<std::size_t>(1, before.max_grade());
    return {before.size(), after.size(), k * before.size()};
}

SizeCheck reduce_size_check(const Scheme& before, const Scheme& after)
{
    std::size_t bound = 1;
    for (std::size_t i = 0; i < before.rules.size(); ++i) {
        if (before.size() != 0 && bound > SIZE_MAX / before.size()) {
            bound = SIZE_MAX;
            break;
        }
        bound *= before.size();
    }
    return {before.size(), after.size(), bound};
}

}  // namespace phorslab
