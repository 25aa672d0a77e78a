#pragma once

#include "phorslab/types.hpp"

#include <compare>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phorslab {

// A point of the relational interpretation of a type: a ground point i of
// o^n, or (multiset of argument points, result point).
class Index {
public:
    using Multiset = std::vector<std::pair<Index, unsigned>>;  // sorted, multiplicities >= 1

    Index() = default;  // ground point 1
    static Index ground(unsigned i);
    static Index arrow(Multiset uses, Index result);

    bool is_ground() const;
    unsigned point() const;
    const Multiset& uses() const;
    const Index& result() const;
    unsigned total_uses() const;

    std::string str() const;

    friend bool operator==(const Index& a, const Index& b) { return (a <=> b) == 0; }
    friend std::strong_ordering operator<=>(const Index& a, const Index& b);

private:
    struct Node;
    explicit Index(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Index::Node {
    bool arrow = false;
    unsigned point = 1;
    Multiset uses;
    Index result;
};

inline bool Index::is_ground() const { return !node_ || !node_->arrow; }

inline constexpr std::size_t kDefaultIndexCap = 100000;

class IndexCapExceeded : public std::runtime_error {
public:
    IndexCapExceeded(std::size_t needed, std::size_t cap)
        : std::runtime_error("index set of size " + (needed == SIZE_MAX ? std::string("> 2^64") : std::to_string(needed)) +
                             " exceeds the cap of " + std::to_string(cap) + " (raise --var-cap)"),
          needed(needed), cap(cap)
    {
    }
    std::size_t needed, cap;
};

// |[[ty]]|, saturating at SIZE_MAX. Throws on infinite grades.
std::size_t index_count(const Type& ty);

// Complete canonical enumeration of [[ty]].
std::vector<Index> enumerate_index(const Type& ty, std::size_t cap = kDefaultIndexCap);

// Membership of a point in [[ty]]: shape matches and multiplicities respect
// the grades.
bool index_in(const Index& i, const Type& ty);

// Membership in the interpretation of the grade-erased skeleton.
bool index_in_skeleton(const Index& i, const Type& ty);

}  // namespace phorslab
