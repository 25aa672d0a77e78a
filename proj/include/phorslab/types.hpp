#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>

namespace phorslab {

// Usage bound of an argument: a natural number or infinity.
class Grade {
public:
    constexpr Grade() = default;
    constexpr explicit Grade(unsigned k) : value_(k) {}
    static constexpr Grade inf() { return Grade(kInf); }

    constexpr bool finite() const { return value_ != kInf; }
    constexpr unsigned value() const { return value_; }
    std::string str() const { return finite() ? std::to_string(value_) : "inf"; }

    friend constexpr bool operator==(Grade, Grade) = default;
    friend constexpr auto operator<=>(Grade a, Grade b) { return a.value_ <=> b.value_; }

private:
    static constexpr unsigned kInf = 0xFFFFFFFFu;
    unsigned value_ = 0;
};

// o^n or !_k A -o R. Immutable, cheap to copy; the default value is o.
class Type {
public:
    Type() = default;
    static Type ground(unsigned width = 1);
    static Type arrow(Grade grade, Type arg, Type result);

    bool is_ground() const;
    bool is_arrow() const { return !is_ground(); }
    unsigned width() const;
    Grade grade() const;
    const Type& arg() const;
    const Type& result() const;

    // No infinite grade anywhere.
    bool finitary() const;
    // Number of leading arrows.
    unsigned arity() const;
    // Result after peeling n arrows.
    const Type& residual(unsigned n) const;
    // Largest finite grade occurring anywhere (0 if none).
    unsigned max_grade() const;
    // Erases grades: two types with the same skeleton compare equal.
    bool same_skeleton(const Type& o) const;

    std::string str() const;

    friend bool operator==(const Type& a, const Type& b);
    friend std::strong_ordering operator<=>(const Type& a, const Type& b);

private:
    struct Node;
    explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Type::Node {
    bool arrow = false;
    unsigned width = 1;
    Grade grade;
    Type arg;
    Type result;
};

// Order of the simple-type skeleton: ord(o^n) = 0, ord(A -> R) = max(ord A + 1, ord R).
inline bool Type::is_ground() const { return !node_ || !node_->arrow; }

unsigned order(const Type& t);

}  // namespace phorslab
