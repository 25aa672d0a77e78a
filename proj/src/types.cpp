#include "phorslab/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace phorslab {

Type Type::ground(unsigned width)
{
    if (width == 0) throw std::invalid_argument("ground type width must be >= 1");
    if (width == 1) return Type();
    auto n = std::make_shared<Node>();
    n->width = width;
    return Type(std::move(n));
}

Type Type::arrow(Grade grade, Type arg, Type result)
{
    auto n = std::make_shared<Node>();
    n->arrow = true;
    n->grade = grade;
    n->arg = std::move(arg);
    n->result = std::move(result);
    return Type(std::move(n));
}

unsigned Type::width() const
{
    if (is_arrow()) throw std::logic_error("width of an arrow type");
    return node_ ? node_->width : 1;
}

Grade Type::grade() const
{
    if (!is_arrow()) throw std::logic_error("grade of a ground type");
    return node_->grade;
}

const Type& Type::arg() const
{
    if (!is_arrow()) throw std::logic_error("argument of a ground type");
    return node_->arg;
}

const Type& Type::result() const
{
    if (!is_arrow()) throw std::logic_error("result of a ground type");
    return node_->result;
}

bool Type::finitary() const
{
    if (is_ground()) return true;
    return grade().finite() && arg().finitary() && result().finitary();
}

unsigned Type::arity() const
{
    return is_ground() ? 0 : 1 + result().arity();
}

const Type& Type::residual(unsigned n) const
{
    const Type* t = this;
    for (unsigned i = 0; i < n; ++i) t = &t->result();
    return *t;
}

unsigned Type::max_grade() const
{
    if (is_ground()) return 0;
    unsigned g = grade().finite() ? grade().value() : 0;
    return std::max({g, arg().max_grade(), result().max_grade()});
}

bool Type::same_skeleton(const Type& o) const
{
    if (is_ground() || o.is_ground()) return is_ground() && o.is_ground() && width() == o.width();
    return arg().same_skeleton(o.arg()) && result().same_skeleton(o.result());
}

std::string Type::str() const
{
    if (is_ground()) return width() == 1 ? "o" : "o^" + std::to_string(width());
    std::string a = arg().str();
    if (arg().is_arrow()) a = "(" + a + ")";
    return "!" + grade().str() + " " + a + " -o " + result().str();
}

bool operator==(const Type& a, const Type& b)
{
    if (a.node_ == b.node_) return true;
    if (a.is_ground() != b.is_ground()) return false;
    if (a.is_ground()) return a.width() == b.width();
    return a.grade() == b.grade() && a.arg() == b.arg() && a.result() == b.result();
}

std::strong_ordering operator<=>(const Type& a, const Type& b)
{
    if (a.is_ground() != b.is_ground()) return a.is_ground() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_ground()) return a.width() <=> b.width();
    if (auto c = a.grade() <=> b.grade(); c != 0) return c;
    if (auto c = a.arg() <=> b.arg(); c != 0) return c;
    return a.result() <=> b.result();
}

unsigned order(const Type& t)
{
    if (t.is_ground()) return 0;
    return std::max(order(t.arg()) + 1, order(t.result()));
}

}  // namespace phorslab
