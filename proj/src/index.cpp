#include "phorslab/index.hpp"

#include <algorithm>

namespace phorslab {

Index Index::ground(unsigned i)
{
    if (i == 0) throw std::invalid_argument("ground points start at 1");
    if (i == 1) return Index();
    auto n = std::make_shared<Node>();
    n->point = i;
    return Index(std::move(n));
}

Index Index::arrow(Multiset uses, Index result)
{
    std::sort(uses.begin(), uses.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Multiset merged;
    for (auto& [i, m] : uses) {
        if (m == 0) continue;
        if (!merged.empty() && merged.back().first == i)
            merged.back().second += m;
        else
            merged.emplace_back(std::move(i), m);
    }
    auto n = std::make_shared<Node>();
    n->arrow = true;
    n->uses = std::move(merged);
    n->result = std::move(result);
    return Index(std::move(n));
}

unsigned Index::point() const
{
    if (!is_ground()) throw std::logic_error("point of an arrow index");
    return node_ ? node_->point : 1;
}

const Index::Multiset& Index::uses() const
{
    if (is_ground()) throw std::logic_error("uses of a ground index");
    return node_->uses;
}

const Index& Index::result() const
{
    if (is_ground()) throw std::logic_error("result of a ground index");
    return node_->result;
}

unsigned Index::total_uses() const
{
    unsigned t = 0;
    for (const auto& u : uses()) t += u.second;
    return t;
}

std::string Index::str() const
{
    if (is_ground()) return point() == 1 ? "*" : "*" + std::to_string(point());
    std::string out = "[";
    bool first = true;
    for (const auto& [i, m] : uses()) {
        if (!first) out += ",";
        first = false;
        std::string s = i.str();
        if (!i.is_ground()) s = "(" + s + ")";
        out += s;
        if (m > 1) out += "^" + std::to_string(m);
    }
    out += "]>" + result().str();
    return out;
}

std::strong_ordering operator<=>(const Index& a, const Index& b)
{
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_ground() != b.is_ground())
        return a.is_ground() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_ground()) return a.point() <=> b.point();
    const auto& ua = a.uses();
    const auto& ub = b.uses();
    for (std::size_t k = 0; k < ua.size() && k < ub.size(); ++k) {
        if (auto c = ua[k].first <=> ub[k].first; c != 0) return c;
        if (auto c = ua[k].second <=> ub[k].second; c != 0) return c;
    }
    if (auto c = ua.size() <=> ub.size(); c != 0) return c;
    return a.result() <=> b.result();
}

namespace {

std::size_t sat_mul(std::size_t a, std::size_t b)
{
    if (a != 0 && b > SIZE_MAX / a) return SIZE_MAX;
    return a * b;
}

std::size_t sat_pow(std::size_t base, std::size_t e)
{
    std::size_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        r = sat_mul(r, base);
        if (r == SIZE_MAX) break;
    }
    return r;
}

}  // namespace

std::size_t index_count(const Type& ty)
{
    if (ty.is_ground()) return ty.width();
    if (!ty.grade().finite()) throw std::invalid_argument("index set of a type with an infinite grade: " + ty.str());
    std::size_t a = index_count(ty.arg());
    std::size_t r = index_count(ty.result());
    if (a == SIZE_MAX) return SIZE_MAX;
    return sat_mul(sat_pow(std::size_t(ty.grade().value()) + 1, a), r);
}

std::vector<Index> enumerate_index(const Type& ty, std::size_t cap)
{
    std::size_t n = index_count(ty);
    if (n > cap) throw IndexCapExceeded(n, cap);
    std::vector<Index> out;
    out.reserve(n);
    if (ty.is_ground()) {
        for (unsigned i = 1; i <= ty.width(); ++i) out.push_back(Index::ground(i));
        return out;
    }
    std::vector<Index> args = enumerate_index(ty.arg(), cap);
    std::vector<Index> results = enumerate_index(ty.result(), cap);
    unsigned k = ty.grade().value();
    std::vector<unsigned> mult(args.size(), 0);
    while (true) {
        Index::Multiset ms;
        for (std::size_t i = 0; i < args.size(); ++i)
            if (mult[i]) ms.emplace_back(args[i], mult[i]);
        for (const auto& r : results) out.push_back(Index::arrow(ms, r));
        // Mixed-radix increment, last position fastest.
        std::size_t pos = args.size();
        while (pos > 0) {
            --pos;
            if (mult[pos] < k) {
                ++mult[pos];
                break;
            }
            mult[pos] = 0;
            if (pos == 0) {
                pos = SIZE_MAX;
                break;
            }
        }
        if (args.empty() || pos == SIZE_MAX) break;
    }
    return out;
}

bool index_in(const Index& i, const Type& ty)
{
    if (ty.is_ground()) return i.is_ground() && i.point() <= ty.width();
    if (i.is_ground()) return false;
    Grade g = ty.grade();
    for (const auto& [a, m] : i.uses()) {
        if (g.finite() && m > g.value()) return false;
        if (!index_in(a, ty.arg())) return false;
    }
    return index_in(i.result(), ty.result());
}

bool index_in_skeleton(const Index& i, const Type& ty)
{
    if (ty.is_ground()) return i.is_ground() && i.point() <= ty.width();
    if (i.is_ground()) return false;
    for (const auto& [a, m] : i.uses())
        if (!index_in_skeleton(a, ty.arg())) return false;
    return index_in_skeleton(i.result(), ty.result());
}

}  // namespace phorslab
