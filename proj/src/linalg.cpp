#include "phorslab/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace phorslab {

RatMatrix identity(std::size_t n)
{
    RatMatrix m(n, RatVector(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

RatVector mat_vec(const RatMatrix& a, const RatVector& x)
{
    RatVector out(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != x.size()) throw std::invalid_argument("dimension mismatch");
        for (std::size_t j = 0; j < x.size(); ++j)
            if (a[i][j] != 0) out[i] += a[i][j] * x[j];
    }
    return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& a, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t p = row;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[row]);
        Rat inv = 1 / a[row][c];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][c] == 0) continue;
            Rat f = a[r][c];
            for (std::size_t k = c; k < a[r].size(); ++k)
                if (a[row][k] != 0) a[r][k] -= f * a[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(RatMatrix a)
{
    if (a.empty()) return 0;
    return rref(a, a[0].size()).size();
}

std::optional<RatVector> solve(RatMatrix a, RatVector b)
{
    std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw std::invalid_argument("matrix not square");
        a[i].push_back(b[i]);
    }
    auto piv = rref(a, n);
    if (piv.size() < n) return std::nullopt;
    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
    return x;
}

std::vector<RatVector> nullspace(RatMatrix a)
{
    if (a.empty()) return {};
    std::size_t cols = a[0].size();
    auto piv = rref(a, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<RatVector> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RatVector v(cols, Rat(0));
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<LdVector> solve_ld(LdMatrix a, LdVector b, long double tiny)
{
    std::size_t n = a.size();
    long double scale = 0;
    for (const auto& r : a)
        for (auto x : r) scale = std::max(scale, std::fabs(x));
    if (n == 0) return LdVector{};
    if (scale == 0) return std::nullopt;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        if (std::fabs(a[p][c]) <= tiny * scale) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            long double f = a[r][c] / a[c][c];
            if (f == 0) continue;
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    LdVector x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

}  // namespace phorslab
