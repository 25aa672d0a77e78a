#pragma once

#include "phorslab/poly.hpp"
#include "phorslab/rational.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace phorslab {

// Power series in z truncated after z^N. When `polynomial()` holds the value
// is known to be exactly the stored polynomial, i.e. nothing was lost beyond
// z^N.
template <class T>
class BasicSeries {
public:
    explicit BasicSeries(unsigned degree_bound = 0) : c_(degree_bound + 1, T(0)), exact_(true) {}

    static BasicSeries constant(const T& c, unsigned n)
    {
        BasicSeries s(n);
        s.c_[0] = c;
        return s;
    }
    static BasicSeries z(unsigned n)
    {
        BasicSeries s(n);
        if (n >= 1) s.c_[1] = T(1);
        else s.exact_ = false;
        return s;
    }
    static BasicSeries from_coefficients(std::vector<T> coeffs, bool polynomial)
    {
        if (coeffs.empty()) coeffs.push_back(T(0));
        BasicSeries s(static_cast<unsigned>(coeffs.size() - 1));
        s.c_ = std::move(coeffs);
        s.exact_ = polynomial;
        return s;
    }

    unsigned degree_bound() const { return static_cast<unsigned>(c_.size() - 1); }
    bool polynomial() const { return exact_; }
    void set_polynomial(bool p) { exact_ = p; }
    const T& operator[](unsigned i) const { return c_.at(i); }
    T& coeff(unsigned i) { return c_.at(i); }
    const std::vector<T>& coefficients() const { return c_; }

    bool is_zero() const
    {
        return std::all_of(c_.begin(), c_.end(), [](const T& x) { return x == T(0); });
    }

    BasicSeries truncated(unsigned n) const
    {
        BasicSeries s(n);
        for (unsigned i = 0; i <= n && i < c_.size(); ++i) s.c_[i] = c_[i];
        s.exact_ = exact_ && (n + 1 >= c_.size() || std::all_of(c_.begin() + n + 1, c_.end(),
                                                                 [](const T& x) { return x == T(0); }));
        return s;
    }

    friend BasicSeries operator+(const BasicSeries& a, const BasicSeries& b)
    {
        unsigned n = std::min(a.degree_bound(), b.degree_bound());
        BasicSeries s(n);
        for (unsigned i = 0; i <= n; ++i) s.c_[i] = a.c_[i] + b.c_[i];
        s.exact_ = a.exact_ && b.exact_ && a.fits(n) && b.fits(n);
        return s;
    }

    friend BasicSeries operator*(const BasicSeries& a, const BasicSeries& b)
    {
        unsigned n = std::min(a.degree_bound(), b.degree_bound());
        BasicSeries s(n);
        int da = a.degree(), db = b.degree();
        for (int i = 0; i <= da && i <= static_cast<int>(n); ++i) {
            if (a.c_[i] == T(0)) continue;
            for (int j = 0; j <= db && i + j <= static_cast<int>(n); ++j) {
                if (b.c_[j] == T(0)) continue;
                s.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
        s.exact_ = a.exact_ && b.exact_ && a.fits(n) && b.fits(n) && da + db <= static_cast<int>(n);
        if (da < 0 || db < 0) s.exact_ = a.exact_ && b.exact_;
        return s;
    }

    BasicSeries scaled(const T& k) const
    {
        BasicSeries s = *this;
        for (auto& x : s.c_) x *= k;
        return s;
    }

    // d/dz; the degree bound drops by one (a constant series stays at bound 0).
    BasicSeries derivative() const
    {
        unsigned n = degree_bound();
        BasicSeries s(n == 0 ? 0 : n - 1);
        for (unsigned i = 1; i <= n; ++i) s.c_[i - 1] = c_[i] * T(i);
        s.exact_ = exact_;
        return s;
    }

    // Highest index with a nonzero coefficient, -1 for the zero series.
    int degree() const
    {
        for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i)
            if (c_[i] != T(0)) return i;
        return -1;
    }

    friend bool operator==(const BasicSeries& a, const BasicSeries& b) { return a.c_ == b.c_; }

private:
    bool fits(unsigned n) const { return degree() <= static_cast<int>(n); }

    std::vector<T> c_;
    bool exact_;
};

using TruncSeries = BasicSeries<Rat>;
using FloatSeries = BasicSeries<long double>;

// outer(inner(z)). Requires inner(0) = 0 unless outer is an exact polynomial.
template <class T>
BasicSeries<T> series_compose(const BasicSeries<T>& outer, const BasicSeries<T>& inner)
{
    if (inner[0] != T(0) && !outer.polynomial())
        throw std::invalid_argument(
            "series_compose: inner series has a nonzero constant term and the outer series is a truncation");
    unsigned n = inner.degree_bound();
    if (inner[0] == T(0)) n = std::min(n, outer.degree_bound());
    BasicSeries<T> result(n);
    BasicSeries<T> power = BasicSeries<T>::constant(T(1), n);
    power.set_polynomial(true);
    int top = outer.degree();
    for (int k = 0; k <= top; ++k) {
        if (outer[k] != T(0)) result = result + power.scaled(outer[k]);
        if (k < top) power = power * inner.truncated(n);
    }
    result.set_polynomial(outer.polynomial() && inner.polynomial() &&
                          static_cast<long>(std::max(top, 0)) * std::max(inner.degree(), 0) <=
                              static_cast<long>(n));
    return result;
}

template <class T>
std::string render_series(const BasicSeries<T>& s)
{
    std::string out;
    for (unsigned i = 0; i <= s.degree_bound(); ++i) {
        if (s[i] == T(0)) continue;
        if (!out.empty()) out += " + ";
        std::string c;
        if constexpr (std::is_same_v<T, Rat>)
            c = to_string(s[i]);
        else
            c = std::to_string(static_cast<double>(s[i]));
        if (i == 0)
            out += c;
        else
            out += (c == "1" ? std::string() : c + "*") + (i == 1 ? "z" : "z^" + std::to_string(i));
    }
    if (out.empty()) out = "0";
    if (!s.polynomial()) out += " + O(z^" + std::to_string(s.degree_bound() + 1) + ")";
    return out;
}

TruncSeries eval_series(const Poly& p, const std::map<VarId, TruncSeries>& assignment, unsigned n);

}  // namespace phorslab
