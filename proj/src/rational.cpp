#include "phorslab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace phorslab {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace

Rat parse_rat(std::string_view text)
{
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        bool neg = !num.empty() && num.front() == '-';
        if (neg) num.remove_prefix(1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        mpz_class n{std::string(num)}, d{std::string(den)};
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        Rat q(neg ? mpz_class(-n) : n, d);
        q.canonicalize();
        return q;
    }
    auto dot = text.find('.');
    bool neg = !text.empty() && text.front() == '-';
    std::string_view body = neg ? text.substr(1) : text;
    if (dot == std::string_view::npos) {
        if (!all_digits(body)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
        Rat q{mpz_class(std::string(body))};
        return neg ? Rat(-q) : q;
    }
    dot = body.find('.');
    auto ip = body.substr(0, dot);
    auto fp = body.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || !all_digits(fp))
        throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    mpz_class whole = ip.empty() ? mpz_class(0) : mpz_class(std::string(ip));
    mpz_class frac{std::string(fp)};
    Rat q(whole * scale + frac, scale);
    q.canonicalize();
    return neg ? Rat(-q) : q;
}

std::string to_string(const Rat& q)
{
    return q.get_str();
}

Rat make_rat(long num, long den)
{
    Rat q(num, den);
    q.canonicalize();
    return q;
}

long double to_long_double(const Rat& q)
{
    if (q == 0) return 0.0L;
    bool neg = q < 0;
    mpz_class n = abs(q.get_num());
    const mpz_class& d = q.get_den();
    long shift = 70 - (static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) -
                       static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)));
    mpz_class quo = shift >= 0 ? mpz_class((n << shift) / d) : mpz_class(n / (d << -shift));
    long bits = static_cast<long>(mpz_sizeinbase(quo.get_mpz_t(), 2));
    long drop = bits > 64 ? bits - 64 : 0;
    mpz_class top = quo >> drop;
    unsigned long long t = 0;
    mpz_export(&t, nullptr, -1, sizeof(t), 0, 0, top.get_mpz_t());
    long double r = std::ldexp(static_cast<long double>(t), static_cast<int>(drop - shift));
    return neg ? -r : r;
}

Rat from_long_double(long double x)
{
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    if (x == 0) return Rat(0);
    int exp = 0;
    long double m = std::frexp(x, &exp);  // x = m * 2^exp, 0.5 <= |m| < 1
    // 64 mantissa bits of long double on x86.
    long double scaled = std::ldexp(m, 64);
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    unsigned long long bits = static_cast<unsigned long long>(scaled);
    mpz_class mant;
    mpz_import(mant.get_mpz_t(), 1, 1, sizeof(bits), 0, 0, &bits);
    if (neg) mant = -mant;
    Rat q(mant);
    int e = exp - 64;
    if (e >= 0)
        q *= Rat(mpz_class(1) << e);
    else
        q /= Rat(mpz_class(1) << -e);
    q.canonicalize();
    return q;
}

Rat round_down_dyadic(const Rat& q, unsigned bits)
{
    mpz_class scaled = q.get_num() << bits;
    mpz_class k;
    mpz_fdiv_q(k.get_mpz_t(), scaled.get_mpz_t(), q.get_den().get_mpz_t());
    Rat r(k, mpz_class(1) << bits);
    r.canonicalize();
    return r;
}

Rat round_up_dyadic(const Rat& q, unsigned bits)
{
    mpz_class scaled = q.get_num() << bits;
    mpz_class k;
    mpz_cdiv_q(k.get_mpz_t(), scaled.get_mpz_t(), q.get_den().get_mpz_t());
    Rat r(k, mpz_class(1) << bits);
    r.canonicalize();
    return r;
}

Rat rationalize(long double x, long double tol, std::uint64_t max_den)
{
    if (x < 0) return Rat(-rationalize(-x, tol, max_den));
    Rat exact = from_long_double(x);
    // Convergents h/k of the exact binary value.
    mpz_class h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
    Rat rest = exact;
    Rat best = Rat(mpz_class(0));
    for (int it = 0; it < 96; ++it) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num().get_mpz_t(), rest.get_den().get_mpz_t());
        mpz_class h = a * h_prev + h_prev2;
        mpz_class k = a * k_prev + k_prev2;
        if (k > mpz_class(std::to_string(max_den))) break;
        best = Rat(h, k);
        best.canonicalize();
        long double err = std::fabs(to_long_double(best) - x);
        if (err <= tol) break;
        Rat frac = rest - Rat(a);
        if (frac == 0) break;
        rest = 1 / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
    }
    return best;
}

}  // namespace phorslab
