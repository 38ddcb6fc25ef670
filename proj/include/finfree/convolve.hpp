#pragma once

#include <stdexcept>
#include <vector>

#include "finfree/cumulants.hpp"
#include "finfree/poly.hpp"
#include "finfree/series.hpp"

namespace finfree {

namespace detail {

template <class S>
void require_same_degree(const Poly<S>& p, const Poly<S>& q)
{
    require_monic(p, "convolution");
    require_monic(q, "convolution");
    if (p.degree() != q.degree()) throw DegreeMismatch(p.degree(), q.degree());
}

template <class S>
std::vector<S> factorials(const S& base, int count)
{
    // f[m] = (base+1)(base+2)...(base+m); with base 0 these are the factorials
    std::vector<S> f(static_cast<std::size_t>(count) + 1);
    f[0] = S(1);
    for (int m = 1; m <= count; ++m) f[m] = f[m - 1] * (base + S(m));
    return f;
}

template <class S>
S constant_term(const Poly<S>& p)
{
    return p.is_zero() ? S(0) : p.coeffs().back();
}

inline bool is_integer(const Rational& n)
{
    return denominator(n) == 1;
}

inline bool is_integer(const BigReal& n)
{
    return boost::multiprecision::trunc(n) == n;
}

} // namespace detail

// Square convolution from the coefficient formula
// c_k = (-1)^k sum_{i+j=k} (d-i)!(d-j)! / (d!(d-k)!) a_i b_j.
template <class S>
Poly<S> boxplus(const Poly<S>& p, const Poly<S>& q)
{
    detail::require_same_degree(p, q);
    WorkingPrecision wp(p, q);
    const int d = p.degree();
    const std::vector<S> fact = detail::factorials(S(0), d);
    std::vector<S> c(static_cast<std::size_t>(d) + 1, S(0));
    for (int k = 0; k <= d; ++k) {
        S acc(0);
        for (int i = 0; i <= k; ++i) {
            const int j = k - i;
            acc += fact[d - i] * fact[d - j] / (fact[d] * fact[d - k]) * p.a(i) * q.a(j);
        }
        c[k] = k % 2 ? S(-acc) : acc;
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// Square convolution as p^(D) q^(D) x^d with unnormalized symbols.
template <class S>
Poly<S> boxplus_via_operators(const Poly<S>& p, const Poly<S>& q)
{
    detail::require_same_degree(p, q);
    WorkingPrecision wp(p, q);
    const int d = p.degree();
    return apply_operator_symbol(to_operator_symbol(p, false) * to_operator_symbol(q, false), d, false);
}

// k-fold square convolution power via one symbol exponentiation.
template <class S>
Poly<S> boxplus_power(const Poly<S>& p, unsigned k)
{
    require_monic(p, "boxplus_power");
    if (k == 0) throw DomainError("boxplus_power: k must be positive");
    WorkingPrecision wp(p);
    return apply_operator_symbol(pow_series(to_operator_symbol(p, false), k), p.degree(), false);
}

// Rectangular convolution from the integer-n coefficient formula, factorials of n+d-i
// expressed through falling factorials. Requires integer n.
template <class S>
Poly<S> rect_boxplus_coefficients(const Poly<S>& p, const Poly<S>& q, const S& n)
{
    detail::require_same_degree(p, q);
    require_n(n);
    if (!detail::is_integer(n)) throw DomainError("rect_boxplus_coefficients: n must be an integer");
    WorkingPrecision wp(p, q, n);
    const int d = p.degree();
    const std::vector<S> fact = detail::factorials(S(0), d);
    // shifted[m] = (n+m)! / n!
    const std::vector<S> shifted = detail::factorials(n, d);
    std::vector<S> c(static_cast<std::size_t>(d) + 1, S(0));
    for (int k = 0; k <= d; ++k) {
        S acc(0);
        for (int i = 0; i <= k; ++i) {
            const int j = k - i;
            S w = fact[d - i] * fact[d - j] / (fact[d] * fact[d - k]);
            w *= shifted[d - i] * shifted[d - j] / (shifted[d] * shifted[d - k]);
            acc += w * p.a(i) * q.a(j);
        }
        c[k] = k % 2 ? S(-acc) : acc;
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// Rectangular convolution for real n > -1:
// (1 / (d! (d+n)_d)) sum_k [M_n^{d-k} q](0) M_n^k p.
template <class S>
Poly<S> rect_boxplus(const Poly<S>& p, const Poly<S>& q, const S& n)
{
    detail::require_same_degree(p, q);
    require_n(n);
    WorkingPrecision wp(p, q, n);
    const int d = p.degree();
    std::vector<S> q_at_zero(static_cast<std::size_t>(d) + 1);  // [M^{d-k} q](0) stored at k
    Poly<S> it = q;
    for (int m = 0; m <= d; ++m) {
        q_at_zero[d - m] = detail::constant_term(it);
        if (m < d) it = apply_Mn(it, n);
    }
    std::vector<S> c(static_cast<std::size_t>(d) + 1, S(0));
    Poly<S> mp = p;
    for (int k = 0; k <= d; ++k) {
        if (q_at_zero[k] != 0)
            for (int i = 0; i <= d - k; ++i) c[k + i] += q_at_zero[k] * mp[i];
        if (k < d) mp = apply_Mn(mp, n);
    }
    S norm = falling(S(d), d) * falling(S(n + S(d)), d);
    for (auto& v : c) v /= norm;
    Poly<S> r(std::move(wp.finish(c)));
#ifndef NDEBUG
    if (field_traits<S>::exact && detail::is_integer(n) && r != rect_boxplus_coefficients(p, q, n))
        throw std::logic_error("rect_boxplus: operator and coefficient formulas disagree");
#endif
    return r;
}

// Rectangular convolution as P(M_n) Q(M_n) x^d with unnormalized symbols.
template <class S>
Poly<S> rect_boxplus_via_operators(const Poly<S>& p, const Poly<S>& q, const S& n)
{
    detail::require_same_degree(p, q);
    require_n(n);
    WorkingPrecision wp(p, q, n);
    const int d = p.degree();
    return apply_rect_operator_symbol(to_rect_operator_symbol(p, n, false) * to_rect_operator_symbol(q, n, false),
                                      d, n, false);
}

} // namespace finfree
