#pragma once

#include <vector>

#include "finfree/poly.hpp"

namespace finfree {

// Formal power series kept modulo s^(order+1); coefficient k multiplies s^k.
template <class S>
class Series {
public:
    using scalar_type = S;

    Series() = default;
    explicit Series(int order) : c_(static_cast<std::size_t>(order) + 1, S(0))
    {
        if (order < 0) throw DomainError("series order must be >= 0");
    }
    explicit Series(std::vector<S> coeffs) : c_(std::move(coeffs))
    {
        if (c_.empty()) throw DomainError("series needs at least one coefficient");
    }

    static Series one(int order)
    {
        Series s(order);
        s.c_[0] = S(1);
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    S& operator[](std::size_t k) { return c_[k]; }
    const S& operator[](std::size_t k) const { return c_[k]; }
    const std::vector<S>& coeffs() const { return c_; }
    std::vector<S>& data() { return c_; }

    friend bool operator==(const Series& a, const Series& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

private:
    std::vector<S> c_;
};

template <class S>
unsigned min_precision(const Series<S>& f)
{
    unsigned m = 0;
    for (const auto& c : f.coeffs()) {
        unsigned b = min_precision(c);
        if (b && (!m || b < m)) m = b;
    }
    return m;
}

// Keep coefficients 0..order (pads with zeros when extending).
template <class S>
Series<S> truncate(const Series<S>& f, int order)
{
    Series<S> g(order);
    for (int k = 0; k <= order && k <= f.order(); ++k) g[k] = f[k];
    return g;
}

template <class S>
Series<S> operator+(const Series<S>& f, const Series<S>& g)
{
    WorkingPrecision wp(f, g);
    Series<S> h(std::min(f.order(), g.order()));
    for (int k = 0; k <= h.order(); ++k) h[k] = f[k] + g[k];
    wp.finish(h.data());
    return h;
}

template <class S>
Series<S> operator-(const Series<S>& f, const Series<S>& g)
{
    WorkingPrecision wp(f, g);
    Series<S> h(std::min(f.order(), g.order()));
    for (int k = 0; k <= h.order(); ++k) h[k] = f[k] - g[k];
    wp.finish(h.data());
    return h;
}

template <class S>
Series<S> operator*(const S& a, const Series<S>& f)
{
    WorkingPrecision wp(f, a);
    Series<S> h(f.order());
    for (int k = 0; k <= f.order(); ++k) h[k] = a * f[k];
    wp.finish(h.data());
    return h;
}

template <class S>
Series<S> operator*(const Series<S>& f, const Series<S>& g)
{
    WorkingPrecision wp(f, g);
    const int m = std::min(f.order(), g.order());
    Series<S> h(m);
    for (int i = 0; i <= m; ++i) {
        if (f[i] == 0) continue;
        for (int j = 0; i + j <= m; ++j) h[i + j] += f[i] * g[j];
    }
    wp.finish(h.data());
    return h;
}

// 1/f, requires f_0 != 0.
template <class S>
Series<S> inverse(const Series<S>& f)
{
    if (f[0] == 0) throw DomainError("series inverse: zero constant term");
    WorkingPrecision wp(f);
    Series<S> h(f.order());
    h[0] = S(1) / f[0];
    for (int k = 1; k <= f.order(); ++k) {
        S acc(0);
        for (int i = 1; i <= k; ++i) acc += f[i] * h[k - i];
        h[k] = -acc / f[0];
    }
    wp.finish(h.data());
    return h;
}

template <class S>
Series<S> operator/(const Series<S>& f, const Series<S>& g)
{
    return f * inverse(g);
}

// Coefficient-wise derivative; the result has order one less.
template <class S>
Series<S> derivative(const Series<S>& f)
{
    WorkingPrecision wp(f);
    if (f.order() == 0) return Series<S>(0);
    Series<S> h(f.order() - 1);
    for (int k = 1; k <= f.order(); ++k) h[k - 1] = f[k] * S(k);
    wp.finish(h.data());
    return h;
}

// f(a s): coefficient k scaled by a^k.
template <class S>
Series<S> scale_argument(const Series<S>& f, const S& a)
{
    WorkingPrecision wp(f, a);
    Series<S> h(f.order());
    S p(1);
    for (int k = 0; k <= f.order(); ++k) {
        h[k] = f[k] * p;
        p *= a;
    }
    wp.finish(h.data());
    return h;
}

// s f(s), keeping the order.
template <class S>
Series<S> shift_up(const Series<S>& f)
{
    Series<S> h(f.order());
    for (int k = 1; k <= f.order(); ++k) h[k] = f[k - 1];
    return h;
}

// exp(g) for g_0 = 0, via n e_n = sum_k k g_k e_{n-k}.
template <class S>
Series<S> exp_series(const Series<S>& g)
{
    if (g[0] != 0) throw DomainError("series exp: constant term must be 0");
    WorkingPrecision wp(g);
    Series<S> e(g.order());
    e[0] = S(1);
    for (int n = 1; n <= g.order(); ++n) {
        S acc(0);
        for (int k = 1; k <= n; ++k) {
            if (g[k] == 0) continue;
            acc += S(k) * g[k] * e[n - k];
        }
        e[n] = acc / S(n);
    }
    wp.finish(e.data());
    return e;
}

// log(f) for f_0 = 1, via n l_n = n f_n - sum_{k<n} k l_k f_{n-k}.
template <class S>
Series<S> log_series(const Series<S>& f)
{
    if (f[0] != 1) throw DomainError("series log: constant term must be 1");
    WorkingPrecision wp(f);
    Series<S> l(f.order());
    for (int n = 1; n <= f.order(); ++n) {
        S acc = S(n) * f[n];
        for (int k = 1; k < n; ++k) {
            if (l[k] == 0 || f[n - k] == 0) continue;
            acc -= S(k) * l[k] * f[n - k];
        }
        l[n] = acc / S(n);
    }
    wp.finish(l.data());
    return l;
}

// f^k for a positive integer k, by binary powering.
template <class S>
Series<S> pow_series(const Series<S>& f, unsigned k)
{
    Series<S> result = Series<S>::one(f.order());
    Series<S> base = f;
    while (k) {
        if (k & 1u) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

// d/ds log f = f'/f for f_0 = 1. The output has order one less than f, so coefficients
// 0..m-1 use only f_0..f_m.
template <class S>
Series<S> log_derivative(const Series<S>& f)
{
    if (f[0] != 1) throw DomainError("log_derivative: constant term must be 1");
    if (f.order() == 0) return Series<S>(0);
    return derivative(f) * truncate(inverse(f), f.order() - 1);
}

// Horner evaluation of the truncated series at a real point, carried out at 256 bits.
template <class S>
double evaluate_at(const Series<S>& f, double z)
{
    PrecisionScope scope(default_precision_bits);
    BigReal v(0), x(z);
    for (int k = f.order(); k >= 0; --k) v = v * x + BigReal(f[k]);
    return to_double(v);
}

} // namespace finfree
