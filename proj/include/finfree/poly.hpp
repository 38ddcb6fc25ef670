#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "finfree/scalar.hpp"

namespace finfree {

// Dense polynomial with descending coefficients: p(x) = sum_k c_k x^(d-k).
// The zero polynomial has no coefficients; leading zeros are always stripped.
template <class S>
class Poly {
public:
    using scalar_type = S;

    Poly() = default;
    explicit Poly(std::vector<S> coeffs) : c_(std::move(coeffs)) { strip(); }

    static Poly monomial(int d)
    {
        std::vector<S> c(static_cast<std::size_t>(d) + 1, S(0));
        c[0] = S(1);
        return Poly(std::move(c));
    }
    static Poly constant(const S& v) { return Poly(std::vector<S>{v}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_[0] == 1; }

    const S& operator[](std::size_t k) const { return c_[k]; }
    // Alternating accessor a_k = (-1)^k c_k.
    S a(std::size_t k) const { return k % 2 ? S(-c_[k]) : c_[k]; }
    const std::vector<S>& coeffs() const { return c_; }

    friend bool operator==(const Poly& p, const Poly& q) { return p.c_ == q.c_; }
    friend bool operator!=(const Poly& p, const Poly& q) { return !(p == q); }

private:
    void strip()
    {
        std::size_t z = 0;
        while (z < c_.size() && c_[z] == 0) ++z;
        if (z) c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(z));
    }

    std::vector<S> c_;
};

using RationalPoly = Poly<Rational>;
using RealPoly = Poly<BigReal>;

inline unsigned min_precision(const Rational&) { return 0; }
inline unsigned min_precision(const BigReal& x) { return precision_of(x); }
inline unsigned min_precision(long) { return 0; }
inline unsigned min_precision(int) { return 0; }

template <class S>
unsigned min_precision(const std::vector<S>& v)
{
    unsigned m = 0;
    for (const auto& c : v) {
        unsigned b = min_precision(c);
        if (b && (!m || b < m)) m = b;
    }
    return m;
}

template <class S>
unsigned min_precision(const Poly<S>& p)
{
    unsigned m = 0;
    for (const auto& c : p.coeffs()) {
        unsigned b = min_precision(c);
        if (b && (!m || b < m)) m = b;
    }
    return m;
}

// Opens a precision scope at the smallest precision among the BigReal arguments. Boost
// evaluates mixed expressions at the larger operand precision, so results are passed through
// finish() to round them to the smaller one. No-op for exact arguments.
class WorkingPrecision {
public:
    template <class... T>
    explicit WorkingPrecision(const T&... xs)
    {
        unsigned m = 0;
        (combine(m, min_precision(xs)), ...);
        if (m) scope_.emplace(m);
    }

    unsigned bits() const { return scope_ ? scope_->bits() : 0; }

    Rational& finish(Rational& x) const { return x; }
    BigReal& finish(BigReal& x) const
    {
        if (scope_ && precision_of(x) != scope_->bits()) set_precision(x, scope_->bits());
        return x;
    }
    template <class S>
    std::vector<S>& finish(std::vector<S>& v) const
    {
        for (auto& x : v) finish(x);
        return v;
    }

private:
    static void combine(unsigned& m, unsigned b)
    {
        if (b && (!m || b < m)) m = b;
    }
    std::optional<PrecisionScope> scope_;
};

template <class S>
void require_monic(const Poly<S>& p, const char* what)
{
    if (!p.is_monic()) throw DomainError(std::string(what) + ": polynomial must be monic");
}

template <class S>
void require_n(const S& n)
{
    if (!(n > -1)) throw DomainError("index n must satisfy n > -1");
}

template <class S>
Poly<S> operator+(const Poly<S>& p, const Poly<S>& q)
{
    WorkingPrecision wp(p, q);
    const auto& a = p.degree() >= q.degree() ? p : q;
    const auto& b = p.degree() >= q.degree() ? q : p;
    std::vector<S> c = a.coeffs();
    std::size_t off = c.size() - b.coeffs().size();
    for (std::size_t k = 0; k < b.coeffs().size(); ++k) c[off + k] += b[k];
    return Poly<S>(std::move(wp.finish(c)));
}

template <class S>
Poly<S> operator*(const S& s, const Poly<S>& p)
{
    WorkingPrecision wp(p, s);
    std::vector<S> c = p.coeffs();
    for (auto& v : c) v *= s;
    return Poly<S>(std::move(wp.finish(c)));
}

template <class S>
Poly<S> operator-(const Poly<S>& p, const Poly<S>& q)
{
    return p + S(-1) * q;
}

template <class S>
Poly<S> operator*(const Poly<S>& p, const Poly<S>& q)
{
    if (p.is_zero() || q.is_zero()) return Poly<S>();
    WorkingPrecision wp(p, q);
    std::vector<S> c(p.coeffs().size() + q.coeffs().size() - 1, S(0));
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        for (std::size_t j = 0; j < q.coeffs().size(); ++j) c[i + j] += p[i] * q[j];
    return Poly<S>(std::move(wp.finish(c)));
}

template <class S>
Poly<S> from_roots(const std::vector<S>& roots)
{
    WorkingPrecision wp(roots);
    std::vector<S> c{S(1)};
    for (const auto& r : roots) {
        c.push_back(S(0));
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] -= r * c[k - 1];
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// Divide by the leading coefficient.
template <class S>
Poly<S> monic(const Poly<S>& p)
{
    if (p.is_zero()) throw DomainError("monic: zero polynomial");
    WorkingPrecision wp(p);
    std::vector<S> c = p.coeffs();
    S lead = c[0];
    for (auto& v : c) v /= lead;
    return Poly<S>(std::move(wp.finish(c)));
}

template <class S>
Poly<S> differentiate(const Poly<S>& p)
{
    if (p.degree() <= 0) return Poly<S>();
    WorkingPrecision wp(p);
    const int d = p.degree();
    std::vector<S> c(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) c[k] = p[k] * S(d - k);
    return Poly<S>(std::move(wp.finish(c)));
}

// (l!/d!) D^(d-l) p, monic of degree l.
template <class S>
Poly<S> normalized_derivative(const Poly<S>& p, int ell)
{
    require_monic(p, "normalized_derivative");
    const int d = p.degree();
    if (ell < 0 || ell > d) throw DomainError("normalized_derivative: need 0 <= l <= d");
    WorkingPrecision wp(p);
    // c_k -> c_k (l)_k / (d)_k, built incrementally in k.
    std::vector<S> c(static_cast<std::size_t>(ell) + 1);
    S ratio(1);
    for (int k = 0; k <= ell; ++k) {
        c[k] = p[k] * ratio;
        if (k == ell) break;
        ratio *= S(ell - k);
        ratio /= S(d - k);
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// M_n p = x p'' + (n+1) p'.
template <class S>
Poly<S> apply_Mn(const Poly<S>& p, const S& n)
{
    require_n(n);
    if (p.degree() <= 0) return Poly<S>();
    WorkingPrecision wp(p, n);
    const int d = p.degree();
    std::vector<S> c(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        S m(d - k);
        c[k] = p[k] * m * (m + n);
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// p_j = M_n^j p / ((d)_j (n+d)_j), monic of degree d-j.
template <class S>
Poly<S> apply_Mn_power_normalized(const Poly<S>& p, const S& n, int j)
{
    require_monic(p, "apply_Mn_power_normalized");
    require_n(n);
    const int d = p.degree();
    if (j < 0 || j > d) throw DomainError("apply_Mn_power_normalized: need 0 <= j <= d");
    WorkingPrecision wp(p, n);
    // a_k^{(j)} / ((d-j)_k (n+d-j)_k) = a_k / ((d)_k (n+d)_k)
    const int ell = d - j;
    std::vector<S> c(static_cast<std::size_t>(ell) + 1);
    S ratio(1);
    const S nd = n + S(d);
    for (int k = 0; k <= ell; ++k) {
        c[k] = p[k] * ratio;
        if (k == ell) break;
        ratio *= S(ell - k) * (nd - S(j + k));
        ratio /= S(d - k) * (nd - S(k));
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// Roots multiplied by alpha: c_k -> alpha^k c_k.
template <class S>
Poly<S> dilate(const Poly<S>& p, const S& alpha)
{
    if (alpha == 0) throw DomainError("dilate: alpha must be nonzero");
    WorkingPrecision wp(p, alpha);
    std::vector<S> c = p.coeffs();
    S s(1);
    for (auto& v : c) {
        v *= s;
        s *= alpha;
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// z^d p(1/z): the coefficient list reversed.
template <class S>
Poly<S> reverse(const Poly<S>& p)
{
    std::vector<S> c(p.coeffs().rbegin(), p.coeffs().rend());
    return Poly<S>(std::move(c));
}

// p(x^2).
template <class S>
Poly<S> square_lift(const Poly<S>& p)
{
    if (p.is_zero()) return p;
    WorkingPrecision wp(p);
    std::vector<S> c(2 * p.coeffs().size() - 1, S(0));
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) c[2 * k] = p[k];
    return Poly<S>(std::move(wp.finish(c)));
}

template <class S>
S evaluate(const Poly<S>& p, const S& z)
{
    WorkingPrecision wp(p, z);
    S v(0);
    for (const auto& c : p.coeffs()) v = v * z + c;
    return wp.finish(v);
}

// Complex Horner evaluation; returns (re, im).
template <class S>
std::pair<S, S> evaluate(const Poly<S>& p, const S& re, const S& im)
{
    WorkingPrecision wp(p, re, im);
    S vr(0), vi(0);
    for (const auto& c : p.coeffs()) {
        S nr = vr * re - vi * im + c;
        S ni = vr * im + vi * re;
        vr = std::move(nr);
        vi = std::move(ni);
    }
    return {wp.finish(vr), wp.finish(vi)};
}

// Rational -> BigReal at a given precision.
inline RealPoly to_real(const RationalPoly& p, unsigned bits)
{
    std::vector<BigReal> c;
    c.reserve(p.coeffs().size());
    for (const auto& q : p.coeffs()) c.push_back(make_bigreal(q, bits));
    return RealPoly(std::move(c));
}

// Largest coefficient-wise absolute difference; degrees must agree.
template <class S>
S max_coeff_diff(const Poly<S>& p, const Poly<S>& q)
{
    if (p.degree() != q.degree()) throw DegreeMismatch(p.degree(), q.degree());
    WorkingPrecision wp(p, q);
    S m(0);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        S diff = abs_value(S(p[k] - q[k]));
        if (diff > m) m = diff;
    }
    return wp.finish(m);
}

} // namespace finfree
