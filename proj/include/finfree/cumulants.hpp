#pragma once

#include <vector>

#include "finfree/partitions.hpp"
#include "finfree/poly.hpp"
#include "finfree/series.hpp"

namespace finfree {

// Power sums p_1..p_m of the roots, from the coefficients by Newton's identities.
template <class S>
std::vector<S> power_sums(const Poly<S>& p, int m)
{
    require_monic(p, "power_sums");
    WorkingPrecision wp(p);
    const int d = p.degree();
    std::vector<S> e(static_cast<std::size_t>(m) + 1, S(0));  // elementary symmetric e_k = a_k
    for (int k = 1; k <= std::min(m, d); ++k) e[k] = p.a(k);
    std::vector<S> ps(static_cast<std::size_t>(m) + 1, S(0));
    for (int j = 1; j <= m; ++j) {
        S acc = (j % 2 ? S(1) : S(-1)) * S(j) * e[j];
        for (int i = 1; i < j; ++i) {
            if (e[i] == 0) continue;
            S term = e[i] * ps[j - i];
            if (i % 2) acc += term;
            else acc -= term;
        }
        ps[j] = acc;
    }
    return wp.finish(ps);
}

// m_j(p) = (1/d) sum_k x_k^j without root finding.
template <class S>
S moment(const Poly<S>& p, int j)
{
    if (j < 1) throw DomainError("moment: j must be >= 1");
    if (p.degree() < 1) throw DomainError("moment: degree must be >= 1");
    WorkingPrecision wp(p);
    S r = power_sums(p, j)[j] / S(p.degree());
    return wp.finish(r);
}

// Finite free cumulant kappa_j^d(p) through the moment-cumulant partition sum.
template <class S>
S ff_cumulant(const Poly<S>& p, int j)
{
    const int d = p.degree();
    if (j < 1 || j > d) throw DomainError("ff_cumulant: need 1 <= j <= d");
    WorkingPrecision wp(p);
    std::vector<S> ps = power_sums(p, j);
    std::vector<S> m(static_cast<std::size_t>(j) + 1);
    for (int i = 1; i <= j; ++i) m[i] = ps[i] / S(d);

    S total(0);
    for (const auto& t : partition_types(j)) {
        const int blocks = static_cast<int>(t.sizes.size());
        S term = S(t.count) * field_traits<S>::from_rational(coarsening_weight(t.sizes, d));
        for (int s : t.sizes) term *= m[s] * S(falling(Rational(s - 1), s - 1));
        term *= int_pow(S(d), blocks);
        if (blocks % 2) total -= term;
        else total += term;
    }
    S pref = int_pow(S(d), j - 1) / S(falling(Rational(j - 1), j - 1));
    S r = pref * total;
    return wp.finish(r);
}

// Unscaled rectangular cumulant K_{2k}^{n,d}.
template <class S>
S rect_cumulant_K(const Poly<S>& p, int k, const S& n)
{
    require_monic(p, "rect_cumulant_K");
    require_n(n);
    const int d = p.degree();
    if (k < 1 || k > d) throw DomainError("rect_cumulant_K: need 1 <= k <= d");
    WorkingPrecision wp(p, n);
    // r_m = m! a_m / ((d)_m (n+d)_m)
    std::vector<S> r(static_cast<std::size_t>(k) + 1);
    S fall_d(1), fall_nd(1), fact(1);
    for (int m = 1; m <= k; ++m) {
        fall_d *= S(d - m + 1);
        fall_nd *= n + S(d - m + 1);
        fact *= S(m);
        r[m] = fact * p.a(m) / (fall_d * fall_nd);
    }
    S sum(0);
    for (const auto& t : partition_types(k)) {
        const int blocks = static_cast<int>(t.sizes.size());
        S term = S(t.count) * S(falling(Rational(blocks - 1), blocks - 1));
        for (int s : t.sizes) term *= r[s];
        if (blocks % 2) sum += term;
        else sum -= term;
    }
    S res = sum / S(falling(Rational(k - 1), k - 1));
    if (k % 2) res = -res;
    return wp.finish(res);
}

// kappa_{2k}^{n,d} = -d^{2k-1} (1 + n/d)^k K_{2k}^{n,d}.
template <class S>
S rect_cumulant_scaled(const Poly<S>& p, int k, const S& n)
{
    WorkingPrecision wp(p, n);
    const S d(p.degree());
    S K = rect_cumulant_K(p, k, n);
    S r = -int_pow(d, 2 * k - 1) * int_pow(S(S(1) + n / d), k) * K;
    return wp.finish(r);
}

// Operator symbol P with P(D/d) x^d = p (normalized) or P(D) x^d = p (unnormalized).
template <class S>
Series<S> to_operator_symbol(const Poly<S>& p, bool normalized)
{
    require_monic(p, "to_operator_symbol");
    WorkingPrecision wp(p);
    const int d = p.degree();
    Series<S> P(d);
    S fall(1), dk(1);
    for (int k = 0; k <= d; ++k) {
        P[k] = normalized ? S(p[k] * dk / fall) : S(p[k] / fall);
        fall *= S(d - k);
        dk *= S(d);
    }
    wp.finish(P.data());
    return P;
}

// Inverse of to_operator_symbol: apply the symbol to x^d.
template <class S>
Poly<S> apply_operator_symbol(const Series<S>& P, int d, bool normalized)
{
    if (P.order() < d) throw DomainError("apply_operator_symbol: series order below degree");
    WorkingPrecision wp(P);
    std::vector<S> c(static_cast<std::size_t>(d) + 1);
    S fall(1), dk(1);
    for (int k = 0; k <= d; ++k) {
        c[k] = normalized ? S(P[k] * fall / dk) : S(P[k] * fall);
        fall *= S(d - k);
        dk *= S(d);
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// Rectangular symbol: P(M_n / (d(d+n))) x^d = p (normalized) or P(M_n) x^d = p.
template <class S>
Series<S> to_rect_operator_symbol(const Poly<S>& p, const S& n, bool normalized)
{
    require_monic(p, "to_rect_operator_symbol");
    require_n(n);
    WorkingPrecision wp(p, n);
    const int d = p.degree();
    Series<S> P(d);
    S fall(1), scale(1);
    const S unit = S(d) * (S(d) + n);
    for (int k = 0; k <= d; ++k) {
        P[k] = normalized ? S(p[k] * scale / fall) : S(p[k] / fall);
        fall *= S(d - k) * (n + S(d - k));
        scale *= unit;
    }
    wp.finish(P.data());
    return P;
}

template <class S>
Poly<S> apply_rect_operator_symbol(const Series<S>& P, int d, const S& n, bool normalized)
{
    if (P.order() < d) throw DomainError("apply_rect_operator_symbol: series order below degree");
    require_n(n);
    WorkingPrecision wp(P, n);
    std::vector<S> c(static_cast<std::size_t>(d) + 1);
    S fall(1), scale(1);
    const S unit = S(d) * (S(d) + n);
    for (int k = 0; k <= d; ++k) {
        c[k] = normalized ? S(P[k] * fall / scale) : S(P[k] * fall);
        fall *= S(d - k) * (n + S(d - k));
        scale *= unit;
    }
    return Poly<S>(std::move(wp.finish(c)));
}

// Log-derivative through the exponential-coefficient partition formula:
// with f = 1 + sum a_k s^k / k!, log f = sum b_k s^k / k!, b_k = sum_pi a_pi (-1)^{|pi|-1} (|pi|-1)!.
// Returns (log f)' to order m-1, for m = f.order() <= max_partition_order.
template <class S>
Series<S> log_derivative_partition(const Series<S>& f)
{
    if (f[0] != 1) throw DomainError("log_derivative: constant term must be 1");
    const int m = f.order();
    if (m == 0) return Series<S>(0);
    WorkingPrecision wp(f);
    std::vector<S> a(static_cast<std::size_t>(m) + 1);
    S fact(1);
    for (int k = 1; k <= m; ++k) {
        fact *= S(k);
        a[k] = f[k] * fact;
    }
    Series<S> out(m - 1);
    S kfact(1);  // (k-1)!
    for (int k = 1; k <= m; ++k) {
        if (k > 1) kfact *= S(k - 1);
        S b(0);
        for (const auto& t : partition_types(k)) {
            const int blocks = static_cast<int>(t.sizes.size());
            S term = S(t.count) * S(falling(Rational(blocks - 1), blocks - 1));
            for (int s : t.sizes) term *= a[s];
            if (blocks % 2) b += term;
            else b -= term;
        }
        out[k - 1] = b / kfact;  // coefficient of s^{k-1} in (log f)' is k * b_k / k!
    }
    wp.finish(out.data());
    return out;
}

// R^d_p(s) = -(1/d) P_d'(s) / P_d(s), coefficients s^0..s^{d-1} (kappa_1..kappa_d).
// The s^d coefficient would need the s^{d+1} coefficient of P_d, which p does not determine
// (D^{d+1} x^d = 0), so it is not part of the result.
template <class S>
Series<S> finite_R(const Poly<S>& p)
{
    const int d = p.degree();
    if (d < 1) return Series<S>(0);
    WorkingPrecision wp(p);
    return S(S(-1) / S(d)) * log_derivative(to_operator_symbol(p, true));
}

// R^{d,n}_p(s) = -(s/d) P_{d,n}'(s) / P_{d,n}(s) mod s^{d+1}.
template <class S>
Series<S> rect_finite_R(const Poly<S>& p, const S& n)
{
    const int d = p.degree();
    if (d < 1) return Series<S>(0);
    WorkingPrecision wp(p, n);
    Series<S> L = truncate(log_derivative(to_rect_operator_symbol(p, n, true)), d);
    return S(S(-1) / S(d)) * shift_up(L);
}

template <class S>
struct IdentityReport {
    S max_discrepancy;
    int order;
};

template <class S>
S max_series_diff(const Series<S>& f, const Series<S>& g)
{
    WorkingPrecision wp(f, g);
    S m(0);
    for (int k = 0; k <= std::min(f.order(), g.order()); ++k) {
        S diff = abs_value(S(f[k] - g[k]));
        if (diff > m) m = diff;
    }
    return wp.finish(m);
}

// R^{d-j}_{p_j}(s) versus R^d_p(((d-j)/d) s) with p_j = ((d-j)!/d!) D^j p, compared through s^{d-j-1}.
template <class S>
IdentityReport<S> derivative_flow_R_identity_check(const Poly<S>& p, int j)
{
    const int d = p.degree();
    if (j < 0 || j >= d) throw DomainError("derivative_flow_R_identity_check: need 0 <= j < d");
    WorkingPrecision wp(p);
    Series<S> lhs = finite_R(normalized_derivative(p, d - j));
    Series<S> rhs = truncate(scale_argument(finite_R(p), S(S(d - j) / S(d))), d - j - 1);
    return {max_series_diff(lhs, rhs), d - j - 1};
}

// R^{d-j,n}_{p_j}(s) versus (d/(d-j)) R^{d,n}_p((d-j)(n+d-j)/(d(n+d)) s).
template <class S>
IdentityReport<S> mn_flow_R_identity_check(const Poly<S>& p, const S& n, int j)
{
    const int d = p.degree();
    if (j < 0 || j >= d) throw DomainError("mn_flow_R_identity_check: need 0 <= j < d");
    WorkingPrecision wp(p, n);
    Series<S> lhs = rect_finite_R(apply_Mn_power_normalized(p, n, j), n);
    const S ratio = S(d - j) * (n + S(d - j)) / (S(d) * (n + S(d)));
    Series<S> rhs = S(S(d) / S(d - j)) * truncate(scale_argument(rect_finite_R(p, n), ratio), d - j);
    return {max_series_diff(lhs, rhs), d - j};
}

} // namespace finfree
