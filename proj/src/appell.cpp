#include "finfree/appell.hpp"

namespace finfree {

void validate(const LaguerrePolyaData& data)
{
    if (data.sigma2 < 0) throw DomainError("Laguerre-Polya data: sigma2 must be >= 0");
    for (const auto& x : data.roots)
        if (x == 0) throw DomainError("Laguerre-Polya data: roots must be nonzero");
}

void validate(const LpiData& data)
{
    if (data.sigma2 < 0) throw DomainError("LPI data: sigma2 must be >= 0");
    for (const auto& a : data.roots_sq)
        if (!(a > 0)) throw DomainError("LPI data: squared roots must be positive");
}

Series<Rational> lp_series(const LaguerrePolyaData& data, int order)
{
    validate(data);
    // log f = -c z - sigma2 z^2 / 2 - sum_{m >= 2} s_m z^m / m with s_m = sum_j x_j^-m
    Series<Rational> h(order);
    if (order >= 1) h[1] = -data.c;
    if (order >= 2) h[2] = -data.sigma2 / 2;
    for (const auto& x : data.roots) {
        const Rational inv = Rational(1) / x;
        Rational pw = inv;
        for (int m = 2; m <= order; ++m) {
            pw *= inv;
            h[m] -= pw / m;
        }
    }
    return exp_series(h);
}

Series<Rational> lpi_series(const LpiData& data, int order)
{
    validate(data);
    Series<Rational> h(order);
    if (order >= 1) h[1] = -data.sigma2;
    Series<Rational> g = exp_series(h);
    for (const auto& a : data.roots_sq) {
        Series<Rational> factor = Series<Rational>::one(order);
        if (order >= 1) factor[1] = -Rational(1) / a;
        g = g * factor;
    }
    return g;
}

Rational inverse_square_sum(const LaguerrePolyaData& data)
{
    Rational s = 0;
    for (const auto& x : data.roots) s += Rational(1) / (x * x);
    return s;
}

RationalPoly normalized_appell(const LaguerrePolyaData& data, int d)
{
    return normalized_appell(lp_series(data, d), d);
}

RationalPoly hermite(int ell)
{
    if (ell < 0) throw DomainError("hermite: degree must be >= 0");
    // He_l = sum_k (-1)^k l! / (k! (l-2k)! 2^k) x^(l-2k); c_{2k} from c_{2k-2} by a ratio.
    std::vector<Rational> c(static_cast<std::size_t>(ell) + 1, Rational(0));
    Rational t = 1;
    c[0] = t;
    for (int k = 1; 2 * k <= ell; ++k) {
        t *= Rational(-(ell - 2 * k + 2) * (ell - 2 * k + 1), 2 * k);
        c[2 * k] = t;
    }
    return RationalPoly(std::move(c));
}

RationalPoly laguerre(int ell, const Rational& n)
{
    if (ell < 0) throw DomainError("laguerre: degree must be >= 0");
    require_n(n);
    // coefficient of x^k: (-1)^k C(l+n, l-k) / k! = (-1)^k (l+n)_{l-k} / ((l-k)! k!)
    std::vector<Rational> c(static_cast<std::size_t>(ell) + 1);
    for (int k = 0; k <= ell; ++k) {
        Rational v = falling(Rational(n + ell), ell - k);
        for (int i = 2; i <= ell - k; ++i) v /= i;
        for (int i = 2; i <= k; ++i) v /= i;
        c[ell - k] = k % 2 ? Rational(-v) : v;
    }
    return RationalPoly(std::move(c));
}

RationalPoly laguerre_monic(int ell, const Rational& n)
{
    return monic(laguerre(ell, n));
}

RationalPoly laguerre_appell(const LpiData& data, int d, const Rational& n)
{
    return laguerre_appell(lpi_series(data, d), d, n);
}

RationalPoly normalized_laguerre_appell(const LpiData& data, int d, const Rational& n)
{
    return normalized_laguerre_appell(lpi_series(data, d), d, n);
}

MembershipReport lpi_membership(const Series<Rational>& g, int d, const Rational& n, const RootOptions& opts)
{
    require_unit_constant(g, d, "lpi_membership");
    require_n(n);
    MembershipReport rep;
    for (int k = 1; k <= d; ++k) {
        RationalPoly K = laguerre_jensen(g, k, n);
        if (K.degree() < 1) continue;
        auto fail = [&](MembershipReport::Failure f) {
            rep.pass = false;
            rep.failed_degree = k;
            rep.failure = f;
        };
        try {
            RootReport r = find_roots(K, opts);
            if (!(r.roots.front() > 0)) {
                fail(MembershipReport::Failure::nonpositive_root);
                return rep;
            }
        } catch (const ComplexRoots&) {
            fail(MembershipReport::Failure::complex_roots);
            return rep;
        } catch (const NonConvergence&) {
            fail(MembershipReport::Failure::nonconvergence);
            return rep;
        }
    }
    return rep;
}

const char* to_string(MembershipReport::Failure f)
{
    switch (f) {
    case MembershipReport::Failure::none: return "none";
    case MembershipReport::Failure::complex_roots: return "complex_roots";
    case MembershipReport::Failure::nonpositive_root: return "nonpositive_root";
    case MembershipReport::Failure::nonconvergence: return "nonconvergence";
    }
    return "unknown";
}

LevyData levy_data(const LaguerrePolyaData& data)
{
    validate(data);
    LevyData out;
    Rational gamma = data.c;
    out.G_f.atoms.push_back({0.0, to_double(data.sigma2)});
    for (const auto& x : data.roots) {
        gamma -= Rational(1) / (x * x * x + x);
        const double t = to_double(Rational(1) / x);
        out.nu.atoms.push_back({t, 1.0});
        out.G_f.atoms.push_back({t, to_double(Rational(1) / (x * x))});
    }
    out.nu = canonicalize(std::move(out.nu));
    out.G_f = canonicalize(std::move(out.G_f));
    out.gamma_exact = gamma;
    out.gamma = to_double(gamma);
    out.sigma2 = to_double(data.sigma2);
    return out;
}

RectLevyData rect_levy_data(const LpiData& data, double lambda)
{
    validate(data);
    if (!(lambda > 0 && lambda <= 1)) throw DomainError("rect_levy_data: lambda must lie in (0, 1]");
    RectLevyData out;
    out.lambda = lambda;
    const double s2 = to_double(data.sigma2);
    out.G_g.atoms.push_back({0.0, s2});
    out.G.atoms.push_back({0.0, s2});
    for (const auto& a : data.roots_sq) {
        const double inv = to_double(Rational(1) / a);
        out.G_g.atoms.push_back({inv, inv});
        const double t = std::sqrt(inv);
        const double half = to_double(Rational(1) / (a + 1)) / 2;
        out.G.atoms.push_back({t, half});
        out.G.atoms.push_back({-t, half});
    }
    out.G_g = canonicalize(std::move(out.G_g));
    out.G = canonicalize(std::move(out.G));
    return out;
}

} // namespace finfree
