#pragma once

#include <vector>

#include "finfree/atoms.hpp"
#include "finfree/cumulants.hpp"
#include "finfree/roots.hpp"
#include "finfree/series.hpp"

namespace finfree {

// Truncated Laguerre-Polya function in the canonical form
//   f(z) = exp(-c z - sigma2 z^2 / 2) prod_j (1 - z/x_j) exp(z/x_j).
// The form exp(+c z - ...) is obtained by negating c.
struct LaguerrePolyaData {
    Rational c = 0;
    Rational sigma2 = 0;
    std::vector<Rational> roots;
};

// g(z) = exp(-sigma2 z) prod_j (1 - z/alpha_j^2), stored through the squares alpha_j^2 > 0.
struct LpiData {
    Rational sigma2 = 0;
    std::vector<Rational> roots_sq;
};

void validate(const LaguerrePolyaData& data);
void validate(const LpiData& data);

// Coefficients gamma_k / k! of f up to z^order.
Series<Rational> lp_series(const LaguerrePolyaData& data, int order);
// Coefficients eta_k / k! of g up to z^order.
Series<Rational> lpi_series(const LpiData& data, int order);

// sum_j x_j^-2 over the stored roots (the t^2-mass of G_f away from the origin).
Rational inverse_square_sum(const LaguerrePolyaData& data);

template <class S>
void require_unit_constant(const Series<S>& f, int d, const char* what)
{
    if (d < 0) throw DomainError(std::string(what) + ": degree must be >= 0");
    if (f.order() < d) throw DomainError(std::string(what) + ": series order below degree");
    if (f[0] != 1) throw DomainError(std::string(what) + ": constant coefficient must be 1");
}

// A_{d,f}(z) = f(D) z^d = sum_k gamma_k C(d,k) z^(d-k).
template <class S>
Poly<S> appell_poly(const Series<S>& f, int d)
{
    require_unit_constant(f, d, "appell_poly");
    return apply_operator_symbol(truncate(f, d), d, false);
}

// J_{d,f}(z) = sum_k gamma_k C(d,k) z^k, the reversal of A_{d,f}.
template <class S>
Poly<S> jensen_poly(const Series<S>& f, int d)
{
    return reverse(appell_poly(f, d));
}

// f(D/d)^d z^d.
template <class S>
Poly<S> normalized_appell(const Series<S>& f, int d)
{
    require_unit_constant(f, d, "normalized_appell");
    if (d < 1) throw DomainError("normalized_appell: degree must be >= 1");
    return apply_operator_symbol(pow_series(truncate(f, d), static_cast<unsigned>(d)), d, true);
}

RationalPoly normalized_appell(const LaguerrePolyaData& data, int d);

// He_l, monic.
RationalPoly hermite(int ell);
// L_l^(n)(x) = sum_k (-1)^k C(l+n, l-k) x^k / k!, as printed (leading coefficient (-1)^l / l!).
RationalPoly laguerre(int ell, const Rational& n);
RationalPoly laguerre_monic(int ell, const Rational& n);

// L_{d,g}(z) = g(M_n) z^d = sum_k eta_k (n+d)_k C(d,k) z^(d-k).
template <class S>
Poly<S> laguerre_appell(const Series<S>& g, int d, const S& n)
{
    require_unit_constant(g, d, "laguerre_appell");
    return apply_rect_operator_symbol(truncate(g, d), d, n, false);
}

// K_{d,g}(z) = z^d L_{d,g}(1/z).
template <class S>
Poly<S> laguerre_jensen(const Series<S>& g, int d, const S& n)
{
    return reverse(laguerre_appell(g, d, n));
}

// g(M_n / (d(n+d)))^d z^d.
template <class S>
Poly<S> normalized_laguerre_appell(const Series<S>& g, int d, const S& n)
{
    require_unit_constant(g, d, "normalized_laguerre_appell");
    if (d < 1) throw DomainError("normalized_laguerre_appell: degree must be >= 1");
    return apply_rect_operator_symbol(pow_series(truncate(g, d), static_cast<unsigned>(d)), d, n, true);
}

RationalPoly laguerre_appell(const LpiData& data, int d, const Rational& n);
RationalPoly normalized_laguerre_appell(const LpiData& data, int d, const Rational& n);

struct MembershipReport {
    enum class Failure { none, complex_roots, nonpositive_root, nonconvergence };
    bool pass = true;
    int failed_degree = 0;  // first degree whose K_{k,g} fails; 0 on pass
    Failure failure = Failure::none;
};

// Checks that K_{k,g} has only positive roots for k = 1..d.
MembershipReport lpi_membership(const Series<Rational>& g, int d, const Rational& n, const RootOptions& opts = {});

const char* to_string(MembershipReport::Failure f);

struct LevyData {
    double gamma;
    double sigma2;
    RadonAtoms nu;   // unit atoms at 1/x_j
    RadonAtoms G_f;  // sigma2 at 0, x_j^-2 at 1/x_j
    Rational gamma_exact;
};

// Free Levy-Khintchine data of the limit law of the normalized Appell polynomials.
// In the canonical form gamma = c - sum_j 1/(x_j^3 + x_j).
LevyData levy_data(const LaguerrePolyaData& data);

struct RectLevyData {
    double lambda;
    RadonAtoms G_g;  // sigma2 at 0, alpha_j^-2 at alpha_j^-2
    RadonAtoms G;    // sigma2 at 0, (alpha_j^2 + 1)^-1 split evenly over +-1/alpha_j
};

RectLevyData rect_levy_data(const LpiData& data, double lambda);

} // namespace finfree
