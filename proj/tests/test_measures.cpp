#include <doctest.h>

#include <sstream>

#include "finfree/appell.hpp"
#include "finfree/measures.hpp"
#include "finfree/roots.hpp"
#include "support.hpp"

using namespace finfree;
using namespace testing_support;

namespace {

AtomicMeasure atoms(std::initializer_list<Atom> list)
{
    AtomicMeasure m;
    m.atoms = list;
    return m;
}

// Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 2000)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

// int_{lo}^{x} of a density on [lo, hi] with square-root edges, through t = lo + (hi-lo) sin^2(theta).
template <class F>
double edge_integral(F density, double lo, double hi, double x)
{
    if (x <= lo) return 0;
    x = std::min(x, hi);
    const double top = std::asin(std::sqrt((x - lo) / (hi - lo)));
    // the transformed integrand has a finite limit at theta = 0, approached from inside
    return simpson(
        [&](double th) {
            th = std::max(th, 1e-9);
            const double t = lo + (hi - lo) * std::sin(th) * std::sin(th);
            return density(t) * 2 * (hi - lo) * std::sin(th) * std::cos(th);
        },
        0, top);
}

double mp_density(double c, double x)
{
    // 4c - (x-1-c)^2 in factored form, free of cancellation at the edges
    const double lo = (std::sqrt(c) - 1) * (std::sqrt(c) - 1), hi = (std::sqrt(c) + 1) * (std::sqrt(c) + 1);
    const double v = (hi - x) * (x - lo);
    return v <= 0 ? 0 : std::sqrt(v) / (2 * M_PI * x);
}

// Symmetric quantile discretization of a continuous law with n atoms per side.
AtomicMeasure quantile_atoms(const ReferenceLaw& law, int n, double hi)
{
    AtomicMeasure m;
    for (int i = 0; i < n; ++i) {
        const double target = 0.5 + (i + 0.5) / (2.0 * n);
        double a = 0, b = hi;
        for (int it = 0; it < 80; ++it) {
            const double mid = (a + b) / 2;
            if (cdf(law, mid) < target) a = mid;
            else b = mid;
        }
        const double q = (a + b) / 2;
        m.atoms.push_back({q, 0.5 / n});
        m.atoms.push_back({-q, 0.5 / n});
    }
    return canonicalize(std::move(m));
}

// Value of a truncated series at z.
double series_at(const Series<Rational>& s, double z)
{
    double v = 0;
    for (int k = s.order(); k >= 0; --k) v = v * z + to_double(s[k]);
    return v;
}

} // namespace

TEST_CASE("empirical root measures and their transforms")
{
    AtomicMeasure m = erm(std::vector<double>{0, 4});
    AtomicMeasure s = sqrt_symmetrize(m);
    REQUIRE(s.atoms.size() == 3);
    CHECK(s.atoms[0].location == -2);
    CHECK(s.atoms[0].weight == 0.25);
    CHECK(s.atoms[1].location == 0);
    CHECK(s.atoms[1].weight == 0.5);
    CHECK(s.atoms[2].location == 2);
    CHECK(s.atoms[2].weight == 0.25);

    AtomicMeasure one = sqrt_symmetrize(erm(std::vector<double>{1}));
    REQUIRE(one.atoms.size() == 2);
    CHECK(one.atoms[0].location == -1);
    CHECK(one.atoms[1].weight == 0.5);
    CHECK_THROWS_AS(sqrt_symmetrize(erm(std::vector<double>{-1, 2})), DomainError);

    // exact on perfect squares, to rounding elsewhere
    AtomicMeasure sq = erm(std::vector<double>{0, 1, 1, 9, 16, 0.25});
    AtomicMeasure back = square_pushforward(sqrt_symmetrize(sq));
    REQUIRE(back.atoms.size() == sq.atoms.size());
    for (std::size_t i = 0; i < sq.atoms.size(); ++i) {
        CHECK(back.atoms[i].location == sq.atoms[i].location);
        CHECK(back.atoms[i].weight == sq.atoms[i].weight);
    }
    AtomicMeasure gen = erm(std::vector<double>{0.3, 2, 7.1, 11});
    AtomicMeasure gback = square_pushforward(sqrt_symmetrize(gen));
    for (std::size_t i = 0; i < gen.atoms.size(); ++i) {
        CHECK(gback.atoms[i].location == doctest::Approx(gen.atoms[i].location).epsilon(1e-15));
        CHECK(gback.atoms[i].weight == gen.atoms[i].weight);
    }

    std::mt19937_64 rng(157);
    for (int trial = 0; trial < 5; ++trial) {
        RationalPoly p = random_integer_rooted(rng, 8, -9, 9);
        const Rational alpha(static_cast<long>(rng() % 7) + 1, 3);
        AtomicMeasure lhs = erm(find_roots(dilate(p, alpha)).roots);
        AtomicMeasure rhs = dilate_measure(erm(find_roots(p).roots), to_double(alpha));
        REQUIRE(lhs.atoms.size() == rhs.atoms.size());
        for (std::size_t i = 0; i < lhs.atoms.size(); ++i) {
            CHECK(lhs.atoms[i].location == doctest::Approx(rhs.atoms[i].location).epsilon(1e-14));
            CHECK(lhs.atoms[i].weight == doctest::Approx(rhs.atoms[i].weight).epsilon(1e-14));
        }
    }
}

TEST_CASE("Radon reweightings")
{
    for (int d : {2, 7, 49, 100}) {
        // roots of D_{1/d}(x^d - d x^{d-1}) are 1 (once) and 0
        RationalPoly p = RationalPoly::monomial(d) - Rational(d) * RationalPoly::monomial(d - 1);
        AtomicMeasure mu = erm(find_roots(dilate(p, Rational(1, d))).roots);
        RadonAtoms r = radon_t2(mu, d);
        REQUIRE(r.atoms.size() == 1);
        CHECK(r.atoms[0].location == 1);
        CHECK(r.atoms[0].weight == doctest::Approx(1).epsilon(1e-15));
    }
    CHECK(radon_t2(erm(std::vector<double>{0, 0, 0}), 3).atoms.empty());
    CHECK(radon_t(erm(std::vector<double>{0, 0}), 2).atoms.empty());
    RadonAtoms rt = radon_t(erm(std::vector<double>{0, 2}), 2);
    REQUIRE(rt.atoms.size() == 1);
    CHECK(rt.atoms[0].weight == 2);

    // t^2-mass of D_{1/d} A_{d,f} is d m_2 = gamma_1^2 - ((d-1)/d) gamma_2
    LaguerrePolyaData data;
    data.sigma2 = 1;
    data.roots = {Rational(1), Rational(-2)};
    for (int d : {5, 20, 40}) {
        Series<Rational> f = lp_series(data, d);
        RationalPoly a = dilate(appell_poly(f, d), Rational(1, d));
        const Rational g1 = f[1], g2 = 2 * f[2];
        const Rational want = g1 * g1 - Rational(d - 1, d) * g2;
        CHECK(Rational(d * moment(a, 2)) == want);
        RadonAtoms r = radon_t2(erm(find_roots(a).roots), d);
        CHECK(r.total_mass() == doctest::Approx(to_double(want)).epsilon(1e-12));
    }
}

TEST_CASE("reference law CDFs")
{
    const ReferenceLaw sc = Semicircle{};
    for (double x : {-2.5, -1.7, -0.3, 0.0, 0.9, 1.99, 3.0}) {
        const double want = edge_integral([](double t) { return std::sqrt(std::max(0.0, 4 - t * t)) / (2 * M_PI); }, -2, 2, x);
        CHECK(cdf(sc, x) == doctest::Approx(want).epsilon(1e-9));
    }
    for (double c : {1.0, 2.0, 4.0}) {
        const ReferenceLaw mp = MarchenkoPastur{c, 1};
        const double lo = (std::sqrt(c) - 1) * (std::sqrt(c) - 1), hi = (std::sqrt(c) + 1) * (std::sqrt(c) + 1);
        for (double u : {0.0, 0.05, 0.3, 0.5, 0.8, 0.999, 1.0}) {
            const double x = lo + u * (hi - lo);
            const double want = edge_integral([c](double t) { return mp_density(c, t); }, lo, hi, x);
            CHECK(cdf(mp, x) == doctest::Approx(want).epsilon(1e-8));
        }
        const double mean = simpson([&](double t) { return 1 - cdf(mp, t); }, 0, hi, 20000);
        CHECK(mean == doctest::Approx(c).epsilon(1e-6));
        CHECK(cdf(mp, -1) == 0);
        CHECK(cdf(mp, hi + 1) == 1);
    }
    const ReferenceLaw scaled = MarchenkoPastur{2, 3};
    CHECK(cdf(scaled, 4.5) == doctest::Approx(cdf(MarchenkoPastur{2, 1}, 1.5)));
    CHECK_THROWS_AS(cdf(MarchenkoPastur{0.5, 1}, 1), DomainError);

    const ReferenceLaw cauchy = Cauchy{};
    CHECK(cdf(cauchy, 0) == 0.5);
    CHECK(cdf(cauchy, 1) == doctest::Approx(0.75));
    CHECK(kolmogorov_distance(erm(std::vector<double>{0}), cauchy) == 0.5);

    for (double lambda : {0.25, 0.5, 1.0}) {
        const ReferenceLaw rg = RectGaussian{lambda};
        CHECK(cdf(rg, 0) == 0.5);
        CHECK(cdf(rg, 0.7) + cdf(rg, -0.7) == doctest::Approx(1));
        // the convention C(z) = z, through the numeric rectangular transform of a fine discretization
        AtomicMeasure q = quantile_atoms(rg, 4000, 3);
        for (double z : {-0.05, -0.02}) CHECK(rect_C_numeric(q, lambda, z) == doctest::Approx(z).epsilon(2e-3));
    }
}

TEST_CASE("infinitely divisible laws with closed-form CDFs")
{
    FreeIdAtomic point{0.75, 0, {}};
    CHECK(cdf(point, 0.75) == 1);
    CHECK(cdf_left(point, 0.75) == 0);
    CHECK(kolmogorov_distance(erm(std::vector<double>{0.75}), point) == 0);
    CHECK(kolmogorov_distance(erm(std::vector<double>{0.5, 1.0}), point) == 0.5);

    FreeIdAtomic gauss{1, 4, {}};
    for (double x : {-2.0, 0.0, 1.0, 2.5, 4.9})
        CHECK(cdf(gauss, x) == doctest::Approx(cdf(Semicircle{}, (x - 1) / 2)));

    // one jump of mass m at t: shifted and scaled MarchenkoPastur(m); mean R(0) checked by quadrature
    for (double t : {0.5, -2.0}) {
        FreeIdAtomic poisson{0.3, 0, atoms({{t, 2.0}})};
        const double mean = r_transform_eval(poisson, 0).real();
        const double lo = -20, hi = 20;
        const double integral = simpson([&](double x) { return 1 - cdf(poisson, x); }, 0, hi, 40000) -
                                simpson([&](double x) { return cdf(poisson, x); }, lo, 0, 40000);
        CHECK(integral == doctest::Approx(mean).epsilon(1e-5));
    }
    CHECK_THROWS_AS(cdf(FreeIdAtomic{0, 0, atoms({{1, 1}, {2, 1}})}, 0), UnsupportedCdf);
    CHECK_THROWS_AS(cdf(FreeIdAtomic{0, 1, atoms({{1, 1}})}, 0), UnsupportedCdf);

    RectIdAtomic rg{0.5, atoms({{0, 4}})};
    for (double x : {-1.0, 0.3, 2.0}) CHECK(cdf(rg, x) == doctest::Approx(cdf(RectGaussian{0.5}, x / 2)));
    CHECK_THROWS_AS(cdf(RectIdAtomic{1, atoms({{1, 0.5}})}, 0), UnsupportedCdf);
}

TEST_CASE("Kolmogorov distance")
{
    // cotangent grid against Cauchy: 1/(2d)
    for (int d : {10, 100, 500}) {
        std::vector<double> roots;
        for (int k = 0; k < d; ++k) roots.push_back(1 / std::tan((2 * k + 1) * M_PI / (2 * d)));
        CHECK(std::fabs(kolmogorov_distance(erm(roots), Cauchy{}) - 0.5 / d) < 1e-12);
    }

    std::mt19937_64 rng(163);
    std::uniform_real_distribution<double> u(-3, 3);
    auto random_measure = [&]() {
        std::vector<double> r;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 12); i < n; ++i) r.push_back(std::round(u(rng) * 4) / 4);
        return erm(r);
    };
    for (int trial = 0; trial < 50; ++trial) {
        AtomicMeasure a = random_measure(), b = random_measure(), c = random_measure();
        CHECK(kolmogorov_distance(a, a) == 0);
        CHECK(kolmogorov_distance(a, b) == kolmogorov_distance(b, a));
        CHECK(kolmogorov_distance(a, c) <= kolmogorov_distance(a, b) + kolmogorov_distance(b, c) + 1e-15);
        CHECK(std::fabs(kolmogorov_distance(a, Semicircle{}) - kolmogorov_distance(b, Semicircle{})) <= kolmogorov_distance(a, b) + 1e-15);
    }

    // Hermite roots scaled by 1/sqrt(d) approach the semicircle
    RootReport r = find_roots(hermite(60));
    AtomicMeasure mu = dilate_measure(erm(r.roots), 1 / std::sqrt(60.0));
    CHECK(kolmogorov_distance(mu, Semicircle{}) < 0.05);

    std::ostringstream csv;
    write_cdf_csv(csv, erm(std::vector<double>{0}), Cauchy{});
    CHECK(csv.str() == "location,weight,F_emp,F_ref\n0,1,1,0.5\n");
}

TEST_CASE("transform evaluation")
{
    FreeIdAtomic sc{0, 1, {}};
    for (double z : {-0.4, 0.1, 0.7}) CHECK(r_transform_eval(sc, z) == std::complex<double>(z, 0));

    // against -f'/f = c + sigma2 z + sum_j (1/(x_j - z) - 1/x_j)
    LaguerrePolyaData data;
    data.c = Q("1/2");
    data.sigma2 = Q("1/3");
    data.roots = {Rational(1), Rational(-3)};
    LevyData lv = levy_data(data);
    FreeIdAtomic law{lv.gamma, lv.sigma2, lv.nu};
    for (std::complex<double> z : {std::complex<double>(0.3, 0), std::complex<double>(-0.2, 0), std::complex<double>(0, 0.4)}) {
        std::complex<double> want = 0.5 + z / 3.0;
        for (double x : {1.0, -3.0}) want += 1.0 / (x - z) - 1.0 / x;
        CHECK(std::abs(r_transform_eval(law, z) - want) < 1e-14);
    }
    CHECK_THROWS_AS(r_transform_eval(law, 1.0), PoleProximity);

    RectIdAtomic gauss{0.5, atoms({{0, 2.5}})};
    CHECK(c_transform_eval(gauss, -0.3) == std::complex<double>(-0.75, 0));
    RectIdAtomic pole{1, atoms({{2, 1}})};
    CHECK_THROWS_AS(c_transform_eval(pole, 0.25), PoleProximity);
}

TEST_CASE("numeric rectangular R-transform")
{
    CHECK(rect_C_numeric(erm(std::vector<double>{0}), 1, -0.1) == 0);
    CHECK_THROWS_AS(rect_C_numeric(erm(std::vector<double>{0, 1}), 1, -0.1), DomainError);
    CHECK_THROWS_AS(rect_C_numeric(erm(std::vector<double>{-1, 1}), 1, 0.1), DomainError);
    CHECK_THROWS_AS(rect_C_numeric(erm(std::vector<double>{-1, 1}), 2, -0.1), DomainError);
    // H(w) = w / (1-w)^2 has its minimum -1/4 at w = -1
    CHECK_THROWS_AS(rect_C_numeric(erm(std::vector<double>{-1, 1}), 1, -0.3), BracketFailure);

    // (delta_1 + delta_-1)/2 is the symmetrized root measure of (x-1)^d; lambda = d/(d+n)
    AtomicMeasure mu = erm(std::vector<double>{-1, 1});
    const int d = 200;
    const RationalPoly p = from_roots(std::vector<Rational>(d, Rational(1)));
    for (long n : {0L, 200L}) {
        const double lambda = static_cast<double>(d) / (d + n);
        Series<Rational> R = truncate(rect_finite_R(p, Rational(n)), 40);
        for (double z = -0.05; z <= -0.0099; z += 0.01) CHECK(std::fabs(rect_C_numeric(mu, lambda, z) - series_at(R, z)) < 1e-2);
    }
    CHECK(rect_C_numeric(erm(std::vector<double>{0}), 1e-6, -0.01) == 0);
}
