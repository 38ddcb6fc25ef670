#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "finfree/cumulants.hpp"
#include "finfree/roots.hpp"
#include "support.hpp"

using namespace finfree;
using namespace testing_support;

namespace {

RationalPoly binomial_sum(const std::vector<Rational>& gamma, int d)
{
    std::vector<Rational> c(static_cast<std::size_t>(d) + 1);
    Rational binom = 1;
    for (int k = 0; k <= d; ++k) {
        c[k] = gamma[k] * binom;
        binom = binom * (d - k) / (k + 1);
    }
    return RationalPoly(std::move(c));
}

// Eigenvalues of the companion matrix, then Newton-refined in long double.
std::vector<double> companion_roots(const RationalPoly& p)
{
    const int d = p.degree();
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) C(0, k) = -to_double(p[k + 1]);
    for (int k = 1; k < d; ++k) C(k, k - 1) = 1;
    Eigen::VectorXcd ev = C.eigenvalues();
    std::vector<double> out;
    for (int i = 0; i < d; ++i) {
        long double x = ev[i].real();
        for (int it = 0; it < 20; ++it) {
            long double v = 0, dv = 0;
            for (int k = 0; k <= d; ++k) {
                dv = dv * x + v;
                v = v * x + static_cast<long double>(to_double(p[k]));
            }
            if (dv == 0) break;
            x -= v / dv;
        }
        out.push_back(static_cast<double>(x));
    }
    std::sort(out.begin(), out.end());
    return out;
}

BigReal abs_diff(const BigReal& a, const BigReal& b)
{
    BigReal r = a - b;
    return r < 0 ? BigReal(-r) : r;
}

} // namespace

TEST_CASE("small examples")
{
    RootReport r = find_roots(P({"1", "0", "-1"}));
    REQUIRE(r.roots.size() == 2);
    CHECK(r.roots[0] == -1);
    CHECK(r.roots[1] == 1);
    CHECK(r.max_imag_residual <= 1e-20);

    CHECK_THROWS_AS(find_roots(P({"1", "0", "1"})), ComplexRoots);
    try {
        find_roots(P({"1", "0", "1", "0", "0"}));
        CHECK(false);
    } catch (const ComplexRoots& e) {
        CHECK(e.count() == 2);
    }
    ComplexRootReport c = find_complex_roots(P({"1", "0", "1"}));
    REQUIRE(c.roots.size() == 2);
    for (const auto& z : c.roots) {
        CHECK(std::fabs(to_double(z.re)) < 1e-40);
        CHECK(std::fabs(std::fabs(to_double(z.im)) - 1) < 1e-40);
    }
    CHECK_THROWS_AS(find_roots(P({"5"})), DomainError);
    // non-monic input is normalized
    RootReport s = find_roots(P({"2", "-6", "4"}));
    CHECK(s.roots[0] == 1);
    CHECK(s.roots[1] == 2);
}

TEST_CASE("Hermite He_4 against the companion matrix")
{
    RationalPoly he4 = P({"1", "0", "-6", "0", "3"});
    RootReport r = find_roots(he4);
    std::vector<double> oracle = companion_roots(he4);
    const double want[] = {-2.3344142183, -0.7419637843, 0.7419637843, 2.3344142183};
    REQUIRE(r.roots.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::fabs(to_double(r.roots[i]) - oracle[i]) < 1e-14);
        CHECK(std::fabs(to_double(r.roots[i]) - want[i]) < 1e-10);
        // exact roots: x^2 = 3 -+ sqrt(6)
        BigReal x = r.roots[i];
        BigReal v = x * x * x * x - 6 * x * x + 3;
        CHECK(std::fabs(to_double(v)) < 1e-60);
    }
}

TEST_CASE("cosine Appell roots follow the cotangent grid")
{
    const int d = 100;
    std::vector<Rational> gamma(d + 1, Rational(0));
    for (int k = 0; k <= d; k += 2) gamma[k] = (k / 2) % 2 ? -1 : 1;
    RationalPoly a = binomial_sum(gamma, d);
    RootReport r = find_roots(a);
    REQUIRE(r.roots.size() == static_cast<std::size_t>(d));
    PrecisionScope scope(256);
    const BigReal pi = boost::multiprecision::acos(BigReal(-1));
    std::vector<BigReal> want;
    for (int k = 0; k < d; ++k) {
        BigReal theta = pi * (2 * k + 1) / (2 * d);
        want.push_back(BigReal(boost::multiprecision::cos(theta) / boost::multiprecision::sin(theta)));
    }
    std::sort(want.begin(), want.end());
    BigReal worst = 0;
    for (int k = 0; k < d; ++k) worst = std::max(worst, abs_diff(r.roots[k], want[k]));
    CHECK(worst < BigReal("1e-20"));
}

TEST_CASE("Wilkinson-type products")
{
    for (int d : {5, 20, 35, 50}) {
        std::vector<Rational> roots;
        for (int k = 1; k <= d; ++k) roots.push_back(Rational(k, 10));
        RootReport r = find_roots(from_roots(roots));
        REQUIRE(r.roots.size() == static_cast<std::size_t>(d));
        PrecisionScope scope(r.precision_bits);
        BigReal worst = 0;
        for (int k = 0; k < d; ++k) worst = std::max(worst, abs_diff(r.roots[k], BigReal(roots[k])));
        CHECK(worst < BigReal("1e-30"));
    }
}

TEST_CASE("repeated and zero roots come out exactly")
{
    std::vector<Rational> roots = {Rational(1), Rational(1), Rational(1), Rational(1), Rational(1),
                                   Rational(-2), Rational(-2), Rational(0), Rational(0), Rational(0), Rational(1, 3)};
    RationalPoly p = from_roots(roots);
    RootReport r = find_roots(p);
    std::sort(roots.begin(), roots.end());
    REQUIRE(r.roots.size() == roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        CHECK(std::fabs(to_double(r.roots[i]) - to_double(roots[i])) < 1e-40);

    auto sf = square_free_decomposition(p);
    int total = 0;
    for (const auto& [f, m] : sf) total += f.degree() * m;
    CHECK(total == p.degree());

    RationalPoly fam = RationalPoly::monomial(30) - Rational(30) * RationalPoly::monomial(29);
    RootReport f = find_roots(fam);
    CHECK(f.roots.front() == 0);
    CHECK(f.roots[28] == 0);
    CHECK(f.roots.back() == 30);
}

TEST_CASE("bigfloat input")
{
    RationalPoly he4 = P({"1", "0", "-6", "0", "3"});
    RootReport a = find_roots(he4);
    RootReport b = find_roots(to_real(he4, 256));
    REQUIRE(b.roots.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(std::fabs(to_double(a.roots[i] - b.roots[i])) < 1e-60);
}

TEST_CASE("iteration budget exhaustion")
{
    std::vector<Rational> roots;
    for (int k = 1; k <= 20; ++k) roots.push_back(Rational(k));
    RootOptions opts;
    opts.max_iterations = 1;
    opts.max_precision_bits = 256;
    CHECK_THROWS_AS(find_roots(from_roots(roots), opts), NonConvergence);
    opts.precision_bits = 16;
    CHECK_THROWS_AS(find_roots(from_roots(roots), opts), DomainError);
}

TEST_CASE("Rolle interlacing of derivative roots")
{
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 49);
        std::vector<Rational> roots;
        for (int i = 0; i < d; ++i) roots.push_back(Rational(static_cast<long>(rng() % 2001) - 1000, 100));
        RationalPoly p = from_roots(roots);
        RootReport r = find_roots(p);
        RootReport q = find_roots(differentiate(p));
        REQUIRE(q.roots.size() == static_cast<std::size_t>(d - 1));
        for (int i = 0; i + 1 < d; ++i) {
            CHECK(q.roots[i] >= r.roots[i] - BigReal("1e-25"));
            CHECK(q.roots[i] <= r.roots[i + 1] + BigReal("1e-25"));
        }
    }
}

TEST_CASE("M_n preserves nonnegative roots")
{
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 29);
        RationalPoly p = random_integer_rooted(rng, d, 0, 12);
        for (const char* ns : {"-1/2", "0", "3/2", "4"}) {
            RootReport r = find_roots(apply_Mn(p, Q(ns)));
            CHECK(r.roots.size() == static_cast<std::size_t>(d - 1));
            CHECK(r.roots.front() > BigReal("-1e-25"));
        }
    }
}

TEST_CASE("moments from coefficients match moments from roots")
{
    std::mt19937_64 rng(109);
    for (int d : {10, 40, 100}) {
        std::vector<Rational> roots;
        for (int i = 0; i < d; ++i) roots.push_back(Rational(static_cast<long>(rng() % 801) - 400, 100));
        RationalPoly p = from_roots(roots);
        RootReport r = find_roots(p);
        PrecisionScope scope(256);
        for (int j = 1; j <= 6; ++j) {
            BigReal s = 0;
            for (const auto& x : r.roots) s += boost::multiprecision::pow(x, j);
            s /= d;
            BigReal exact = make_bigreal(moment(p, j), 256);
            CHECK(abs_diff(s, exact) < BigReal("1e-20") * (1 + abs_value(exact)));
        }
    }
}
