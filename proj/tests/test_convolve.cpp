#include <doctest.h>

#include "finfree/convolve.hpp"
#include "support.hpp"

using namespace finfree;
using namespace testing_support;

namespace {

const char* const ns_list[] = {"0", "1/2", "1", "3"};

RationalPoly affine(const Rational& t, const RationalPoly& p, const RationalPoly& q)
{
    return t * p + Rational(1 - t) * q;
}

} // namespace

TEST_CASE("square convolution examples")
{
    RationalPoly p = P({"1", "0", "-1"});
    CHECK(boxplus(p, p) == P({"1", "0", "-2"}));
    CHECK(boxplus_via_operators(p, p) == P({"1", "0", "-2"}));
    CHECK(boxplus_power(p, 2) == P({"1", "0", "-2"}));
    CHECK(boxplus_power(p, 1) == p);
    CHECK_THROWS_AS(boxplus_power(p, 0), DomainError);
    CHECK_THROWS_AS(boxplus(p, P({"1", "0"})), DegreeMismatch);

    std::mt19937_64 rng(71);
    for (int d = 1; d <= 8; ++d) {
        RationalPoly q = random_integer_rooted(rng, d);
        CHECK(boxplus(q, RationalPoly::monomial(d)) == q);
        CHECK(boxplus_via_operators(q, RationalPoly::monomial(d)) == q);
    }
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) {
            RationalPoly want = P({"1", to_string(Rational(-(a + b))).c_str()});
            CHECK(boxplus(P({"1", to_string(Rational(-a)).c_str()}), P({"1", to_string(Rational(-b)).c_str()})) == want);
        }
}

TEST_CASE("square convolution: mutual oracles and algebra")
{
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 12);
        RationalPoly p = random_integer_rooted(rng, d);
        RationalPoly q = random_integer_rooted(rng, d);
        RationalPoly pq = boxplus(p, q);
        CHECK(pq.is_monic());
        CHECK(pq == boxplus_via_operators(p, q));
        CHECK(pq == boxplus(q, p));
        if (d <= 8) {
            RationalPoly r = random_integer_rooted(rng, d);
            CHECK(boxplus(pq, r) == boxplus(p, boxplus(q, r)));
            RationalPoly iter = p;
            for (unsigned k = 1; k <= 4; ++k) {
                CHECK(boxplus_power(p, k) == iter);
                iter = boxplus(iter, p);
            }
        }
    }
}

TEST_CASE("square convolution is bilinear in the coefficient arrays")
{
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 10);
        RationalPoly p1 = random_integer_rooted(rng, d), p2 = random_integer_rooted(rng, d);
        RationalPoly q = random_integer_rooted(rng, d);
        Rational t(static_cast<long>(rng() % 13) - 6, 5);
        // affine combinations keep a_0 = 1
        CHECK(boxplus(affine(t, p1, p2), q) == affine(t, boxplus(p1, q), boxplus(p2, q)));
        CHECK(boxplus(q, affine(t, p1, p2)) == affine(t, boxplus(q, p1), boxplus(q, p2)));
        for (const char* ns : ns_list) {
            Rational n = Q(ns);
            CHECK(rect_boxplus(affine(t, p1, p2), q, n) == affine(t, rect_boxplus(p1, q, n), rect_boxplus(p2, q, n)));
        }
    }
}

TEST_CASE("rectangular convolution examples")
{
    for (const char* ns : ns_list) {
        Rational n = Q(ns);
        std::mt19937_64 rng(83);
        for (int d = 1; d <= 6; ++d) {
            RationalPoly q = random_integer_rooted(rng, d, 0, 5);
            CHECK(rect_boxplus(q, RationalPoly::monomial(d), n) == q);
            CHECK(rect_boxplus_via_operators(q, RationalPoly::monomial(d), n) == q);
        }
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b <= 3; ++b) {
                RationalPoly pa = P({"1", to_string(Rational(-a)).c_str()});
                RationalPoly pb = P({"1", to_string(Rational(-b)).c_str()});
                CHECK(rect_boxplus(pa, pb, n) == P({"1", to_string(Rational(-(a + b))).c_str()}));
            }
    }
    RationalPoly p = P({"1", "-1"});
    CHECK_THROWS_AS(rect_boxplus(p, p, Rational(-1)), DomainError);
    CHECK_THROWS_AS(rect_boxplus(p, P({"1", "0", "0"}), Rational(0)), DegreeMismatch);
    CHECK_THROWS_AS(rect_boxplus_coefficients(p, p, Q("1/2")), DomainError);
}

TEST_CASE("rectangular convolution: mutual oracles")
{
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 8);
        RationalPoly p = random_integer_rooted(rng, d, 0, 6);
        RationalPoly q = random_integer_rooted(rng, d, 0, 6);
        for (long n : {0L, 1L, 2L, 5L}) {
            RationalPoly r = rect_boxplus(p, q, Rational(n));
            CHECK(r == rect_boxplus_coefficients(p, q, Rational(n)));
            CHECK(r == rect_boxplus_via_operators(p, q, Rational(n)));
        }
        for (const char* ns : {"1/2", "-1/3", "7/4"}) {
            Rational n = Q(ns);
            RationalPoly r = rect_boxplus(p, q, n);
            CHECK(r.is_monic());
            CHECK(r == rect_boxplus_via_operators(p, q, n));
            CHECK(r == rect_boxplus(q, p, n));
            if (d <= 6) {
                RationalPoly s = random_integer_rooted(rng, d, 0, 6);
                CHECK(rect_boxplus(r, s, n) == rect_boxplus(p, rect_boxplus(q, s, n), n));
            }
        }
    }
    // up to d = 12 as well
    for (int d = 9; d <= 12; ++d) {
        RationalPoly p = random_integer_rooted(rng, d, 0, 4);
        RationalPoly q = random_integer_rooted(rng, d, 0, 4);
        CHECK(rect_boxplus(p, q, Rational(2)) == rect_boxplus_via_operators(p, q, Rational(2)));
        CHECK(rect_boxplus(p, q, Q("1/2")) == rect_boxplus_via_operators(p, q, Q("1/2")));
    }
}

TEST_CASE("rectangular convolution tends to the square one")
{
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 8);
        RationalPoly p = random_integer_rooted(rng, d, 0, 5);
        RationalPoly q = random_integer_rooted(rng, d, 0, 5);
        RationalPoly sq = boxplus(p, q);
        Rational e1 = max_coeff_diff(rect_boxplus(p, q, Rational(1000)), sq);
        Rational e2 = max_coeff_diff(rect_boxplus(p, q, Rational(2000)), sq);
        if (e1 == 0) {
            CHECK(e2 == 0);
        } else {
            Rational ratio = e2 / e1;
            CHECK(ratio >= Rational(45, 100));
            CHECK(ratio <= Rational(55, 100));
        }
    }
}

TEST_CASE("convolution in bigfloat mode")
{
    std::mt19937_64 rng(101);
    RationalPoly p = random_integer_rooted(rng, 6), q = random_integer_rooted(rng, 6);
    RealPoly rp = to_real(p, 256), rq = to_real(q, 256);
    RealPoly exact = to_real(boxplus(p, q), 256);
    CHECK(max_coeff_diff(boxplus(rp, rq), exact) < BigReal("1e-60"));
    RealPoly rexact = to_real(rect_boxplus(p, q, Q("1/2")), 256);
    CHECK(max_coeff_diff(rect_boxplus(rp, rq, make_bigreal(Q("1/2"), 256)), rexact) < BigReal("1e-60"));
}
