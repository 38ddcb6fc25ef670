#include <doctest.h>

#include <set>

#include "finfree/convolve.hpp"
#include "finfree/cumulants.hpp"
#include "support.hpp"

using namespace finfree;
using namespace testing_support;

namespace {

using RSeries = Series<Rational>;

Rational pw(const Rational& x, int k)
{
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// sigma >= pi: every block of pi lies inside one block of sigma.
bool coarser(const Partition& sigma, const Partition& pi, int j)
{
    std::vector<int> label(static_cast<std::size_t>(j) + 1);
    for (std::size_t b = 0; b < sigma.size(); ++b)
        for (int e : sigma[b]) label[e] = static_cast<int>(b);
    for (const auto& block : pi)
        for (int e : block)
            if (label[e] != label[block.front()]) return false;
    return true;
}

// Moment-cumulant formula by explicit enumeration of pairs sigma >= pi.
Rational brute_cumulant(const RationalPoly& p, int j)
{
    const int d = p.degree();
    const auto parts = partitions(j);
    Rational total = 0;
    for (const auto& pi : parts) {
        Rational w = 0;
        for (const auto& sigma : parts) {
            if (!coarser(sigma, pi, j)) continue;
            Rational t = factorial(static_cast<int>(sigma.size()) - 1);
            for (const auto& W : sigma) t /= falling(Rational(d), static_cast<long>(W.size()));
            if (sigma.size() % 2) w -= t;
            else w += t;
        }
        Rational term = w * pw(Rational(d), static_cast<int>(pi.size()));
        for (const auto& V : pi) term *= moment(p, static_cast<int>(V.size())) * factorial(static_cast<int>(V.size()) - 1);
        if (pi.size() % 2) total -= term;
        else total += term;
    }
    return pw(Rational(d), j - 1) / factorial(j - 1) * total;
}

// K_{2k} by explicit enumeration of all set partitions.
Rational brute_K(const RationalPoly& p, int k, const Rational& n)
{
    const int d = p.degree();
    Rational total = 0;
    for (const auto& pi : partitions(k)) {
        Rational t = factorial(static_cast<int>(pi.size()) - 1);
        for (const auto& V : pi) {
            const int m = static_cast<int>(V.size());
            t *= factorial(m) * p.a(m) / (falling(Rational(d), m) * falling(Rational(n + d), m));
        }
        if (pi.size() % 2) total += t;
        else total -= t;
    }
    total /= factorial(k - 1);
    return k % 2 ? Rational(-total) : total;
}

const char* const ns_list[] = {"0", "1/2", "1", "3"};

} // namespace

TEST_CASE("partition enumeration")
{
    CHECK(partitions(1).size() == 1);
    CHECK(partitions(3).size() == 5);
    CHECK(partitions(6).size() == 203);
    CHECK(bell_number(14) == 190899322ULL);
    CHECK_THROWS_AS(partitions(0), DomainError);
    CHECK_THROWS_AS(PartitionStream(15), DomainError);

    for (int j = 1; j <= 9; ++j) {
        std::set<Partition> seen;
        PartitionStream stream(j);
        Partition part;
        while (stream.next(part)) {
            std::vector<int> cover;
            for (const auto& b : part) cover.insert(cover.end(), b.begin(), b.end());
            std::sort(cover.begin(), cover.end());
            std::vector<int> want(j);
            std::iota(want.begin(), want.end(), 1);
            CHECK(cover == want);
            seen.insert(part);
        }
        CHECK(seen.size() == bell_number(j));
        stream.restart();
        CHECK(stream.next(part));
        CHECK(part.size() == 1);

        std::uint64_t total = 0;
        for (const auto& t : partition_types(j)) total += t.count;
        CHECK(total == bell_number(j));
    }
}

TEST_CASE("coarsening weight against enumeration")
{
    for (int j = 1; j <= 6; ++j)
        for (int d = j; d <= j + 3; ++d) {
            const auto parts = partitions(j);
            for (const auto& pi : parts) {
                Rational w = 0;
                for (const auto& sigma : parts) {
                    if (!coarser(sigma, pi, j)) continue;
                    Rational t = factorial(static_cast<int>(sigma.size()) - 1);
                    for (const auto& W : sigma) t /= falling(Rational(d), static_cast<long>(W.size()));
                    if (sigma.size() % 2) w -= t;
                    else w += t;
                }
                std::vector<int> sizes;
                for (const auto& V : pi) sizes.push_back(static_cast<int>(V.size()));
                std::sort(sizes.rbegin(), sizes.rend());
                CHECK(coarsening_weight(sizes, d) == w);
            }
        }
}

TEST_CASE("moments")
{
    CHECK(moment(P({"1", "0", "-1"}), 2) == 1);
    CHECK(moment(P({"1", "-2", "0"}), 1) == 1);
    CHECK(moment(P({"1", "-6", "11", "-6"}), 3) == 12);

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 8);
        std::vector<Rational> roots;
        for (int i = 0; i < d; ++i) roots.push_back(Rational(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 3)));
        RationalPoly p = from_roots(roots);
        for (int j = 1; j <= 7; ++j) {
            Rational s = 0;
            for (const auto& r : roots) s += pw(r, j);
            CHECK(moment(p, j) == s / d);
        }
    }
}

TEST_CASE("finite free cumulants")
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 10);
        RationalPoly p = random_integer_rooted(rng, d);
        CHECK(ff_cumulant(p, 1) == moment(p, 1));
        RSeries R = finite_R(p);
        CHECK(R.order() == d - 1);
        for (int j = 1; j <= d; ++j) {
            Rational kappa = ff_cumulant(p, j);
            CHECK(kappa == R[j - 1]);
            if (j <= 5) CHECK(kappa == brute_cumulant(p, j));
        }
    }
    RationalPoly p = P({"1", "0", "-2"});
    CHECK(ff_cumulant(p, 2) == brute_cumulant(p, 2));
    CHECK(ff_cumulant(p, 2) == finite_R(p)[1]);
    CHECK_THROWS_AS(ff_cumulant(p, 3), DomainError);
}

TEST_CASE("rectangular cumulants")
{
    for (const char* ns : ns_list) CHECK(rect_cumulant_K(RationalPoly::monomial(4), 1, Q(ns)) == 0);
    CHECK_THROWS_AS(rect_cumulant_K(RationalPoly::monomial(3), 4, Rational(0)), DomainError);

    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 10);
        RationalPoly p = random_integer_rooted(rng, d, 0, 6);
        for (const char* ns : ns_list) {
            const Rational n = Q(ns);
            RSeries R = rect_finite_R(p, n);
            CHECK(R[0] == 0);
            for (int k = 1; k <= d; ++k) {
                const Rational K = rect_cumulant_K(p, k, n);
                if (k <= 6) CHECK(K == brute_K(p, k, n));
                CHECK(rect_cumulant_scaled(p, k, n) == R[k]);
                for (int j = 0; j <= d - k; ++j) {
                    RationalPoly pj = apply_Mn_power_normalized(p, n, j);
                    CHECK(rect_cumulant_K(pj, k, n) == K);
                    const Rational factor = pw(Rational(d - j, d), k - 1) * pw(Rational(n + d - j) / (n + d), k);
                    CHECK(rect_cumulant_scaled(pj, k, n) == factor * rect_cumulant_scaled(p, k, n));
                    if (n == 0) CHECK(factor == pw(Rational(d - j, d), 2 * k - 1));
                }
            }
        }
    }
}

TEST_CASE("operator symbols round-trip")
{
    CHECK(to_operator_symbol(RationalPoly::monomial(5), true) == RSeries::one(5));
    CHECK(to_rect_operator_symbol(RationalPoly::monomial(5), Rational(2), true) == RSeries::one(5));
    CHECK_THROWS_AS(to_rect_operator_symbol(RationalPoly::monomial(2), Rational(-1), true), DomainError);

    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 12);
        RationalPoly p = random_integer_rooted(rng, d);
        for (bool normalized : {true, false}) {
            CHECK(apply_operator_symbol(to_operator_symbol(p, normalized), d, normalized) == p);
            for (const char* ns : ns_list) {
                const Rational n = Q(ns);
                CHECK(apply_rect_operator_symbol(to_rect_operator_symbol(p, n, normalized), d, n, normalized) == p);
            }
        }
    }

    // e^{-D^2/(2d)} x^d has normalized symbol exp(-d s^2 / 2) and R-transform s
    for (int d = 1; d <= 12; ++d) {
        RSeries g(d);
        if (d >= 2) g[2] = Rational(-d, 2);
        RationalPoly h = apply_operator_symbol(exp_series(g), d, true);
        CHECK(to_operator_symbol(h, true) == exp_series(g));
        RSeries s(d - 1);
        if (d >= 2) s[1] = 1;
        CHECK(finite_R(h) == s);
    }
    CHECK(finite_R(RationalPoly::monomial(6)) == RSeries(5));
    CHECK(rect_finite_R(RationalPoly::monomial(6), Rational(1)) == RSeries(6));
}

TEST_CASE("R-transforms are additive")
{
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 10);
        RationalPoly p = random_integer_rooted(rng, d, 0, 5);
        RationalPoly q = random_integer_rooted(rng, d, 0, 5);
        CHECK(finite_R(boxplus(p, q)) == finite_R(p) + finite_R(q));
        for (const char* ns : ns_list) {
            const Rational n = Q(ns);
            CHECK(rect_finite_R(rect_boxplus(p, q, n), n) == rect_finite_R(p, n) + rect_finite_R(q, n));
        }
    }
}

TEST_CASE("R-transform flow identities hold exactly")
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 12);
        RationalPoly p = random_integer_rooted(rng, d);
        for (int j = 0; j < d; ++j) {
            auto rep = derivative_flow_R_identity_check(p, j);
            CHECK(rep.max_discrepancy == 0);
            CHECK(rep.order == d - j - 1);
            for (const char* ns : {"0", "1/2", "3"}) {
                auto rrep = mn_flow_R_identity_check(p, Q(ns), j);
                CHECK(rrep.max_discrepancy == 0);
            }
        }
        CHECK_THROWS_AS(derivative_flow_R_identity_check(p, d), DomainError);
    }
}

TEST_CASE("rectangular R tends to s times the square R")
{
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 5; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 9);
        RationalPoly p = random_integer_rooted(rng, d);
        RSeries target = shift_up(finite_R(p));
        Rational prev = -1;
        for (long n : {1000L, 2000L, 4000L}) {
            Rational gap = max_series_diff(rect_finite_R(p, Rational(n)), target);
            if (prev >= 0) CHECK(gap <= Rational(55, 100) * prev);
            prev = gap;
        }
    }
}
