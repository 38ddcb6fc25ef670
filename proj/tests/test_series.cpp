#include <doctest.h>

#include "finfree/cumulants.hpp"
#include "finfree/series.hpp"
#include "support.hpp"

using namespace finfree;
using namespace testing_support;

namespace {

using RSeries = Series<Rational>;

RSeries S_(std::initializer_list<const char*> coeffs)
{
    std::vector<Rational> c;
    for (auto s : coeffs) c.push_back(Q(s));
    return RSeries(std::move(c));
}

RSeries exp_coefficients(int m)
{
    RSeries e(m);
    for (int k = 0; k <= m; ++k) e[k] = Rational(1) / factorial(k);
    return e;
}

RSeries random_unit_series(std::mt19937_64& rng, int m)
{
    RSeries f(m);
    f[0] = 1;
    for (int k = 1; k <= m; ++k) f[k] = Rational(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1);
    return f;
}

} // namespace

TEST_CASE("series arithmetic basics")
{
    RSeries f = S_({"1", "2", "3"});
    RSeries g = S_({"1", "-1", "0", "5"});
    CHECK((f + g) == S_({"2", "1", "3"}));
    CHECK((f * g) == S_({"1", "1", "1"}));
    CHECK((f * inverse(f)) == RSeries::one(2));
    CHECK(derivative(g) == S_({"-1", "0", "15"}));
    CHECK(scale_argument(f, Rational(2)) == S_({"1", "4", "12"}));
    CHECK(shift_up(f) == S_({"0", "1", "2"}));
    CHECK(truncate(f, 4) == S_({"1", "2", "3", "0", "0"}));
    CHECK_THROWS_AS(inverse(S_({"0", "1"})), DomainError);
}

TEST_CASE("exp and log are inverse")
{
    CHECK(exp_series(S_({"0", "1", "0", "0", "0"})) == exp_coefficients(4));
    // e^{-s^2/2}
    CHECK(exp_series(S_({"0", "0", "-1/2", "0", "0"})) == S_({"1", "0", "-1/2", "0", "1/8"}));
    CHECK(log_series(exp_coefficients(6)) == S_({"0", "1", "0", "0", "0", "0", "0"}));

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        RSeries f = random_unit_series(rng, 1 + static_cast<int>(rng() % 10));
        CHECK(exp_series(log_series(f)) == f);
    }
    CHECK_THROWS_AS(exp_series(S_({"1", "1"})), DomainError);
    CHECK_THROWS_AS(log_series(S_({"2", "1"})), DomainError);
}

TEST_CASE("pow_series matches repeated multiplication")
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        RSeries f = random_unit_series(rng, 8);
        RSeries brute = RSeries::one(8);
        for (unsigned k = 1; k <= 7; ++k) {
            brute = brute * f;
            CHECK(pow_series(f, k) == brute);
        }
    }
}

TEST_CASE("log derivative examples")
{
    // log e^s = s
    CHECK(log_derivative(exp_coefficients(6)) == RSeries::one(5));
    // (log(1-s))' = -1/(1-s)
    RSeries f = truncate(S_({"1", "-1"}), 7);
    CHECK(log_derivative(f) == S_({"-1", "-1", "-1", "-1", "-1", "-1", "-1"}));
    CHECK_THROWS_AS(log_derivative(S_({"2", "1"})), DomainError);
    CHECK_THROWS_AS(log_derivative_partition(S_({"2", "1"})), DomainError);
}

TEST_CASE("log derivative: partition formula agrees with series division")
{
    std::mt19937_64 rng(31);
    for (int m = 1; m <= 10; ++m)
        for (int trial = 0; trial < 5; ++trial) {
            RSeries f = random_unit_series(rng, m);
            CHECK(log_derivative_partition(f) == log_derivative(f));
        }
}

TEST_CASE("log derivative truncation locality")
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 8);
        RSeries f = random_unit_series(rng, m + 1);
        RSeries g = f;
        g[m + 1] += Rational(17, 3);
        RSeries lf = log_derivative(f), lg = log_derivative(g);
        for (int k = 0; k < m; ++k) CHECK(lf[k] == lg[k]);
        CHECK(lf[m] != lg[m]);
    }
}

TEST_CASE("bigfloat series keep the working precision")
{
    PrecisionScope scope(128);
    Series<BigReal> f(3);
    f[0] = 1;
    f[1] = BigReal(1) / 3;
    Series<BigReal> l = log_series(f);
    for (const auto& c : l.coeffs()) CHECK(precision_of(c) == precision_of(f[1]));
    CHECK(std::abs(evaluate_at(f, 0.5) - (1.0 + 1.0 / 6.0)) < 1e-15);
}
