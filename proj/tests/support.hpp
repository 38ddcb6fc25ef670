#pragma once

#include <random>
#include <string>
#include <vector>

#include "finfree/poly.hpp"

namespace testing_support {

using finfree::Rational;
using finfree::RationalPoly;

inline Rational Q(const std::string& s)
{
    return finfree::parse_rational(s);
}

inline RationalPoly P(std::initializer_list<const char*> coeffs)
{
    std::vector<Rational> c;
    for (auto s : coeffs) c.push_back(Q(s));
    return RationalPoly(std::move(c));
}

// Monic polynomial with integer roots drawn uniformly from [lo, hi].
inline RationalPoly random_integer_rooted(std::mt19937_64& rng, int d, int lo = -5, int hi = 5)
{
    std::uniform_int_distribution<int> pick(lo, hi);
    std::vector<Rational> roots;
    for (int i = 0; i < d; ++i) roots.push_back(Rational(pick(rng)));
    return finfree::from_roots(roots);
}

// Brute-force k-th derivative for oracle use.
inline RationalPoly nth_derivative(RationalPoly p, int k)
{
    for (int i = 0; i < k; ++i) p = finfree::differentiate(p);
    return p;
}

inline Rational factorial(int n)
{
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace testing_support
