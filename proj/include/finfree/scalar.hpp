#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "finfree/errors.hpp"

namespace finfree {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using BigReal = boost::multiprecision::mpfr_float;

constexpr unsigned default_precision_bits = 256;

// Precision in bits actually carried by a value.
unsigned precision_of(const BigReal& x);
inline unsigned precision_of(const Rational&) { return 0; }

// Sets the precision given to newly created BigReal values for the lifetime of the scope.
// The boost default is process-wide, so scopes must not be opened concurrently at different
// precisions.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

    unsigned bits() const { return bits_; }

private:
    unsigned saved_digits10_;
    unsigned bits_;
};

// Round x in place to exactly `bits` of precision.
void set_precision(BigReal& x, unsigned bits);
BigReal make_bigreal(const Rational& q, unsigned bits);

// Rational parsing accepts "p/q", integers and plain decimals ("0.125", "-3e-2"); result is canonical.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

// Hex-float ("0x1.8p+1") round-trips bit-exactly; decimal input is rounded to `bits`.
BigReal parse_bigreal(const std::string& s, unsigned bits);
std::string to_hex_string(const BigReal& x);

double to_double(const Rational& q);
double to_double(const BigReal& x);

template <class S>
struct field_traits;

template <>
struct field_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "rational";
    static Rational from_rational(const Rational& q) { return q; }
};

template <>
struct field_traits<BigReal> {
    static constexpr bool exact = false;
    static constexpr const char* name = "bigfloat";
    // Uses the current default precision.
    static BigReal from_rational(const Rational& q) { return BigReal(q); }
};

template <class S>
S from_int(long v)
{
    return S(v);
}

// Falling factorial (x)_k = x (x-1) ... (x-k+1); (x)_0 = 1.
template <class S>
S falling(const S& x, long k)
{
    S r(1);
    for (long i = 0; i < k; ++i) r *= (x - S(i));
    return r;
}

// x^k for k >= 0 by repeated squaring.
template <class S>
S int_pow(S x, long k)
{
    S r(1);
    while (k > 0) {
        if (k & 1) r *= x;
        k >>= 1;
        if (k) x *= x;
    }
    return r;
}

template <class S>
S abs_value(const S& x)
{
    return x < 0 ? S(-x) : x;
}

} // namespace finfree
