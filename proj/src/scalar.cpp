#include "finfree/scalar.hpp"

#include <cctype>
#include <cstdio>
#include <gmp.h>
#include <mpfr.h>

namespace finfree {

namespace {

// Base-10 parse; the string constructor would read a leading zero as octal.
BigInt decimal_bigint(const std::string& s)
{
    BigInt v;
    if (mpz_set_str(v.backend().data(), s.c_str(), 10) != 0) throw ParseError("not an integer: '" + s + "'");
    return v;
}


unsigned digits10_for_bits(unsigned bits)
{
    // Smallest digits10 for which boost allocates at least `bits`.
    unsigned d10 = std::max(1u, bits * 301u / 1000u);
    while (boost::multiprecision::detail::digits10_2_2(d10) < bits) ++d10;
    while (d10 > 1 && boost::multiprecision::detail::digits10_2_2(d10 - 1) >= bits) --d10;
    return d10;
}

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_integer_literal(const std::string& s)
{
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

BigInt parse_integer(const std::string& s)
{
    if (!is_integer_literal(s)) throw ParseError("not an integer: '" + s + "'");
    std::string t = s[0] == '+' ? s.substr(1) : s;
    return decimal_bigint(t);
}

Rational parse_decimal(const std::string& s)
{
    std::string mant = s;
    long exponent = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        std::string ex = s.substr(epos + 1);
        if (!is_integer_literal(ex)) throw ParseError("bad exponent in '" + s + "'");
        exponent = std::stol(ex);
    }
    bool neg = false;
    std::size_t i = 0;
    if (i < mant.size() && (mant[i] == '+' || mant[i] == '-')) {
        neg = mant[i] == '-';
        ++i;
    }
    std::string digits;
    long frac = 0;
    bool seen_point = false;
    for (; i < mant.size(); ++i) {
        char c = mant[i];
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) ++frac;
        } else {
            throw ParseError("not a number: '" + s + "'");
        }
    }
    if (digits.empty()) throw ParseError("not a number: '" + s + "'");
    Rational q{decimal_bigint(digits)};
    long shift = exponent - frac;
    BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
    if (shift >= 0)
        q *= Rational(ten_pow);
    else
        q /= Rational(ten_pow);
    return neg ? Rational(-q) : q;
}

} // namespace

unsigned precision_of(const BigReal& x)
{
    return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

PrecisionScope::PrecisionScope(unsigned bits)
    : saved_digits10_(BigReal::default_precision()), bits_(bits)
{
    BigReal::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope()
{
    BigReal::default_precision(saved_digits10_);
}

void set_precision(BigReal& x, unsigned bits)
{
    mpfr_prec_round(x.backend().data(), static_cast<mpfr_prec_t>(bits), MPFR_RNDN);
}

BigReal make_bigreal(const Rational& q, unsigned bits)
{
    PrecisionScope scope(bits);
    BigReal x(q);
    set_precision(x, bits);
    return x;
}

Rational parse_rational(const std::string& raw)
{
    std::string s = trim(raw);
    if (s.empty()) throw ParseError("empty rational");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num = parse_integer(trim(s.substr(0, slash)));
        BigInt den = parse_integer(trim(s.substr(slash + 1)));
        if (den == 0) throw ParseError("zero denominator in '" + s + "'");
        return Rational(num, den);  // the two-argument constructor canonicalizes
    }
    if (is_integer_literal(s)) return Rational(parse_integer(s));
    return parse_decimal(s);
}

std::string to_string(const Rational& q)
{
    return q.str();
}

BigReal parse_bigreal(const std::string& raw, unsigned bits)
{
    std::string s = trim(raw);
    PrecisionScope scope(bits);
    BigReal x;
    set_precision(x, bits);
    char* end = nullptr;
    mpfr_strtofr(x.backend().data(), s.c_str(), &end, 0, MPFR_RNDN);
    if (end == s.c_str() || *end != '\0') throw ParseError("not a big float: '" + s + "'");
    return x;
}

std::string to_hex_string(const BigReal& x)
{
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%Ra", x.backend().data());
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

double to_double(const Rational& q)
{
    mpfr_t t;
    mpfr_init2(t, 53);
    mpfr_set_q(t, q.backend().data(), MPFR_RNDN);
    double v = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return v;
}

double to_double(const BigReal& x)
{
    return mpfr_get_d(x.backend().data(), MPFR_RNDN);
}

} // namespace finfree
