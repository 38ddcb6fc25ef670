#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "finfree/appell.hpp"
#include "finfree/atoms.hpp"
#include "finfree/matrix_oracle.hpp"
#include "finfree/poly.hpp"
#include "finfree/series.hpp"

namespace finfree {

// Insertion-ordered so that emitted documents have a fixed key order.
using Json = nlohmann::ordered_json;

// {degree, field: "rational"|"bigfloat", precision_bits?, coeffs: [strings]}, descending.
// Rational coefficients are written as "p/q"; big floats as hex floats, which round-trip exactly.
Json to_json(const RationalPoly& p);
Json to_json(const RealPoly& p);

using AnyPoly = std::variant<RationalPoly, RealPoly>;

// ParseError on malformed documents (bad field, degree and coefficient count disagreeing,
// leading zero coefficient). Big-float coefficients may be hex or decimal; decimal ones are
// rounded to precision_bits (default_bits when absent).
AnyPoly poly_from_json(const Json& j, unsigned default_bits = default_precision_bits);
// ParseError for a bigfloat document.
RationalPoly rational_poly_from_json(const Json& j);
// Rational documents are rounded to `bits`.
RealPoly real_poly_from_json(const Json& j, unsigned bits = default_precision_bits);

Json to_json(const Series<Rational>& f);
Json to_json(const Series<BigReal>& f);

// {c, sigma2, roots: [rational strings]}; missing c and sigma2 default to 0.
Json to_json(const LaguerrePolyaData& data);
LaguerrePolyaData lp_data_from_json(const Json& j);
// {sigma2, roots_sq: [rational strings]}.
Json to_json(const LpiData& data);
LpiData lpi_data_from_json(const Json& j);

Json to_json(const McReport& r);
Json to_json(const AtomicMeasure& mu);

// x rounded to `digits` significant decimal digits, so that emitted documents do not depend on
// the last bits of a floating computation. Non-finite values pass through.
double fixed_precision(double x, int digits = 12);

Json read_json_file(const std::string& path);
// Two-space indented, newline terminated.
void write_json_file(const std::string& path, const Json& j);
std::string dump(const Json& j);

} // namespace finfree
