#include "finfree/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace finfree {

namespace {

Rational rational_value(const Json& v, const char* what)
{
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw ParseError(std::string(what) + ": expected a rational string or an integer");
}

std::vector<Rational> rational_list(const Json& j, const char* key)
{
    std::vector<Rational> out;
    if (!j.contains(key)) return out;
    const Json& arr = j.at(key);
    if (!arr.is_array()) throw ParseError(std::string(key) + ": expected an array");
    for (const auto& v : arr) out.push_back(rational_value(v, key));
    return out;
}

Rational rational_field(const Json& j, const char* key)
{
    return j.contains(key) ? rational_value(j.at(key), key) : Rational(0);
}

const Json& coeff_array(const Json& j)
{
    if (!j.is_object() || !j.contains("coeffs") || !j.at("coeffs").is_array())
        throw ParseError("polynomial: expected an object with a coeffs array");
    const Json& c = j.at("coeffs");
    if (j.contains("degree")) {
        if (!j.at("degree").is_number_integer()) throw ParseError("polynomial: degree must be an integer");
        if (j.at("degree").get<long long>() != static_cast<long long>(c.size()) - 1)
            throw ParseError("polynomial: degree does not match the number of coefficients");
    }
    return c;
}

template <class S>
Poly<S> checked(Poly<S> p, std::size_t count)
{
    if (p.coeffs().size() != count) throw ParseError("polynomial: leading coefficient is zero");
    return p;
}

std::string field_of(const Json& j)
{
    if (!j.contains("field")) return "rational";
    if (!j.at("field").is_string()) throw ParseError("polynomial: field must be a string");
    const std::string f = j.at("field").get<std::string>();
    if (f != "rational" && f != "bigfloat") throw ParseError("polynomial: unknown field '" + f + "'");
    return f;
}

RealPoly parse_real(const Json& j, unsigned bits)
{
    const Json& c = coeff_array(j);
    std::vector<BigReal> coeffs;
    for (const auto& v : c) {
        if (v.is_string()) coeffs.push_back(parse_bigreal(v.get<std::string>(), bits));
        else if (v.is_number_integer()) coeffs.push_back(make_bigreal(Rational(v.get<long long>()), bits));
        else throw ParseError("polynomial: coefficients must be strings");
    }
    return checked(RealPoly(std::move(coeffs)), c.size());
}

RationalPoly parse_rational_poly(const Json& j)
{
    const Json& c = coeff_array(j);
    std::vector<Rational> coeffs;
    for (const auto& v : c) coeffs.push_back(rational_value(v, "coeffs"));
    return checked(RationalPoly(std::move(coeffs)), c.size());
}

unsigned bits_of(const Json& j, unsigned fallback)
{
    if (!j.contains("precision_bits")) return fallback;
    const Json& b = j.at("precision_bits");
    if (!b.is_number_unsigned() || b.get<unsigned long long>() < 2)
        throw ParseError("polynomial: precision_bits must be an integer >= 2");
    return static_cast<unsigned>(b.get<unsigned long long>());
}

} // namespace

Json to_json(const RationalPoly& p)
{
    Json j;
    j["degree"] = p.degree();
    j["field"] = "rational";
    Json c = Json::array();
    for (const auto& x : p.coeffs()) c.push_back(to_string(x));
    j["coeffs"] = std::move(c);
    return j;
}

Json to_json(const RealPoly& p)
{
    Json j;
    j["degree"] = p.degree();
    j["field"] = "bigfloat";
    j["precision_bits"] = p.is_zero() ? default_precision_bits : min_precision(p);
    Json c = Json::array();
    for (const auto& x : p.coeffs()) c.push_back(to_hex_string(x));
    j["coeffs"] = std::move(c);
    return j;
}

AnyPoly poly_from_json(const Json& j, unsigned default_bits)
{
    if (field_of(j) == "rational") return parse_rational_poly(j);
    return parse_real(j, bits_of(j, default_bits));
}

RationalPoly rational_poly_from_json(const Json& j)
{
    if (field_of(j) != "rational") throw ParseError("polynomial: expected field 'rational'");
    return parse_rational_poly(j);
}

RealPoly real_poly_from_json(const Json& j, unsigned bits)
{
    if (field_of(j) == "bigfloat") return parse_real(j, bits_of(j, bits));
    const RationalPoly p = parse_rational_poly(j);
    std::vector<BigReal> c;
    for (const auto& x : p.coeffs()) c.push_back(make_bigreal(x, bits));
    return RealPoly(std::move(c));
}

Json to_json(const Series<Rational>& f)
{
    Json c = Json::array();
    for (const auto& x : f.coeffs()) c.push_back(to_string(x));
    return c;
}

Json to_json(const Series<BigReal>& f)
{
    Json c = Json::array();
    for (const auto& x : f.coeffs()) c.push_back(to_hex_string(x));
    return c;
}

Json to_json(const LaguerrePolyaData& data)
{
    Json j;
    j["c"] = to_string(data.c);
    j["sigma2"] = to_string(data.sigma2);
    Json r = Json::array();
    for (const auto& x : data.roots) r.push_back(to_string(x));
    j["roots"] = std::move(r);
    return j;
}

LaguerrePolyaData lp_data_from_json(const Json& j)
{
    if (!j.is_object()) throw ParseError("Laguerre-Polya data: expected an object");
    LaguerrePolyaData data;
    data.c = rational_field(j, "c");
    data.sigma2 = rational_field(j, "sigma2");
    data.roots = rational_list(j, "roots");
    try {
        validate(data);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return data;
}

Json to_json(const LpiData& data)
{
    Json j;
    j["sigma2"] = to_string(data.sigma2);
    Json r = Json::array();
    for (const auto& x : data.roots_sq) r.push_back(to_string(x));
    j["roots_sq"] = std::move(r);
    return j;
}

LpiData lpi_data_from_json(const Json& j)
{
    if (!j.is_object()) throw ParseError("LPI data: expected an object");
    LpiData data;
    data.sigma2 = rational_field(j, "sigma2");
    data.roots_sq = rational_list(j, "roots_sq");
    try {
        validate(data);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return data;
}

Json to_json(const McReport& r)
{
    Json j;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["max_abs_z"] = fixed_precision(r.max_abs_z());
    j["all_zero_variance"] = r.all_zero_variance();
    Json c = Json::array();
    for (const auto& k : r.coefficients) {
        Json e;
        e["index"] = k.index;
        e["mean"] = fixed_precision(k.mean);
        e["standard_error"] = fixed_precision(k.standard_error);
        e["target"] = fixed_precision(k.target);
        e["z_score"] = fixed_precision(k.z_score);
        e["zero_variance"] = k.zero_variance;
        c.push_back(std::move(e));
    }
    j["coefficients"] = std::move(c);
    return j;
}

Json to_json(const AtomicMeasure& mu)
{
    Json a = Json::array();
    for (const auto& atom : mu.atoms) a.push_back({fixed_precision(atom.location), fixed_precision(atom.weight)});
    return a;
}

double fixed_precision(double x, int digits)
{
    if (!std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
    return std::strtod(buf, nullptr);
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

void write_json_file(const std::string& path, const Json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << dump(j);
}

} // namespace finfree
