#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "finfree/appell.hpp"
#include "finfree/convolve.hpp"
#include "finfree/cumulants.hpp"
#include "finfree/io.hpp"
#include "finfree/matrix_oracle.hpp"
#include "finfree/measures.hpp"
#include "finfree/roots.hpp"
#include "finfree/scenarios.hpp"

using namespace finfree;

namespace {

void emit(const Json& j, const std::string& out)
{
    if (out.empty()) std::cout << dump(j);
    else write_json_file(out, j);
}

int cmd_convolve(const std::string& op, const std::string& n, const std::vector<std::string>& in, const std::string& out)
{
    const RationalPoly p = rational_poly_from_json(read_json_file(in.at(0)));
    const RationalPoly q = rational_poly_from_json(read_json_file(in.at(1)));
    if (op == "boxplus") emit(to_json(boxplus(p, q)), out);
    else emit(to_json(rect_boxplus(p, q, parse_rational(n))), out);
    return 0;
}

int cmd_transform(const std::string& what, const std::string& n_text, int order, const std::string& in)
{
    const RationalPoly p = rational_poly_from_json(read_json_file(in));
    const Rational n = n_text.empty() ? Rational(0) : parse_rational(n_text);
    Json out = Json::array();
    if (what == "cumulants") {
        const int top = order > 0 ? std::min(order, p.degree()) : p.degree();
        for (int k = 1; k <= top; ++k)
            out.push_back(to_string(n_text.empty() ? ff_cumulant(p, k) : rect_cumulant_scaled(p, k, n)));
        std::cout << dump(out);
        return 0;
    }
    Series<Rational> r = what == "R" ? finite_R(p) : rect_finite_R(p, n);
    if (order >= 0 && order < r.order()) r = truncate(r, order);
    std::cout << dump(to_json(r));
    return 0;
}

int cmd_appell(const std::string& data_path, int d, bool normalized, bool lpi, const std::string& n_text,
               const std::string& tail_bound, const std::string& out)
{
    const Json doc = read_json_file(data_path);
    if (lpi) {
        const LpiData data = lpi_data_from_json(doc);
        const Rational n = parse_rational(n_text);
        emit(to_json(normalized ? normalized_laguerre_appell(data, d, n) : laguerre_appell(data, d, n)), out);
        return 0;
    }
    const LaguerrePolyaData data = lp_data_from_json(doc);
    const RationalPoly p = normalized ? normalized_appell(data, d) : appell_poly(lp_series(data, d), d);
    if (tail_bound.empty()) {
        emit(to_json(p), out);
        return 0;
    }
    // the stored roots are a truncation; report the neglected inverse-square mass next to the kept one
    const Rational kept = inverse_square_sum(data), tail = parse_rational(tail_bound);
    if (tail < 0) throw ParseError("--tail-bound must be nonnegative");
    Json j;
    j["polynomial"] = to_json(p);
    j["inverse_square_sum"] = to_string(kept);
    j["tail_bound"] = to_string(tail);
    j["relative_tail"] = kept + tail == 0 ? "0" : to_string(Rational(tail / (kept + tail)));
    emit(j, out);
    return 0;
}

ReferenceLaw parse_law(const std::string& s)
{
    if (s == "semicircle") return Semicircle{};
    if (s == "cauchy") return Cauchy{};
    if (s.rfind("mp:", 0) == 0) {
        const double rate = to_double(parse_rational(s.substr(3)));
        if (!(rate > 0)) throw ParseError("--law mp:c needs c > 0");
        return MarchenkoPastur{rate, 1};
    }
    throw ParseError("unknown law '" + s + "'");
}

int cmd_measure(const std::string& law_text, const std::string& in, bool ks, const std::string& csv, unsigned bits)
{
    const ReferenceLaw law = parse_law(law_text);
    const AnyPoly any = poly_from_json(read_json_file(in), bits);
    RootOptions opts;
    opts.precision_bits = bits;
    const RootReport rep = std::visit([&](const auto& p) { return find_roots(p, opts); }, any);
    const AtomicMeasure mu = erm(rep.roots);
    Json j;
    j["law"] = law_text;
    j["degree"] = static_cast<int>(rep.roots.size());
    j["iterations"] = rep.iterations;
    j["precision_bits"] = rep.precision_bits;
    if (ks) j["ks"] = fixed_precision(kolmogorov_distance(mu, law));
    if (!csv.empty()) {
        std::ofstream out(csv);
        if (!out) throw std::runtime_error("cannot write '" + csv + "'");
        write_cdf_csv(out, mu, law);
        j["csv"] = csv;
    }
    std::cout << dump(j);
    return 0;
}

Eigen::MatrixXd integer_matrix(std::mt19937_64& rng, int rows, int cols)
{
    std::uniform_int_distribution<int> pick(-2, 2);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = pick(rng);
    return m;
}

Eigen::MatrixXd integer_diagonal(std::mt19937_64& rng, int d)
{
    std::uniform_int_distribution<int> pick(-4, 4);
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = pick(rng);
    return v.asDiagonal();
}

Json matrix_json(const Eigen::MatrixXd& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

// Inputs are integer matrices drawn from the seed, so a run is reproducible from its flags.
int cmd_mc(const std::string& check, int d, int n, int ell, long samples, std::uint64_t seed, const std::string& out)
{
    if (d < 1 || n < 0 || samples < 2) throw ParseError("mc: need d >= 1, n >= 0, samples >= 2");
    std::mt19937_64 rng(seed);
    Json inputs;
    McReport r;
    if (check == "boxplus") {
        const Eigen::MatrixXd A = integer_diagonal(rng, d), B = integer_diagonal(rng, d);
        inputs = Json{{"A", matrix_json(A)}, {"B", matrix_json(B)}};
        r = mc_boxplus(A, B, samples, seed);
    } else if (check == "compress") {
        const Eigen::MatrixXd A = integer_diagonal(rng, d);
        inputs = Json{{"A", matrix_json(A)}, {"ell", ell}};
        r = mc_compression(A, ell, samples, seed);
    } else if (check == "rect-compress") {
        const Eigen::MatrixXd A = integer_matrix(rng, d, d + n);
        inputs = Json{{"A", matrix_json(A)}, {"ell", ell}};
        r = mc_rect_compression(A, ell, samples, seed);
    } else {
        const Eigen::MatrixXd A = integer_matrix(rng, d, d + n), B = integer_matrix(rng, d, d + n);
        inputs = Json{{"A", matrix_json(A)}, {"B", matrix_json(B)}};
        r = mc_rect_boxplus(A, B, samples, seed);
    }
    Json j;
    j["check"] = check;
    j["inputs"] = inputs;
    j["report"] = to_json(r);
    emit(j, out);
    return 0;
}

int cmd_run(const std::string& scenario, const std::string& config, const std::string& out,
            const std::vector<std::string>& sets, const std::string& degrees)
{
    ConfigValues overrides = config.empty() ? ConfigValues{} : read_config_file(config);
    for (const auto& s : sets) {
        const ConfigValues one = parse_config_text(s);
        if (one.size() != 1) throw ParseError("--set expects key=value");
        overrides[one.begin()->first] = one.begin()->second;
    }
    if (!degrees.empty()) overrides["degrees"] = degrees;
    const Verdict v = run_scenario(make_config(scenario, overrides, out));
    const Json j = to_json(v);
    if (!out.empty()) std::filesystem::create_directories(out);
    if (!out.empty()) write_json_file((std::filesystem::path(out) / (scenario + ".json")).string(), j);
    std::cout << dump(j);
    std::cerr << scenario << ": " << (v.pass ? "PASS" : "FAIL") << " (" << v.runtime_seconds << " s)\n";
    return v.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"finite free probability toolkit"};
    app.require_subcommand(1);

    std::string op = "boxplus", n_text, out;
    std::vector<std::string> in_pair;
    auto* conv = app.add_subcommand("convolve", "finite free additive or rectangular convolution");
    conv->add_option("--op", op)->check(CLI::IsMember({"boxplus", "rect"}));
    conv->add_option("--n", n_text, "rectangularity (rational)")->default_val("0");
    conv->add_option("--in", in_pair, "two polynomial JSON files")->required()->expected(2);
    conv->add_option("--out", out);

    std::string what = "R", t_n, t_in;
    int order = -1;
    auto* tr = app.add_subcommand("transform", "finite R-transforms and cumulants");
    tr->add_option("--what", what)->check(CLI::IsMember({"R", "rectR", "cumulants"}));
    tr->add_option("--n", t_n, "rectangularity; with cumulants selects the rectangular ones");
    tr->add_option("--order", order, "truncation order");
    tr->add_option("--in", t_in)->required();

    std::string data_path, a_n = "0", tail_bound, a_out;
    int a_d = 0;
    bool normalized = false, lpi = false;
    auto* ap = app.add_subcommand("appell", "Appell and Laguerre-Appell polynomials");
    ap->add_option("--data", data_path)->required();
    ap->add_option("--d", a_d)->required()->check(CLI::PositiveNumber);
    ap->add_flag("--normalized", normalized);
    ap->add_flag("--lpi", lpi, "data is an LPI function g; builds the Laguerre-Appell polynomial");
    ap->add_option("--n", a_n);
    ap->add_option("--tail-bound", tail_bound, "bound on the neglected sum of x^-2 over dropped roots");
    ap->add_option("--out", a_out);

    std::string law, m_in, csv;
    bool ks = false;
    unsigned bits = default_precision_bits;
    auto* me = app.add_subcommand("measure", "empirical root measure against a reference law");
    me->add_option("--law", law)->required();
    me->add_option("--in", m_in)->required();
    me->add_flag("--ks", ks);
    me->add_option("--csv", csv);
    me->add_option("--precision", bits);

    std::string check = "boxplus", mc_out;
    int mc_d = 4, mc_n = 2, mc_ell = 2;
    long samples = 200000;
    std::uint64_t seed = 42;
    auto* mc = app.add_subcommand("mc", "Monte Carlo check of an expected characteristic polynomial");
    mc->add_option("--check", check)->check(CLI::IsMember({"boxplus", "compress", "rect-compress", "rect-boxplus"}));
    mc->add_option("--d", mc_d);
    mc->add_option("--n", mc_n);
    mc->add_option("--ell", mc_ell);
    mc->add_option("--samples", samples);
    mc->add_option("--seed", seed);
    mc->add_option("--out", mc_out);

    std::string scenario, config, r_out, degrees;
    std::vector<std::string> sets;
    auto* run = app.add_subcommand("run", "run a scenario and print its verdict");
    run->add_option("scenario", scenario)->required();
    run->add_option("--config", config, "flat key = value file");
    run->add_option("--out", r_out, "directory for the verdict JSON and CSV artifacts");
    run->add_option("--set", sets, "override one key, key=value");
    run->add_option("--d", degrees, "degree list, comma separated");

    auto* list = app.add_subcommand("list", "list scenarios and their default configuration");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*conv) return cmd_convolve(op, n_text, in_pair, out);
        if (*tr) return cmd_transform(what, t_n, order, t_in);
        if (*ap) return cmd_appell(data_path, a_d, normalized, lpi, a_n, tail_bound, a_out);
        if (*me) return cmd_measure(law, m_in, ks, csv, bits);
        if (*mc) return cmd_mc(check, mc_d, mc_n, mc_ell, samples, seed, mc_out);
        if (*run) return cmd_run(scenario, config, r_out, sets, degrees);
        if (*list) {
            Json j;
            for (const auto& name : scenario_names()) {
                Json c;
                for (const auto& [k, v] : default_config(name)) c[k] = v;
                j[name] = c;
            }
            std::cout << dump(j);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
