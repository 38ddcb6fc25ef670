#include "finfree/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "finfree/appell.hpp"
#include "finfree/convolve.hpp"
#include "finfree/cumulants.hpp"
#include "finfree/matrix_oracle.hpp"
#include "finfree/measures.hpp"
#include "finfree/roots.hpp"

namespace finfree {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long parse_long(const std::string& key, const std::string& s)
{
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw ParseError("config '" + key + "': not an integer: '" + s + "'");
    return v;
}

Json num(double x)
{
    return fixed_precision(x);
}

std::string exact(const Rational& q)
{
    return to_string(q);
}

Rational abs_q(const Rational& q)
{
    return q < 0 ? Rational(-q) : q;
}

// Max of |discrepancy| over a family of exact checks.
struct Tally {
    std::string name;
    Rational max = 0;
    long checks = 0;

    void add(const Rational& x)
    {
        const Rational a = abs_q(x);
        if (a > max) max = a;
        ++checks;
    }
    Json json() const { return Json{{"identity", name}, {"checks", checks}, {"max_discrepancy", exact(max)}}; }
};

RootOptions root_options(const ScenarioConfig& cfg)
{
    RootOptions o;
    o.precision_bits = static_cast<unsigned>(cfg.get_int("precision_bits"));
    return o;
}

AtomicMeasure root_measure(const RationalPoly& p, const RootOptions& opts)
{
    return erm(find_roots(p, opts).roots);
}

RationalPoly random_rooted(std::mt19937_64& rng, int d, int lo, int hi)
{
    std::uniform_int_distribution<int> pick(lo, hi);
    std::vector<Rational> roots;
    for (int i = 0; i < d; ++i) roots.push_back(Rational(pick(rng)));
    return from_roots(roots);
}

Series<Rational> cos_series(int order)
{
    Series<Rational> f(order);
    Rational fact = 1;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        if (k % 2 == 0) f[k] = Rational((k / 2) % 2 ? -1 : 1) / fact;
    }
    return f;
}

RationalPoly shifted_power(int d, const Rational& root)
{
    return from_roots(std::vector<Rational>(static_cast<std::size_t>(d), root));
}

// Strictly decreasing sequence.
bool decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

class Context {
public:
    Context(const ScenarioConfig& cfg, Verdict& v) : cfg_(cfg), v_(v) {}

    void gate(const std::string& name, bool pass, Json detail) { v_.gates.push_back({name, pass, std::move(detail)}); }
    Json& metrics() { return v_.metrics; }

    void csv(const std::string& name, const AtomicMeasure& mu, const ReferenceLaw& law)
    {
        if (cfg_.out_dir.empty()) return;
        std::ofstream out(open(name));
        write_cdf_csv(out, mu, law);
        v_.artifacts.push_back(name);
    }

    std::ofstream open(const std::string& name)
    {
        std::filesystem::create_directories(cfg_.out_dir);
        std::ofstream out(std::filesystem::path(cfg_.out_dir) / name);
        if (!out) throw std::runtime_error("cannot write artifact '" + name + "'");
        return out;
    }
    void record_artifact(const std::string& name) { v_.artifacts.push_back(name); }

    const ScenarioConfig& cfg() const { return cfg_; }

private:
    const ScenarioConfig& cfg_;
    Verdict& v_;
};

std::string degree_tag(const std::string& scenario, long d)
{
    return scenario + "_d" + std::to_string(d) + ".csv";
}

// ---------------------------------------------------------------------------------------------

void exact_suite(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const int max_d = static_cast<int>(cfg.get_int_list("degrees").back());
    const long count = cfg.get_int("count");
    const std::vector<Rational> ns = cfg.get_rational_list("n_values");
    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.get_int("seed")));

    Tally r_red{"derivative_flow_R"}, rect_red{"Mn_flow_rect_R"}, k_inv{"K_invariance_Mn"},
        kappa_scale{"scaled_cumulant_Mn"}, sq_oracle{"boxplus_coefficients_vs_operators"},
        sq_add{"finite_R_additivity"}, rect_oracle{"rect_boxplus_fractional_vs_operators"},
        rect_int{"rect_boxplus_fractional_vs_integer"}, rect_add{"rect_R_additivity"},
        appell{"appell_recurrence"};

    for (long trial = 0; trial < count; ++trial) {
        const int d = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_d));
        const RationalPoly p = random_rooted(rng, d, -5, 5), q = random_rooted(rng, d, -5, 5);
        // the rectangular statements concern polynomials with nonnegative roots
        const RationalPoly pp = random_rooted(rng, d, 0, 6), qp = random_rooted(rng, d, 0, 6);

        for (int j = 0; j < d; ++j) r_red.add(derivative_flow_R_identity_check(p, j).max_discrepancy);
        sq_oracle.add(max_coeff_diff(boxplus(p, q), boxplus_via_operators(p, q)));
        sq_add.add(max_series_diff(finite_R(boxplus(p, q)), finite_R(p) + finite_R(q)));

        for (const Rational& n : ns) {
            for (int j = 0; j < d; ++j) rect_red.add(mn_flow_R_identity_check(pp, n, j).max_discrepancy);
            for (int k = 1; k <= d; ++k) {
                const Rational K = rect_cumulant_K(pp, k, n), kappa = rect_cumulant_scaled(pp, k, n);
                for (int j = 0; j <= d - k; ++j) {
                    const RationalPoly pj = apply_Mn_power_normalized(pp, n, j);
                    k_inv.add(rect_cumulant_K(pj, k, n) - K);
                    const Rational factor =
                        int_pow(Rational(d - j, d), k - 1) * int_pow(Rational((n + d - j) / (n + d)), k);
                    kappa_scale.add(rect_cumulant_scaled(pj, k, n) - factor * kappa);
                }
            }
            const RationalPoly r = rect_boxplus(pp, qp, n);
            rect_oracle.add(max_coeff_diff(r, rect_boxplus_via_operators(pp, qp, n)));
            if (detail::is_integer(n)) rect_int.add(max_coeff_diff(r, rect_boxplus_coefficients(pp, qp, n)));
            rect_add.add(max_series_diff(rect_finite_R(r, n), rect_finite_R(pp, n) + rect_finite_R(qp, n)));
        }

        LaguerrePolyaData data;
        std::uniform_int_distribution<int> small(-4, 4), den(1, 3);
        data.c = Rational(small(rng), den(rng));
        data.sigma2 = Rational(std::abs(small(rng)), den(rng));
        const int roots = static_cast<int>(rng() % 4);
        for (int i = 0; i < roots; ++i) {
            int x = 0;
            while (x == 0) x = small(rng);
            data.roots.push_back(Rational(x, den(rng)));
        }
        const Series<Rational> f = lp_series(data, d);
        const RationalPoly lhs = differentiate(appell_poly(f, d));
        const RationalPoly rhs = Rational(d) * appell_poly(f, d - 1);
        appell.add(max_coeff_diff(lhs, rhs));
    }

    Json list = Json::array();
    bool all_zero = true;
    for (const Tally* t : {&r_red, &rect_red, &k_inv, &kappa_scale, &sq_oracle, &sq_add, &rect_oracle, &rect_int,
                           &rect_add, &appell}) {
        list.push_back(t->json());
        all_zero = all_zero && t->max == 0 && t->checks > 0;
    }
    ctx.metrics()["identities"] = list;
    ctx.gate("exact identities have zero discrepancy", all_zero, Json{{"identities", list}});
}

// KS of an empirical root measure sequence against a fixed law.
struct KsRow {
    long d;
    double ks;
    int iterations;
    unsigned precision_bits;
};

Json ks_json(const std::vector<KsRow>& rows)
{
    Json a = Json::array();
    for (const auto& r : rows)
        a.push_back(Json{{"d", r.d}, {"ks", num(r.ks)}, {"iterations", r.iterations}, {"precision_bits", r.precision_bits}});
    return a;
}

void ks_gates(Context& ctx, const std::vector<KsRow>& rows, double ceiling)
{
    std::vector<double> ks;
    for (const auto& r : rows) ks.push_back(r.ks);
    ctx.gate("KS at the largest degree within ceiling", ks.back() <= ceiling,
             Json{{"d", rows.back().d}, {"ks", num(ks.back())}, {"ceiling", num(ceiling)}});
    Json seq = Json::array();
    for (double x : ks) seq.push_back(num(x));
    ctx.gate("KS strictly decreasing in d", decreasing(ks), Json{{"ks", seq}});
}

void hermite_semicircle(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const RootOptions opts = root_options(cfg);
    std::vector<KsRow> rows;
    for (long d : cfg.get_int_list("degrees")) {
        const RootReport rep = find_roots(hermite(static_cast<int>(d)), opts);
        const AtomicMeasure mu = dilate_measure(erm(rep.roots), 1 / std::sqrt(static_cast<double>(d)));
        rows.push_back({d, kolmogorov_distance(mu, Semicircle{}), rep.iterations, rep.precision_bits});
        ctx.csv(degree_tag(cfg.scenario, d), mu, Semicircle{});
    }
    ctx.metrics()["degrees"] = ks_json(rows);
    ks_gates(ctx, rows, cfg.get_double("ks_ceiling"));
}

void cosine_cauchy(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const RootOptions opts = root_options(cfg);
    const double tol = cfg.get_double("ks_tolerance");
    Json rows = Json::array(), detail = Json::array();
    bool pass = true;
    for (long d : cfg.get_int_list("degrees")) {
        const int di = static_cast<int>(d);
        const RootReport rep = find_roots(appell_poly(cos_series(di), di), opts);
        const AtomicMeasure mu = erm(rep.roots);
        const double ks = kolmogorov_distance(mu, Cauchy{});
        const double gap = std::fabs(ks - 0.5 / static_cast<double>(d));
        // closed-form roots cot((2k+1) pi / (2d))
        std::vector<double> grid;
        for (int k = 0; k < di; ++k) grid.push_back(1 / std::tan((2 * k + 1) * M_PI / (2 * d)));
        std::sort(grid.begin(), grid.end());
        double root_err = 0;
        for (int k = 0; k < di; ++k)
            root_err = std::max(root_err, std::fabs(to_double(rep.roots[k]) - grid[k]) / std::max(1.0, std::fabs(grid[k])));
        rows.push_back(Json{{"d", d}, {"ks", num(ks)}, {"half_inverse_degree", num(0.5 / static_cast<double>(d))},
                            {"ks_gap", num(gap)}, {"max_relative_root_error", num(root_err)},
                            {"iterations", rep.iterations}, {"precision_bits", rep.precision_bits}});
        detail.push_back(Json{{"d", d}, {"ks_gap", num(gap)}});
        pass = pass && gap <= tol;
        ctx.csv(degree_tag(cfg.scenario, d), mu, Cauchy{});
    }
    ctx.metrics()["degrees"] = rows;
    ctx.gate("KS equals 1/(2d)", pass, Json{{"degrees", detail}, {"tolerance", num(tol)}});
}

FreeIdAtomic free_id_law(const LaguerrePolyaData& data)
{
    const LevyData l = levy_data(data);
    return FreeIdAtomic{l.gamma, l.sigma2, l.nu};
}

void mp_from_f(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const RootOptions opts = root_options(cfg);
    const Rational a = cfg.get_rational("scale");
    if (!(a > 0)) throw ParseError("config 'scale' must be positive");
    // f(z) = 1 - z and its dilation f(a z) = 1 - a z in the canonical form
    const LaguerrePolyaData base{Rational(1), Rational(0), {Rational(1)}};
    const LaguerrePolyaData scaled{a, Rational(0), {Rational(1) / a}};
    const ReferenceLaw law = free_id_law(base), law_a = free_id_law(scaled);
    std::vector<KsRow> rows;
    Json variant = Json::array();
    for (long d : cfg.get_int_list("degrees")) {
        const int di = static_cast<int>(d);
        const RootReport rep = find_roots(normalized_appell(base, di), opts);
        const AtomicMeasure mu = erm(rep.roots);
        rows.push_back({d, kolmogorov_distance(mu, law), rep.iterations, rep.precision_bits});
        ctx.csv(degree_tag(cfg.scenario, d), mu, law);
        const AtomicMeasure mu_a = root_measure(normalized_appell(scaled, di), opts);
        const double ks_a = kolmogorov_distance(mu_a, law_a);
        variant.push_back(Json{{"d", d}, {"ks", num(ks_a)}, {"ks_gap_to_unscaled", num(std::fabs(ks_a - rows.back().ks))}});
        ctx.csv(cfg.scenario + "_scaled_d" + std::to_string(d) + ".csv", mu_a, law_a);
    }
    ctx.metrics()["degrees"] = ks_json(rows);
    ctx.metrics()["scaled_variant"] = Json{{"scale", exact(a)}, {"degrees", variant}};
    ks_gates(ctx, rows, cfg.get_double("ks_ceiling"));
}

void appell_domain(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const int dmax = static_cast<int>(cfg.get_int("exact_max_degree"));
    const int lmax = static_cast<int>(cfg.get_int("ell_max"));
    Tally exact_family{"normalized_derivative(x^d - d x^(d-1), l) = x^l - l x^(l-1)"};
    for (int d = 1; d <= dmax; ++d) {
        std::vector<Rational> c(static_cast<std::size_t>(d) + 1, Rational(0));
        c[0] = 1;
        c[1] = -d;
        const RationalPoly p(std::move(c));
        for (int ell = 1; ell <= std::min(lmax, d); ++ell) {
            std::vector<Rational> t(static_cast<std::size_t>(ell) + 1, Rational(0));
            t[0] = 1;
            t[1] = -ell;
            exact_family.add(max_coeff_diff(normalized_derivative(p, ell), RationalPoly(std::move(t))));
        }
    }
    ctx.metrics()["exact_family"] = exact_family.json();
    ctx.gate("exact family has zero coefficient error", exact_family.max == 0 && exact_family.checks > 0,
             exact_family.json());

    // roots d, -d/2 and +-sqrt(d): d t^2 dmu of the 1/d-dilation tends to delta_0 + delta_1 + delta_{-1/2}/4
    const LaguerrePolyaData limit{Rational(1, 2), Rational(1), {Rational(1), Rational(-2)}};
    const int ell = static_cast<int>(cfg.get_int("ell"));
    const RationalPoly target = appell_poly(lp_series(limit, ell), ell);
    Json rows = Json::array();
    double prev = -1;
    for (long d : cfg.get_int_list("degrees")) {
        const int di = static_cast<int>(d);
        if (di < ell + 2) throw ParseError("appell-domain: degrees must exceed ell + 1");
        RationalPoly p = from_roots(std::vector<Rational>{Rational(di), Rational(-di, 2)});
        const RationalPoly pair({Rational(1), Rational(0), Rational(-di)});
        for (int k = 0; k < (di - 2) / 2; ++k) p = p * pair;
        if ((di - 2) % 2) p = p * RationalPoly::monomial(1);
        const double err = to_double(max_coeff_diff(normalized_derivative(p, ell), target));
        Json row{{"d", d}, {"max_coefficient_error", num(err)}};
        if (prev > 0) row["ratio_to_previous"] = num(err / prev);
        rows.push_back(row);
        prev = err;
    }
    ctx.metrics()["two_root_family"] = Json{{"limit", to_json(limit)}, {"ell", ell}, {"target", to_json(target)},
                                            {"degrees", rows}};
}

void mn_laguerre(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const Rational n = cfg.get_rational("n");
    const int ell = static_cast<int>(cfg.get_int("ell"));
    const RationalPoly L = laguerre_monic(ell, n);
    Json rows = Json::array();
    std::vector<double> errs;
    for (long d : cfg.get_int_list("degrees")) {
        const int di = static_cast<int>(d);
        if (di <= ell) throw ParseError("mn-laguerre: degrees must exceed ell");
        const RationalPoly pj = apply_Mn_power_normalized(shifted_power(di, Rational(1)), n, di - ell);
        const RationalPoly q = monic(dilate(pj, Rational(n + di)));
        Rational worst = 0;
        for (int k = 1; k <= ell; ++k) worst = std::max(worst, Rational(abs_q(q[k] - L[k]) / abs_q(L[k])));
        errs.push_back(to_double(worst));
        rows.push_back(Json{{"d", d}, {"max_relative_error", num(errs.back())}, {"polynomial", to_json(q)}});
    }
    ctx.metrics()["laguerre"] = to_json(L);
    ctx.metrics()["degrees"] = rows;
    const double ceiling = cfg.get_double("error_ceiling"), rate = cfg.get_double("rate_ceiling");
    ctx.gate("relative error at the largest degree within ceiling", errs.back() <= ceiling,
             Json{{"error", num(errs.back())}, {"ceiling", num(ceiling)}});
    const bool rate_ok = errs.size() < 2 || errs.back() <= rate * errs[errs.size() - 2];
    Json rate_detail{{"rate_ceiling", num(rate)}};
    if (errs.size() >= 2) rate_detail["ratio"] = num(errs.back() / errs[errs.size() - 2]);
    ctx.gate("error decays at rate O(1/d)", rate_ok, rate_detail);
}

double series_gap(const Series<Rational>& f, const Series<Rational>& g)
{
    return to_double(max_series_diff(f, g));
}

void mn_flow(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const RootOptions opts = root_options(cfg);
    const Rational n = cfg.get_rational("n"), alpha = cfg.get_rational("alpha");
    const int ell = static_cast<int>(cfg.get_int("ell"));
    Json rows = Json::array();
    Tally relation{"rect R relation at j = d/2"};
    for (long d : cfg.get_int_list("degrees")) {
        const int di = static_cast<int>(d);
        const RationalPoly p = shifted_power(di, Rational(1));
        Json row{{"d", d}};

        // fixed l: R of the (n+d)-dilation tends to (n+l) s
        {
            const RationalPoly pj = apply_Mn_power_normalized(p, n, di - ell);
            Series<Rational> target(ell);
            target[1] = n + ell;
            row["fixed_l_gap"] = num(series_gap(rect_finite_R(dilate(pj, Rational(n + di)), n), target));
        }
        // l = sqrt(d): R of the (n+d)/(n+l)-dilation tends to s, roots to MarchenkoPastur(1)
        const int lg = std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(di)))));
        {
            const RationalPoly pj = apply_Mn_power_normalized(p, n, di - lg);
            const RationalPoly q = dilate(pj, Rational((n + di) / (n + lg)));
            Series<Rational> target(lg);
            target[1] = 1;
            row["growing_l"] = lg;
            row["growing_l_gap"] = num(series_gap(rect_finite_R(q, n), target));
            const ReferenceLaw mp = MarchenkoPastur{1, 1};
            const AtomicMeasure mu = root_measure(q, opts);
            row["growing_l_ks_mp1"] = num(kolmogorov_distance(mu, mp));
            ctx.csv(cfg.scenario + "_mp1_d" + std::to_string(d) + ".csv", mu, mp);
        }
        // n = alpha l: roots tend to MarchenkoPastur(1 + alpha) pushed by t -> t / (1 + alpha)
        {
            const Rational na = alpha * lg;
            const RationalPoly pj = apply_Mn_power_normalized(p, na, di - lg);
            const RationalPoly q = dilate(pj, Rational((na + di) / (na + lg)));
            const double r = 1 + to_double(alpha);
            const ReferenceLaw mpa = MarchenkoPastur{r, 1 / r};
            const AtomicMeasure mu = root_measure(q, opts);
            row["proportional_n_ks"] = num(kolmogorov_distance(mu, mpa));
            ctx.csv(cfg.scenario + "_mpalpha_d" + std::to_string(d) + ".csv", mu, mpa);
        }
        relation.add(mn_flow_R_identity_check(p, n, di / 2).max_discrepancy);
        rows.push_back(row);
    }
    ctx.metrics()["degrees"] = rows;
    ctx.metrics()["fractional_power_relation"] = relation.json();

    // rectangular R tends to s times the square R as n grows
    const std::vector<Rational> pair = cfg.get_rational_list("n_pair");
    if (pair.size() != 2) throw ParseError("config 'n_pair' must hold two values");
    const double rate = cfg.get_double("rate_ceiling");
    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.get_int("seed")));
    const int max_d = static_cast<int>(cfg.get_int("max_degree"));
    Json trials = Json::array();
    bool pass = true;
    for (long t = 0; t < cfg.get_int("trials"); ++t) {
        const int d = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, max_d - 1)));
        const RationalPoly p = random_rooted(rng, d, -5, 5);
        const Series<Rational> target = shift_up(finite_R(p));
        const Rational g1 = max_series_diff(rect_finite_R(p, pair[0]), target);
        const Rational g2 = max_series_diff(rect_finite_R(p, pair[1]), target);
        const bool ok = g2 <= Rational(g1 * parse_rational(cfg.get("rate_ceiling")));
        pass = pass && ok;
        Json tr{{"d", d}, {"gap_first", num(to_double(g1))}, {"gap_second", num(to_double(g2))}};
        if (g1 != 0) tr["ratio"] = num(to_double(Rational(g2 / g1)));
        trials.push_back(tr);
    }
    ctx.gate("rect R gap to s R shrinks with n", pass,
             Json{{"n_pair", {exact(pair[0]), exact(pair[1])}}, {"rate_ceiling", num(rate)}, {"trials", trials}});
}

void rect_id(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    LpiData g;
    g.sigma2 = cfg.get_rational("g_sigma2");
    g.roots_sq = cfg.get_rational_list("g_roots_sq");
    validate(g);
    const std::vector<Rational> ns = cfg.get_rational_list("n_values");
    const int max_d = static_cast<int>(cfg.get_int("exact_max_degree"));

    Tally identity{"rect_finite_R(normalized Laguerre-Appell) = -s g'/g"};
    for (int d = 1; d <= max_d; ++d) {
        const Series<Rational> gs = lpi_series(g, d + 1);
        const Series<Rational> target = truncate(shift_up(Rational(-1) * log_derivative(gs)), d);
        for (const Rational& n : ns)
            identity.add(max_series_diff(rect_finite_R(normalized_laguerre_appell(g, d, n), n), target));
    }
    ctx.metrics()["exact_identity"] = identity.json();
    ctx.gate("rect R of normalized Laguerre-Appell polynomials is exact", identity.max == 0 && identity.checks > 0,
             identity.json());

    // transform grid against the limit law
    const long d = cfg.get_int_list("degrees").back();
    const int di = static_cast<int>(d);
    const double zmin = cfg.get_double("z_min"), zmax = cfg.get_double("z_max"), tol = cfg.get_double("transform_tolerance");
    const long points = cfg.get_int("z_points");
    const unsigned bits = static_cast<unsigned>(cfg.get_int("precision_bits"));
    Json grid = Json::array();
    double worst = 0;
    for (const Rational& n : ns) {
        const double lambda = to_double(Rational(Rational(di) / (di + n)));
        const RectLevyData levy = rect_levy_data(g, lambda);
        const RectIdAtomic law{lambda, levy.G};
        PrecisionScope scope(bits);
        const RealPoly L = to_real(normalized_laguerre_appell(g, di, n), bits);
        const Series<BigReal> R = rect_finite_R(L, make_bigreal(n, bits));
        for (long i = 0; i < points; ++i) {
            const double z = points == 1 ? zmin : zmin + (zmax - zmin) * static_cast<double>(i) / static_cast<double>(points - 1);
            const double finite = evaluate_at(R, z);
            const double limit = c_transform_eval(law, z).real();
            worst = std::max(worst, std::fabs(finite - limit));
            grid.push_back(Json{{"n", exact(n)}, {"z", num(z)}, {"finite", num(finite)}, {"limit", num(limit)}});
        }
    }
    ctx.metrics()["transform_grid"] = Json{{"d", d}, {"points", grid}};
    ctx.gate("C-transform matches the finite R-transform on the grid", worst <= tol,
             Json{{"d", d}, {"max_abs_difference", num(worst)}, {"tolerance", num(tol)}});

    // point process: d t dmu of the 1/(d(n+d))-dilation against G_g (recorded, no gate)
    const long pd = cfg.get_int("point_degree");
    const Rational n0 = ns.front();
    const RationalPoly Ld = laguerre_appell(g, static_cast<int>(pd), n0);
    const AtomicMeasure mu = root_measure(dilate(Ld, Rational(Rational(1) / (Rational(pd) * (n0 + pd)))), root_options(cfg));
    const RadonAtoms weighted = radon_t(mu, static_cast<double>(pd));
    const RectLevyData levy = rect_levy_data(g, 1);
    const double w = cfg.get_double("window");
    Json windows = Json::array();
    for (const auto& atom : levy.G_g.atoms)
        if (atom.location != 0)
            windows.push_back(Json{{"atom", num(atom.location)}, {"expected", num(atom.weight)},
                                   {"observed", num(weighted.mass_in(atom.location - w, atom.location + w))}});
    ctx.metrics()["point_process"] = Json{{"d", pd}, {"n", exact(n0)}, {"window", num(w)}, {"windows", windows},
                                          {"total_mass", num(weighted.total_mass())}};

    // exact domain-of-attraction instance: p_d = (1 - M_n) x^d (recorded, no gate)
    Tally family{"normalized M_n^(d-l) of x^d - d(n+d) x^(d-1) = x^l - l(n+l) x^(l-1)"};
    for (int dd = 1; dd <= max_d; ++dd)
        for (const Rational& n : ns) {
            std::vector<Rational> c(static_cast<std::size_t>(dd) + 1, Rational(0));
            c[0] = 1;
            c[1] = -Rational(dd) * (n + dd);
            const RationalPoly p(std::move(c));
            for (int ell = 1; ell <= std::min(dd, 5); ++ell) {
                std::vector<Rational> t(static_cast<std::size_t>(ell) + 1, Rational(0));
                t[0] = 1;
                t[1] = -Rational(ell) * (n + ell);
                family.add(max_coeff_diff(apply_Mn_power_normalized(p, n, dd - ell), RationalPoly(std::move(t))));
            }
        }
    ctx.metrics()["exact_family"] = family.json();
}

void point_process(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    LaguerrePolyaData data;
    data.c = cfg.get_rational("c");
    data.sigma2 = cfg.get_rational("sigma2");
    data.roots = cfg.get_rational_list("roots");
    validate(data);
    const RootOptions opts = root_options(cfg);
    const LevyData levy = levy_data(data);
    const double w = cfg.get_double("window"), tol = cfg.get_double("mass_tolerance");
    Json rows = Json::array();
    bool exact_ok = true;
    Json last_windows;
    bool window_ok = true;
    for (long d : cfg.get_int_list("degrees")) {
        const int di = static_cast<int>(d);
        const Series<Rational> f = lp_series(data, di);
        const RationalPoly scaled = dilate(appell_poly(f, di), Rational(1, di));
        // sum of squared roots against gamma_1^2 - ((d-1)/d) gamma_2, gamma_k = k! f_k
        const Rational mass = power_sums(scaled, 2)[2];
        const Rational formula = f[1] * f[1] - Rational(di - 1, di) * (2 * f[2]);
        exact_ok = exact_ok && mass == formula;
        const RadonAtoms weighted = radon_t2(root_measure(scaled, opts), static_cast<double>(d));
        Json windows = Json::array();
        window_ok = true;
        for (const auto& atom : levy.G_f.atoms) {
            const double observed = weighted.mass_in(atom.location - w, atom.location + w);
            Json e{{"atom", num(atom.location)}, {"expected", num(atom.weight)}, {"observed", num(observed)}};
            windows.push_back(e);
            if (atom.location != 0) window_ok = window_ok && std::fabs(observed - atom.weight) <= tol;
        }
        rows.push_back(Json{{"d", d}, {"total_mass_exact", exact(mass)}, {"total_mass_formula", exact(formula)},
                            {"total_mass_numeric", num(weighted.total_mass())}, {"windows", windows}});
        last_windows = windows;
    }
    ctx.metrics()["data"] = to_json(data);
    ctx.metrics()["degrees"] = rows;
    ctx.gate("window masses near the atoms of G_f at the largest degree", window_ok,
             Json{{"d", cfg.get_int_list("degrees").back()}, {"window", num(w)}, {"tolerance", num(tol)},
                  {"windows", last_windows}});
    ctx.gate("total t^2-mass equals the Newton identity value", exact_ok, Json::object());
}

Eigen::MatrixXd integer_matrix(std::mt19937_64& rng, int rows, int cols, int lo, int hi)
{
    std::uniform_int_distribution<int> pick(lo, hi);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = pick(rng);
    return m;
}

void mc_oracle(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const long samples = cfg.get_int("samples"), zv_samples = cfg.get_int("zero_variance_samples");
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    const double zmax = cfg.get_double("z_ceiling");
    std::mt19937_64 rng(seed);

    Eigen::VectorXd spec(5);
    for (int i = 0; i < 5; ++i) spec(i) = std::uniform_int_distribution<int>(-4, 4)(rng);
    const Eigen::MatrixXd A4 = Eigen::Vector4d(1, 2, 3, 4).asDiagonal(), B4 = Eigen::Vector4d(0, 0, 1, 1).asDiagonal();
    const Eigen::MatrixXd A5 = spec.asDiagonal();
    const Eigen::MatrixXd R1 = integer_matrix(rng, 4, 6, -2, 2), R2 = integer_matrix(rng, 4, 6, -2, 2),
                          R3 = integer_matrix(rng, 4, 6, -2, 2);

    struct Check {
        std::string name;
        std::function<McReport()> run;
    };
    const std::vector<Check> checks{
        {"boxplus d=4", [&] { return mc_boxplus(A4, B4, samples, seed); }},
        {"compression d=5 l=2", [&] { return mc_compression(A5, 2, samples, seed); }},
        {"rect compression d=4 n=2 l=2", [&] { return mc_rect_compression(R1, 2, samples, seed); }},
        {"rect boxplus d=4 n=2", [&] { return mc_rect_boxplus(R2, R3, samples, seed); }},
    };
    Json reports = Json::object(), zdetail = Json::object();
    bool zpass = true;
    for (const auto& c : checks) {
        const McReport r = c.run();
        reports[c.name] = to_json(r);
        zdetail[c.name] = num(r.max_abs_z());
        zpass = zpass && r.max_abs_z() <= zmax;
    }
    const std::vector<Check> degenerate{
        {"boxplus with B=0", [&] { return mc_boxplus(A4, Eigen::MatrixXd::Zero(4, 4), zv_samples, seed); }},
        {"compression of A=0", [&] { return mc_compression(Eigen::MatrixXd::Zero(5, 5), 2, zv_samples, seed); }},
        {"rect boxplus with B=0", [&] { return mc_rect_boxplus(R1, Eigen::MatrixXd::Zero(4, 6), zv_samples, seed); }},
    };
    Json zv = Json::object();
    bool zvpass = true;
    for (const auto& c : degenerate) {
        const McReport r = c.run();
        const bool ok = r.all_zero_variance() && r.max_abs_z() == 0;
        zv[c.name] = Json{{"zero_variance", r.all_zero_variance()}, {"max_abs_z", num(r.max_abs_z())}};
        zvpass = zvpass && ok;
    }
    ctx.metrics()["reports"] = reports;
    ctx.metrics()["degenerate"] = zv;
    ctx.gate("every coefficient z-score within ceiling", zpass, Json{{"max_abs_z", zdetail}, {"ceiling", num(zmax)}});
    ctx.gate("degenerate cases have exactly zero variance", zvpass, zv);
}

void heavy_tail_explore(Context& ctx)
{
    const auto& cfg = ctx.cfg();
    const std::string fname = cfg.get("f");
    const bool is_cos = fname == "cos";
    LaguerrePolyaData data;
    if (!is_cos) data = lp_data_from_json(read_json_file(fname));
    const double alpha = cfg.get_double("alpha");
    if (!(alpha > 0)) throw ParseError("config 'alpha' must be positive");
    const double rho = 1 / alpha - 1;
    const unsigned bits = static_cast<unsigned>(cfg.get_int("precision_bits"));
    const double re_min = cfg.get_double("re_min"), re_max = cfg.get_double("re_max"), im = cfg.get_double("im");
    const long points = cfg.get_int("re_points");

    std::ofstream out;
    const std::string name = cfg.scenario + ".csv";
    if (!cfg.out_dir.empty()) {
        out = ctx.open(name);
        out << "d,re_z,im_z,re_G,im_G\n";
        out.precision(17);
        ctx.record_artifact(name);
    }
    Json rows = Json::array();
    for (long d : cfg.get_int_list("degrees")) {
        const int di = static_cast<int>(d);
        PrecisionScope scope(bits);
        const Series<Rational> f = is_cos ? cos_series(di) : lp_series(data, di);
        const RealPoly J = to_real(jensen_poly(f, di), bits);
        const RealPoly dJ = differentiate(J);
        const double drho = std::pow(static_cast<double>(d), rho);
        double cauchy_gap = 0;
        for (long i = 0; i < points; ++i) {
            const double re = points == 1 ? re_min : re_min + (re_max - re_min) * static_cast<double>(i) / static_cast<double>(points - 1);
            const std::complex<double> z(re, im);
            // w = d^rho / z, evaluated in big floats
            const std::complex<double> wz = drho / z;
            const BigReal wr(wz.real()), wi(wz.imag());
            const auto [jr, ji] = evaluate(J, wr, wi);
            const auto [dr, di2] = evaluate(dJ, wr, wi);
            const BigReal den = jr * jr + ji * ji;
            const std::complex<double> ratio(to_double(BigReal((dr * jr + di2 * ji) / den)),
                                             to_double(BigReal((di2 * jr - dr * ji) / den)));
            const std::complex<double> G = 1.0 / z - drho / (static_cast<double>(d) * z * z) * ratio;
            if (is_cos) cauchy_gap = std::max(cauchy_gap, std::abs(G - 1.0 / (z + std::complex<double>(0, 1))));
            if (out.is_open()) out << d << ',' << re << ',' << im << ',' << G.real() << ',' << G.imag() << '\n';
        }
        Json row{{"d", d}};
        if (is_cos) row["max_gap_to_cauchy_transform"] = num(cauchy_gap);
        rows.push_back(row);
    }
    ctx.metrics()["rho"] = num(rho);
    ctx.metrics()["degrees"] = rows;
}

struct Entry {
    std::string name;
    ConfigValues defaults;
    void (*run)(Context&);
};

const std::vector<Entry>& catalog()
{
    static const std::vector<Entry> entries{
        {"exact-suite", {{"degrees", "12"}, {"count", "100"}, {"seed", "1"}, {"n_values", "0,1/2,1,3"}}, exact_suite},
        {"hermite-semicircle",
         {{"degrees", "100,200,400"}, {"precision_bits", "256"}, {"ks_ceiling", "0.05"}},
         hermite_semicircle},
        {"cosine-cauchy",
         {{"degrees", "100,500"}, {"precision_bits", "256"}, {"ks_tolerance", "1e-10"}},
         cosine_cauchy},
        {"mp-from-f",
         {{"degrees", "100,200,300"}, {"precision_bits", "256"}, {"ks_ceiling", "0.06"}, {"scale", "2"}},
         mp_from_f},
        {"appell-domain",
         {{"exact_max_degree", "200"}, {"ell_max", "5"}, {"degrees", "50,100,200,400"}, {"ell", "3"}},
         appell_domain},
        {"mn-laguerre",
         {{"degrees", "100,200"}, {"n", "1"}, {"ell", "3"}, {"error_ceiling", "0.05"}, {"rate_ceiling", "0.6"}},
         mn_laguerre},
        {"mn-flow",
         {{"degrees", "100,200,400"}, {"n", "1"}, {"ell", "3"}, {"alpha", "1"}, {"precision_bits", "256"},
          {"n_pair", "1000,2000"}, {"rate_ceiling", "0.55"}, {"trials", "20"}, {"max_degree", "10"}, {"seed", "7"}},
         mn_flow},
        {"rect-id",
         {{"g_sigma2", "1"}, {"g_roots_sq", "1,4"}, {"n_values", "0,1"}, {"exact_max_degree", "30"},
          {"degrees", "200"}, {"z_min", "-0.05"}, {"z_max", "-0.01"}, {"z_points", "9"},
          {"transform_tolerance", "1e-3"}, {"precision_bits", "256"}, {"point_degree", "200"}, {"window", "0.1"}},
         rect_id},
        {"point-process",
         {{"degrees", "200,400"}, {"c", "0"}, {"sigma2", "1"}, {"roots", "1,-2"}, {"precision_bits", "256"},
          {"window", "0.2"}, {"mass_tolerance", "0.02"}},
         point_process},
        {"mc-oracle",
         {{"samples", "200000"}, {"zero_variance_samples", "10000"}, {"seed", "42"}, {"z_ceiling", "4"}},
         mc_oracle},
        {"heavy-tail-explore",
         {{"f", "cos"}, {"alpha", "1"}, {"degrees", "50,100,200"}, {"precision_bits", "256"}, {"re_min", "-3"},
          {"re_max", "3"}, {"re_points", "13"}, {"im", "1"}},
         heavy_tail_explore},
    };
    return entries;
}

const Entry& find_entry(const std::string& name)
{
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw UnknownScenario(name);
}

} // namespace

ConfigValues parse_config_text(const std::string& text)
{
    ConfigValues out;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty key");
        if (!out.emplace(key, value).second) throw ParseError("config: repeated key '" + key + "'");
    }
    return out;
}

ConfigValues read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

const std::string& ScenarioConfig::get(const std::string& key) const
{
    const auto it = values.find(key);
    if (it == values.end()) throw ParseError("config: scenario '" + scenario + "' has no key '" + key + "'");
    return it->second;
}

long ScenarioConfig::get_int(const std::string& key) const
{
    return parse_long(key, get(key));
}

double ScenarioConfig::get_double(const std::string& key) const
{
    const std::string& s = get(key);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw ParseError("config '" + key + "': not a number: '" + s + "'");
    return v;
}

Rational ScenarioConfig::get_rational(const std::string& key) const
{
    return parse_rational(get(key));
}

std::vector<long> ScenarioConfig::get_int_list(const std::string& key) const
{
    std::vector<long> out;
    for (const auto& s : split_list(get(key))) out.push_back(parse_long(key, s));
    if (out.empty()) throw ParseError("config '" + key + "': empty list");
    return out;
}

std::vector<Rational> ScenarioConfig::get_rational_list(const std::string& key) const
{
    std::vector<Rational> out;
    for (const auto& s : split_list(get(key))) out.push_back(parse_rational(s));
    if (out.empty()) throw ParseError("config '" + key + "': empty list");
    return out;
}

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : catalog()) v.push_back(e.name);
        return v;
    }();
    return names;
}

const ConfigValues& default_config(const std::string& scenario)
{
    return find_entry(scenario).defaults;
}

ScenarioConfig make_config(const std::string& scenario, const ConfigValues& overrides, const std::string& out_dir)
{
    ScenarioConfig cfg{scenario, default_config(scenario), out_dir};
    for (const auto& [k, v] : overrides) {
        if (!cfg.values.count(k)) throw ParseError("config: scenario '" + scenario + "' has no key '" + k + "'");
        cfg.values[k] = v;
    }
    if (cfg.values.count("degrees")) {
        const auto ds = cfg.get_int_list("degrees");
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (ds[i] < 1) throw ParseError("config 'degrees': degrees must be positive");
            if (i > 0 && ds[i] <= ds[i - 1]) throw ParseError("config 'degrees': degrees must be strictly increasing");
        }
    }
    return cfg;
}

Verdict run_scenario(const ScenarioConfig& config)
{
    const Entry& entry = find_entry(config.scenario);
    Verdict v;
    v.scenario = config.scenario;
    v.config = Json::object();
    for (const auto& [k, val] : config.values) v.config[k] = val;
    v.metrics = Json::object();
    const auto start = std::chrono::steady_clock::now();
    Context ctx(config, v);
    try {
        entry.run(ctx);
    } catch (const std::exception& e) {
        v.gates.push_back({"scenario completed", false, Json{{"error", e.what()}}});
    }
    v.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.pass = std::all_of(v.gates.begin(), v.gates.end(), [](const Gate& g) { return g.pass; });
    return v;
}

Json to_json(const Verdict& v)
{
    Json j;
    j["scenario"] = v.scenario;
    j["pass"] = v.pass;
    j["config"] = v.config;
    Json gates = Json::array();
    for (const auto& g : v.gates) gates.push_back(Json{{"name", g.name}, {"pass", g.pass}, {"detail", g.detail}});
    j["gates"] = gates;
    j["metrics"] = v.metrics;
    j["artifacts"] = v.artifacts;
    return j;
}

} // namespace finfree
