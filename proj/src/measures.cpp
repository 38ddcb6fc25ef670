#include "finfree/measures.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>

#include "finfree/errors.hpp"

namespace finfree {

double AtomicMeasure::total_mass() const
{
    double s = 0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

double AtomicMeasure::mass_in(double lo, double hi) const
{
    double s = 0;
    for (const auto& a : atoms)
        if (a.location >= lo && a.location <= hi) s += a.weight;
    return s;
}

AtomicMeasure canonicalize(AtomicMeasure m)
{
    std::stable_sort(m.atoms.begin(), m.atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.location < b.location; });
    AtomicMeasure out;
    for (const auto& a : m.atoms) {
        if (a.weight == 0) continue;
        if (!out.atoms.empty() && out.atoms.back().location == a.location) out.atoms.back().weight += a.weight;
        else out.atoms.push_back(a);
    }
    return out;
}

AtomicMeasure erm(const std::vector<double>& roots)
{
    if (roots.empty()) throw DomainError("erm: no roots");
    AtomicMeasure m;
    const double w = 1.0 / static_cast<double>(roots.size());
    for (double x : roots) m.atoms.push_back({x, w});
    return canonicalize(std::move(m));
}

AtomicMeasure erm(const std::vector<BigReal>& roots)
{
    std::vector<double> r;
    r.reserve(roots.size());
    for (const auto& x : roots) r.push_back(to_double(x));
    return erm(r);
}

AtomicMeasure dilate_measure(const AtomicMeasure& mu, double alpha)
{
    if (alpha == 0) throw DomainError("dilate_measure: alpha must be nonzero");
    AtomicMeasure out = mu;
    for (auto& a : out.atoms) a.location *= alpha;
    return canonicalize(std::move(out));
}

AtomicMeasure sqrt_symmetrize(const AtomicMeasure& mu)
{
    AtomicMeasure out;
    for (const auto& a : mu.atoms) {
        if (a.location < 0) throw DomainError("sqrt_symmetrize: negative location");
        const double r = std::sqrt(a.location);
        out.atoms.push_back({-r, a.weight / 2});
        out.atoms.push_back({r, a.weight / 2});
    }
    return canonicalize(std::move(out));
}

AtomicMeasure square_pushforward(const AtomicMeasure& mu)
{
    AtomicMeasure out = mu;
    for (auto& a : out.atoms) a.location *= a.location;
    return canonicalize(std::move(out));
}

RadonAtoms radon_t2(const AtomicMeasure& mu, double d)
{
    RadonAtoms out;
    for (const auto& a : mu.atoms) out.atoms.push_back({a.location, d * a.location * a.location * a.weight});
    return canonicalize(std::move(out));
}

RadonAtoms radon_t(const AtomicMeasure& mu, double d)
{
    RadonAtoms out;
    for (const auto& a : mu.atoms) out.atoms.push_back({a.location, d * a.location * a.weight});
    return canonicalize(std::move(out));
}

namespace {

double semicircle_cdf(double x)
{
    if (x <= -2) return 0;
    if (x >= 2) return 1;
    return 0.5 + x * std::sqrt(4 - x * x) / (4 * M_PI) + std::asin(x / 2) / M_PI;
}

// Rate c >= 1: support [a, b] = [(sqrt c - 1)^2, (sqrt c + 1)^2]. With R = (b-t)(t-a),
// int sqrt(R)/t dt = sqrt(R) + (a+b)/2 asin((2t-a-b)/(b-a)) - sqrt(ab) asin(((a+b)t - 2ab)/(t(b-a))).
double mp_cdf(double c, double x)
{
    const double s = std::sqrt(c);
    const double a = (s - 1) * (s - 1), b = (s + 1) * (s + 1);
    if (x <= a) return 0;
    if (x >= b) return 1;
    auto clamp1 = [](double v) { return std::max(-1.0, std::min(1.0, v)); };
    auto antiderivative = [&](double t) {
        const double R = std::max(0.0, (b - t) * (t - a));
        double v = std::sqrt(R) + (a + b) / 2 * std::asin(clamp1((2 * t - a - b) / (b - a)));
        if (a > 0) v -= std::sqrt(a * b) * std::asin(clamp1(((a + b) * t - 2 * a * b) / (t * (b - a))));
        return v;
    };
    const double lower = -(a + b) * M_PI / 4 + (a > 0 ? std::sqrt(a * b) * M_PI / 2 : 0.0);
    return std::max(0.0, std::min(1.0, (antiderivative(x) - lower) / (2 * M_PI)));
}

double rect_gaussian_cdf(double lambda, double x)
{
    // squared law: lambda * MP(1/lambda)
    const double nu = mp_cdf(1 / lambda, x * x / lambda);
    return x >= 0 ? 0.5 + nu / 2 : 0.5 - nu / 2;
}

// shift + scale * Y for a standard base law Y.
struct Affine {
    enum class Base { point, semicircle, mp, cauchy, rect_gaussian } base;
    double param = 1;  // MP rate or rectangular lambda
    double shift = 0;
    double scale = 1;
};

double base_cdf(const Affine& l, double y)
{
    switch (l.base) {
    case Affine::Base::point: return y >= 0 ? 1 : 0;
    case Affine::Base::semicircle: return semicircle_cdf(y);
    case Affine::Base::mp: return mp_cdf(l.param, y);
    case Affine::Base::cauchy: return 0.5 + std::atan(y) / M_PI;
    case Affine::Base::rect_gaussian: return rect_gaussian_cdf(l.param, y);
    }
    return 0;
}

double base_cdf_left(const Affine& l, double y)
{
    if (l.base == Affine::Base::point) return y > 0 ? 1 : 0;
    return base_cdf(l, y);
}

Affine reduce(const ReferenceLaw& law)
{
    using B = Affine::Base;
    if (std::holds_alternative<Semicircle>(law)) return {B::semicircle};
    if (std::holds_alternative<Cauchy>(law)) return {B::cauchy};
    if (auto mp = std::get_if<MarchenkoPastur>(&law)) {
        if (!(mp->rate >= 1)) throw DomainError("MarchenkoPastur: rate must be >= 1");
        if (!(mp->scale > 0)) throw DomainError("MarchenkoPastur: scale must be positive");
        return {B::mp, mp->rate, 0, mp->scale};
    }
    if (auto rg = std::get_if<RectGaussian>(&law)) {
        if (!(rg->lambda > 0 && rg->lambda <= 1)) throw DomainError("RectGaussian: lambda must lie in (0, 1]");
        return {B::rect_gaussian, rg->lambda};
    }
    if (auto id = std::get_if<FreeIdAtomic>(&law)) {
        std::vector<Atom> jumps;
        for (const auto& a : id->nu.atoms)
            if (a.location != 0 && a.weight > 0) jumps.push_back(a);
        if (jumps.empty()) {
            if (id->sigma2 == 0) return {B::point, 1, id->gamma, 1};
            return {B::semicircle, 1, id->gamma, std::sqrt(id->sigma2)};
        }
        // m t/(1 - t z) - m t/(1 + t^2): free Poisson of rate m and jump t, shifted
        if (id->sigma2 == 0 && jumps.size() == 1 && jumps[0].weight >= 1) {
            const double t = jumps[0].location, m = jumps[0].weight;
            return {B::mp, m, id->gamma - m * t / (1 + t * t), t};
        }
        throw UnsupportedCdf("no closed-form CDF for this free ID law");
    }
    const auto& rid = std::get<RectIdAtomic>(law);
    if (!(rid.lambda > 0 && rid.lambda <= 1)) throw DomainError("RectIdAtomic: lambda must lie in (0, 1]");
    double s2 = 0;
    for (const auto& a : rid.G.atoms) {
        if (a.weight == 0) continue;
        if (a.location != 0) throw UnsupportedCdf("no closed-form CDF for this rectangular ID law");
        s2 += a.weight;
    }
    if (s2 == 0) return {B::point, 1, 0, 1};
    return {B::rect_gaussian, rid.lambda, 0, std::sqrt(s2)};
}

double affine_cdf(const Affine& l, double x, bool left)
{
    const double y = (x - l.shift) / l.scale;
    if (l.scale > 0) return left ? base_cdf_left(l, y) : base_cdf(l, y);
    // decreasing map: P(shift + scale Y <= x) = P(Y >= y)
    return left ? 1 - base_cdf(l, y) : 1 - base_cdf_left(l, y);
}

double ks_at(const std::vector<double>& xs, const std::vector<double>& before, const std::vector<double>& after,
             const ReferenceLaw& law)
{
    double worst = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        worst = std::max(worst, std::fabs(before[i] - cdf_left(law, xs[i])));
        worst = std::max(worst, std::fabs(after[i] - cdf(law, xs[i])));
    }
    return worst;
}

// Empirical CDF of a canonical measure at x and just below x.
std::pair<double, double> empirical(const AtomicMeasure& mu, double x)
{
    double below = 0, at = 0;
    for (const auto& a : mu.atoms) {
        if (a.location < x) below += a.weight;
        if (a.location <= x) at += a.weight;
    }
    return {below, at};
}

} // namespace

double cdf(const ReferenceLaw& law, double x)
{
    return affine_cdf(reduce(law), x, false);
}

double cdf_left(const ReferenceLaw& law, double x)
{
    return affine_cdf(reduce(law), x, true);
}

double kolmogorov_distance(const AtomicMeasure& mu_in, const ReferenceLaw& law)
{
    const AtomicMeasure mu = canonicalize(mu_in);
    const Affine l = reduce(law);
    std::vector<double> xs, before, after;
    double cum = 0;
    for (const auto& a : mu.atoms) {
        xs.push_back(a.location);
        before.push_back(cum);
        cum += a.weight;
        after.push_back(cum);
    }
    double worst = ks_at(xs, before, after, law);
    if (l.base == Affine::Base::point) {
        auto [b, a] = empirical(mu, l.shift);
        worst = std::max({worst, std::fabs(b - cdf_left(law, l.shift)), std::fabs(a - cdf(law, l.shift))});
    }
    return worst;
}

double kolmogorov_distance(const AtomicMeasure& mu_in, const AtomicMeasure& nu_in)
{
    const AtomicMeasure mu = canonicalize(mu_in), nu = canonicalize(nu_in);
    std::vector<double> xs;
    for (const auto& a : mu.atoms) xs.push_back(a.location);
    for (const auto& a : nu.atoms) xs.push_back(a.location);
    double worst = 0;
    for (double x : xs) {
        auto [mb, ma] = empirical(mu, x);
        auto [nb, na] = empirical(nu, x);
        worst = std::max({worst, std::fabs(mb - nb), std::fabs(ma - na)});
    }
    return worst;
}

std::complex<double> r_transform_eval(const FreeIdAtomic& law, std::complex<double> z, double pole_tol)
{
    std::complex<double> r = law.gamma + law.sigma2 * z;
    for (const auto& a : law.nu.atoms) {
        const double t = a.location;
        const std::complex<double> den = 1.0 - z * t;
        if (std::abs(den) < pole_tol) throw PoleProximity("r_transform_eval: z too close to 1/t");
        r += a.weight * (z + t) / den * (t * t / (t * t + 1));
    }
    return r;
}

std::complex<double> c_transform_eval(const RectIdAtomic& law, std::complex<double> z, double pole_tol)
{
    std::complex<double> s = 0;
    for (const auto& a : law.G.atoms) {
        const double t2 = a.location * a.location;
        const std::complex<double> den = 1.0 - z * t2;
        if (std::abs(den) < pole_tol) throw PoleProximity("c_transform_eval: z too close to 1/t^2");
        s += a.weight * (t2 + 1) / den;
    }
    return z * s;
}

double rect_C_numeric(const AtomicMeasure& mu_in, double lambda, double z)
{
    if (!(lambda > 0 && lambda <= 1)) throw DomainError("rect_C_numeric: lambda must lie in (0, 1]");
    if (!(z < 0)) throw DomainError("rect_C_numeric: z must be negative");
    const AtomicMeasure mu = canonicalize(mu_in);
    {
        const auto& at = mu.atoms;
        const double scale = at.empty() ? 1 : std::max(1.0, std::max(std::fabs(at.front().location), std::fabs(at.back().location)));
        for (std::size_t i = 0, j = at.size(); i < at.size(); ++i) {
            --j;
            if (std::fabs(at[i].location + at[j].location) > 1e-12 * scale ||
                std::fabs(at[i].weight - at[j].weight) > 1e-12 * std::max(at[i].weight, at[j].weight))
                throw DomainError("rect_C_numeric: measure must be symmetric");
        }
    }
    // M(w) = int w x / (1 - w x) dmu^2(x) and M'(w), for w < 0 (no poles there)
    auto M = [&](double w, double* dM) {
        double m = 0, dm = 0;
        for (const auto& a : mu.atoms) {
            const double x = a.location * a.location;
            const double den = 1 - w * x;
            m += a.weight * w * x / den;
            dm += a.weight * x / (den * den);
        }
        if (dM) *dM = dm;
        return m;
    };
    auto H = [&](double w, double* dH) {
        double dm = 0;
        const double m = M(w, &dm);
        if (dH) *dH = (lambda * m + 1) * (m + 1) + w * (lambda * dm * (m + 1) + (lambda * m + 1) * dm);
        return w * (lambda * m + 1) * (m + 1);
    };

    double lo = z;
    for (int i = 0;; ++i) {
        double dh = 0;
        const double h = H(lo, &dh);
        if (!(dh > 0)) throw BracketFailure("rect_C_numeric: H is not increasing before the bracket closes");
        if (h <= z) break;
        if (i == 200) throw BracketFailure("rect_C_numeric: no bracket found");
        lo *= 2;
    }
    for (int i = 0; i <= 256; ++i) {
        double dh = 0;
        H(lo * i / 256.0, &dh);
        if (!(dh > 0)) throw BracketFailure("rect_C_numeric: H is not monotone on the bracket");
    }
    double a = lo, b = 0;
    for (int i = 0; i < 200 && b - a > 0; ++i) {
        const double mid = a + (b - a) / 2;
        if (mid == a || mid == b) break;
        if (H(mid, nullptr) <= z) a = mid;
        else b = mid;
    }
    const double w = a + (b - a) / 2;
    const double y = z / w - 1;
    const double disc = (lambda + 1) * (lambda + 1) + 4 * lambda * y;
    if (disc < 0) throw BracketFailure("rect_C_numeric: outside the domain of U");
    return (-lambda - 1 + std::sqrt(disc)) / (2 * lambda);
}

void write_cdf_csv(std::ostream& out, const AtomicMeasure& mu_in, const ReferenceLaw& law)
{
    const AtomicMeasure mu = canonicalize(mu_in);
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << "location,weight,F_emp,F_ref\n" << std::setprecision(17);
    double cum = 0;
    for (const auto& a : mu.atoms) {
        cum += a.weight;
        out << a.location << ',' << a.weight << ',' << cum << ',' << cdf(law, a.location) << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

} // namespace finfree
