#include "finfree/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <mpfr.h>

namespace finfree {

namespace {

// ---------------------------------------------------------------------------------------------
// Exact polynomial helpers over Q (descending coefficients).

// Remainder of a by the monic polynomial b; quotient written to q when non-null.
RationalPoly divide_monic(const RationalPoly& a, const RationalPoly& b, RationalPoly* q)
{
    const int da = a.degree(), db = b.degree();
    if (da < db) {
        if (q) *q = RationalPoly();
        return a;
    }
    std::vector<Rational> r = a.coeffs();
    std::vector<Rational> quot(static_cast<std::size_t>(da - db) + 1);
    for (int k = 0; k <= da - db; ++k) {
        const Rational t = r[k];
        quot[k] = t;
        if (t == 0) continue;
        for (int i = 1; i <= db; ++i) r[k + i] -= t * b[i];
    }
    if (q) *q = RationalPoly(std::move(quot));
    std::vector<Rational> rem(r.begin() + (da - db + 1), r.end());
    return RationalPoly(std::move(rem));
}

RationalPoly gcd(RationalPoly a, RationalPoly b)
{
    if (a.is_zero()) return b.is_zero() ? b : monic(b);
    if (b.is_zero()) return monic(a);
    a = monic(a);
    b = monic(b);
    while (!b.is_zero()) {
        RationalPoly r = divide_monic(a, b, nullptr);
        a = std::move(b);
        b = r.is_zero() ? r : monic(r);
    }
    return a;
}

RationalPoly exact_quotient(const RationalPoly& a, const RationalPoly& b)
{
    RationalPoly q;
    divide_monic(a, b, &q);
    return q;
}

// Square-free test modulo the Mersenne prime 2^61 - 1: gcd(p, p') = 1 there implies gcd = 1
// over Q for monic p. Returns false when undecided or not square-free.
constexpr std::uint64_t mod_prime = (std::uint64_t(1) << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % mod_prime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e)
{
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

bool reduce_mod(const Rational& q, std::uint64_t& out)
{
    const auto* v = q.backend().data();
    const std::uint64_t den = mpz_fdiv_ui(mpq_denref(v), mod_prime);
    if (den == 0) return false;
    std::uint64_t num = mpz_fdiv_ui(mpq_numref(v), mod_prime);
    out = mulmod(num, powmod(den, mod_prime - 2));
    return true;
}

// Degree of gcd over F_p of two descending coefficient lists; trailing storage reused.
int gcd_degree_mod(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b)
{
    auto strip = [](std::vector<std::uint64_t>& v) {
        std::size_t z = 0;
        while (z < v.size() && v[z] == 0) ++z;
        v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(z));
    };
    strip(a);
    strip(b);
    while (!b.empty()) {
        if (a.size() < b.size()) std::swap(a, b);
        const std::uint64_t inv = powmod(b[0], mod_prime - 2);
        while (a.size() >= b.size() && !a.empty()) {
            const std::uint64_t t = mulmod(a[0], inv);
            for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + mod_prime - mulmod(t, b[i])) % mod_prime;
            strip(a);
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

bool square_free_mod_p(const RationalPoly& p)
{
    const int d = p.degree();
    std::vector<std::uint64_t> a(static_cast<std::size_t>(d) + 1), b(static_cast<std::size_t>(d));
    for (int k = 0; k <= d; ++k)
        if (!reduce_mod(p[k], a[k])) return false;
    for (int k = 0; k < d; ++k) b[k] = mulmod(a[k], static_cast<std::uint64_t>(d - k));
    return gcd_degree_mod(std::move(a), std::move(b)) == 0;
}

// ---------------------------------------------------------------------------------------------
// Raw MPFR storage.

class MpArray {
public:
    MpArray(std::size_t n, mpfr_prec_t prec) : v_(n)
    {
        for (auto& x : v_) mpfr_init2(&x, prec);
    }
    ~MpArray()
    {
        for (auto& x : v_) mpfr_clear(&x);
    }
    MpArray(const MpArray&) = delete;
    MpArray& operator=(const MpArray&) = delete;

    mpfr_ptr operator[](std::size_t i) { return &v_[i]; }
    std::size_t size() const { return v_.size(); }
    void round_to(mpfr_prec_t prec)
    {
        for (auto& x : v_) mpfr_prec_round(&x, prec, MPFR_RNDN);
    }

private:
    std::vector<__mpfr_struct> v_;
};

// Coefficients of a monic, square-free polynomial with nonzero constant term, reloadable at
// any precision from their exact (or fixed BigReal) source.
struct CoefficientSource {
    std::vector<Rational> exact;
    std::vector<BigReal> real;

    int degree() const { return static_cast<int>((exact.empty() ? real.size() : exact.size())) - 1; }

    void load(MpArray& c) const
    {
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!exact.empty()) mpfr_set_q(c[k], exact[k].backend().data(), MPFR_RNDN);
            else mpfr_set(c[k], real[k].backend().data(), MPFR_RNDN);
        }
    }
};

// Starting points from the Newton polygon of |coefficients| (upper convex hull of
// (i, log2 |a_i|) with a_i the coefficient of x^i), placed on circles with a rotation offset.
std::vector<std::complex<double>> initial_points(MpArray& c, int d)
{
    std::vector<double> lg(static_cast<std::size_t>(d) + 1);
    std::vector<bool> nonzero(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) {
        mpfr_ptr a = c[static_cast<std::size_t>(d - i)];
        nonzero[i] = !mpfr_zero_p(a);
        if (nonzero[i]) {
            long e;
            double m = mpfr_get_d_2exp(&e, a, MPFR_RNDN);
            lg[i] = std::log2(std::fabs(m)) + static_cast<double>(e);
        }
    }
    std::vector<int> hull;
    for (int i = 0; i <= d; ++i) {
        if (!nonzero[i]) continue;
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull.back();
            // drop b when it lies on or below the chord from a to i
            const double cross = (lg[b] - lg[a]) * (i - a) - (lg[i] - lg[a]) * (b - a);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    std::vector<std::complex<double>> z;
    z.reserve(static_cast<std::size_t>(d));
    const double two_pi = 2.0 * std::acos(-1.0);
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const int i0 = hull[h], i1 = hull[h + 1], m = i1 - i0;
        double log_r = (lg[i0] - lg[i1]) / m;
        log_r = std::clamp(log_r, -900.0, 900.0);
        const double r = std::exp2(log_r);
        for (int j = 0; j < m; ++j) {
            const double ang = two_pi * j / m + two_pi * i0 / d + 0.7;
            z.emplace_back(r * std::cos(ang), r * std::sin(ang));
        }
    }
    return z;
}

class Aberth {
public:
    Aberth(const CoefficientSource& src, const RootOptions& opts)
        : src_(src), opts_(opts), d_(src.degree()), bits_(opts.precision_bits),
          c_(static_cast<std::size_t>(d_) + 1, bits_), cabs_(static_cast<std::size_t>(d_) + 1, 53),
          zr_(static_cast<std::size_t>(d_), bits_), zi_(static_cast<std::size_t>(d_), bits_), zd_(static_cast<std::size_t>(d_)),
          t_(12, bits_), s_(4, 53)
    {
        src_.load(c_);
        refresh_abs();
        zd_ = initial_points(c_, d_);
        std::vector<std::complex<long double>> zl(zd_.begin(), zd_.end());
        if (extended_phase(zl)) {
            for (int i = 0; i < d_; ++i) zd_[i] = {static_cast<double>(zl[i].real()), static_cast<double>(zl[i].imag())};
            for (int i = 0; i < d_; ++i) {
                mpfr_set_ld(zr_[i], zl[i].real(), MPFR_RNDN);
                mpfr_set_ld(zi_[i], zl[i].imag(), MPFR_RNDN);
            }
        } else {
            for (int i = 0; i < d_; ++i) {
                mpfr_set_d(zr_[i], zd_[i].real(), MPFR_RNDN);
                mpfr_set_d(zi_[i], zd_[i].imag(), MPFR_RNDN);
            }
        }
    }

    ComplexRootReport run()
    {
        ComplexRootReport rep;
        for (;;) {
            std::size_t stuck = 0;
            const bool ok = iterate(rep.iterations, stuck);
            if (ok) break;
            if (bits_ * 2 > opts_.max_precision_bits) throw NonConvergence(stuck, bits_);
            raise_precision(bits_ * 2);
        }
        sweep(nullptr);  // polish
        ++rep.iterations;
        rep.precision_bits = bits_;
        PrecisionScope scope(bits_);
        for (int i = 0; i < d_; ++i) {
            ComplexRoot r{BigReal(0), BigReal(0)};
            mpfr_set(r.re.backend().data(), zr_[i], MPFR_RNDN);
            mpfr_set(r.im.backend().data(), zi_[i], MPFR_RNDN);
            set_precision(r.re, bits_);
            set_precision(r.im, bits_);
            rep.roots.push_back(std::move(r));
        }
        return rep;
    }

private:
    enum class State { active, done, blocked };

    // Cheap approach phase in extended precision, stopped once every root is either converged
    // to long double accuracy or lost in rounding noise. False when the coefficients or the
    // evaluations leave the long double range; the caller then starts from the circles.
    bool extended_phase(std::vector<std::complex<long double>>& z)
    {
        using cld = std::complex<long double>;
        std::vector<long double> c(static_cast<std::size_t>(d_) + 1);
        for (int k = 0; k <= d_; ++k) {
            c[k] = mpfr_get_ld(c_[k], MPFR_RNDN);
            if (!std::isfinite(c[k])) return false;
        }
        const long double eps = std::numeric_limits<long double>::epsilon();
        std::vector<bool> done(static_cast<std::size_t>(d_), false);
        for (int it = 0; it < std::min(opts_.max_iterations, 100); ++it) {
            bool all = true;
            for (int i = 0; i < d_; ++i) {
                if (done[i]) continue;
                cld p = c[0], q = 0;
                const long double za = std::abs(z[i]);
                long double bound = std::fabs(c[0]);
                for (int k = 1; k <= d_; ++k) {
                    q = q * z[i] + p;
                    p = p * z[i] + c[k];
                    bound = bound * za + std::fabs(c[k]);
                }
                if (!std::isfinite(bound) || !std::isfinite(std::abs(q))) return false;
                if (q == cld(0)) return false;
                const cld N = p / q;
                cld S = 0;
                for (int j = 0; j < d_; ++j)
                    if (j != i && z[i] != z[j]) S += 1.0L / (z[i] - z[j]);
                cld w = N / (1.0L - N * S);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = N;
                z[i] -= w;
                // no noise test here: roots keep moving until the step itself is at rounding level
                if (std::abs(w) <= 8 * eps * std::max(1.0L, std::abs(z[i]))) done[i] = true;
                else all = false;
            }
            if (all) return true;
        }
        return true;
    }

    void refresh_abs()
    {
        for (int k = 0; k <= d_; ++k) mpfr_abs(cabs_[k], c_[k], MPFR_RNDU);
    }

    void raise_precision(unsigned bits)
    {
        bits_ = bits;
        c_.round_to(bits_);
        src_.load(c_);
        refresh_abs();
        zr_.round_to(bits_);
        zi_.round_to(bits_);
        t_.round_to(bits_);
    }

    // Runs sweeps at the current precision; true when every root converged.
    bool iterate(int& iterations, std::size_t& stuck)
    {
        state_.assign(static_cast<std::size_t>(d_), State::active);
        for (int it = 0; it < opts_.max_iterations; ++it) {
            sweep(&state_);
            ++iterations;
            bool all_done = true, any_active = false;
            int blocked = 0;
            for (int i = 0; i < d_; ++i) {
                if (state_[i] != State::done) all_done = false;
                if (state_[i] == State::active) any_active = true;
                if (state_[i] == State::blocked) ++blocked;
            }
            if (all_done) return true;
            // enough roots sit in rounding noise that more precision is needed anyway
            if (blocked >= std::max(2, d_ / 20) && bits_ * 2 <= opts_.max_precision_bits) break;
            if (!any_active) break;
        }
        stuck = 0;
        while (stuck < state_.size() && state_[stuck] == State::done) ++stuck;
        return false;
    }

    // One Gauss-Seidel Aberth sweep. With `state` null every root is updated and flags are
    // left alone.
    void sweep(std::vector<State>* state)
    {
        const double accept = std::ldexp(1.0, -static_cast<int>(bits_ / 2));
        const double noise_accept = opts_.tol * 1e-6;
        for (int i = 0; i < d_; ++i) {
            if (state && (*state)[i] == State::done) continue;
            bool noisy = false;
            std::complex<double> N = newton_ratio(i, noisy);
            std::complex<double> S(0, 0);
            const double scale_i = std::max(1.0, std::abs(zd_[i]));
            for (int j = 0; j < d_; ++j) {
                if (j == i) continue;
                std::complex<double> diff = zd_[i] - zd_[j];
                if (std::abs(diff) <= 1e-8 * scale_i) {
                    mpfr_sub(t_[0], zr_[i], zr_[j], MPFR_RNDN);
                    mpfr_sub(t_[1], zi_[i], zi_[j], MPFR_RNDN);
                    diff = {mpfr_get_d(t_[0], MPFR_RNDN), mpfr_get_d(t_[1], MPFR_RNDN)};
                }
                if (diff != std::complex<double>(0, 0)) S += 1.0 / diff;
            }
            std::complex<double> w = N / (1.0 - N * S);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = N;
            mpfr_sub_d(zr_[i], zr_[i], w.real(), MPFR_RNDN);
            mpfr_sub_d(zi_[i], zi_[i], w.imag(), MPFR_RNDN);
            zd_[i] = {mpfr_get_d(zr_[i], MPFR_RNDN), mpfr_get_d(zi_[i], MPFR_RNDN)};
            if (!state) continue;
            const double step = std::abs(w) / std::max(1.0, std::abs(zd_[i]));
            if (step <= accept) (*state)[i] = State::done;
            else if (noisy) (*state)[i] = step <= noise_accept ? State::done : State::blocked;
            else (*state)[i] = State::active;
        }
    }

    // p(z_i) / p'(z_i) by complex Horner; `noisy` reports |p| under the rounding-noise bound.
    std::complex<double> newton_ratio(int i, bool& noisy)
    {
        mpfr_ptr x = zr_[i], y = zi_[i];
        mpfr_ptr pr = t_[2], pi = t_[3], qr = t_[4], qi = t_[5], a = t_[6], b = t_[7];
        mpfr_set(pr, c_[0], MPFR_RNDN);
        mpfr_set_zero(pi, 1);
        mpfr_set_zero(qr, 1);
        mpfr_set_zero(qi, 1);
        // noise bound accumulator: sum |c_k| |z|^{d-k}
        mpfr_ptr zabs = s_[0], acc = s_[1];
        mpfr_hypot(zabs, x, y, MPFR_RNDU);
        mpfr_set(acc, cabs_[0], MPFR_RNDU);
        for (int k = 1; k <= d_; ++k) {
            // q <- q z + p
            mpfr_fmms(a, qr, x, qi, y, MPFR_RNDN);
            mpfr_fmma(b, qr, y, qi, x, MPFR_RNDN);
            mpfr_add(qr, a, pr, MPFR_RNDN);
            mpfr_add(qi, b, pi, MPFR_RNDN);
            // p <- p z + c_k
            mpfr_fmms(a, pr, x, pi, y, MPFR_RNDN);
            mpfr_fmma(b, pr, y, pi, x, MPFR_RNDN);
            mpfr_add(pr, a, c_[k], MPFR_RNDN);
            mpfr_set(pi, b, MPFR_RNDN);
            mpfr_fma(acc, acc, zabs, cabs_[k], MPFR_RNDU);
        }
        mpfr_mul_ui(acc, acc, static_cast<unsigned long>(4 * d_), MPFR_RNDU);
        mpfr_mul_2si(acc, acc, -static_cast<long>(bits_), MPFR_RNDU);
        mpfr_ptr pabs = s_[2];
        mpfr_hypot(pabs, pr, pi, MPFR_RNDN);
        noisy = mpfr_cmp(pabs, acc) <= 0;

        // N = p conj(q) / |q|^2
        mpfr_ptr den = t_[8], nr = t_[9], ni = t_[10];
        mpfr_fmma(den, qr, qr, qi, qi, MPFR_RNDN);
        if (mpfr_zero_p(den)) {
            const double s = 1e-3 * std::max(1.0, std::abs(zd_[i]));
            return {s, s};
        }
        mpfr_fmma(nr, pr, qr, pi, qi, MPFR_RNDN);
        mpfr_fmms(ni, pi, qr, pr, qi, MPFR_RNDN);
        mpfr_div(nr, nr, den, MPFR_RNDN);
        mpfr_div(ni, ni, den, MPFR_RNDN);
        return {mpfr_get_d(nr, MPFR_RNDN), mpfr_get_d(ni, MPFR_RNDN)};
    }

    const CoefficientSource& src_;
    RootOptions opts_;
    int d_;
    unsigned bits_;
    MpArray c_, cabs_, zr_, zi_;
    std::vector<std::complex<double>> zd_;
    MpArray t_, s_;
    std::vector<State> state_;
};

ComplexRoot exact_root(const Rational& v, unsigned bits)
{
    return {make_bigreal(v, bits), make_bigreal(Rational(0), bits)};
}

void append_roots(std::vector<ComplexRoot>& out, const ComplexRootReport& rep, int multiplicity)
{
    for (int m = 0; m < multiplicity; ++m)
        for (const auto& r : rep.roots) out.push_back(r);
}

// Number of exactly vanishing trailing coefficients (roots at zero).
template <class S>
int zero_root_count(const Poly<S>& p)
{
    int z = 0;
    for (int k = p.degree(); k > 0 && p[k] == 0; --k) ++z;
    return z;
}

template <class S>
Poly<S> drop_zero_roots(const Poly<S>& p, int z)
{
    std::vector<S> c(p.coeffs().begin(), p.coeffs().end() - z);
    return Poly<S>(std::move(c));
}

ComplexRootReport solve_square_free(const RationalPoly& f, const RootOptions& opts)
{
    if (f.degree() == 1) {
        ComplexRootReport rep;
        rep.roots.push_back(exact_root(-f[1], opts.precision_bits));
        rep.precision_bits = opts.precision_bits;
        return rep;
    }
    CoefficientSource src;
    src.exact = f.coeffs();
    return Aberth(src, opts).run();
}

void check_options(const RootOptions& opts)
{
    if (opts.precision_bits < 53) throw DomainError("find_roots: precision below 53 bits");
    if (!(opts.tol > 0)) throw DomainError("find_roots: tolerance must be positive");
    if (opts.max_iterations < 1) throw DomainError("find_roots: iteration budget must be positive");
}

RootReport to_real_report(const ComplexRootReport& c, const RootOptions& opts)
{
    RootReport rep;
    rep.iterations = c.iterations;
    rep.precision_bits = c.precision_bits;
    std::size_t off_axis = 0;
    for (const auto& r : c.roots) {
        const double re = to_double(r.re), im = std::fabs(to_double(r.im));
        if (im > opts.tol * std::max(1.0, std::fabs(re))) {
            ++off_axis;
            continue;
        }
        rep.max_imag_residual = std::max(rep.max_imag_residual, im);
        rep.roots.push_back(r.re);
    }
    if (off_axis) throw ComplexRoots(off_axis);
    std::sort(rep.roots.begin(), rep.roots.end());
    return rep;
}

} // namespace

std::vector<std::pair<RationalPoly, int>> square_free_decomposition(const RationalPoly& p)
{
    if (p.degree() < 1) return {};
    // Yun's algorithm
    const RationalPoly f = monic(p);
    const RationalPoly fp = differentiate(f);
    const RationalPoly a0 = gcd(f, fp);
    RationalPoly b = exact_quotient(f, a0);
    RationalPoly c = exact_quotient(monic(fp), a0);
    // f' / a0 carries the leading factor d of f'; keep the scaling consistent with b'
    c = Rational(f.degree()) * c;
    RationalPoly dd = c - differentiate(b);
    std::vector<std::pair<RationalPoly, int>> out;
    for (int i = 1; b.degree() > 0; ++i) {
        RationalPoly a = gcd(b, dd);
        RationalPoly nb = exact_quotient(b, a);
        RationalPoly nc = dd.is_zero() ? RationalPoly() : exact_quotient(dd, a);
        if (a.degree() > 0) out.emplace_back(a, i);
        b = std::move(nb);
        dd = nc - differentiate(b);
    }
    return out;
}

ComplexRootReport find_complex_roots(const RationalPoly& p, const RootOptions& opts)
{
    check_options(opts);
    if (p.degree() < 1) throw DomainError("find_roots: polynomial must be nonconstant");
    const RationalPoly q = monic(p);
    const int zeros = zero_root_count(q);
    ComplexRootReport rep;
    rep.precision_bits = opts.precision_bits;
    for (int k = 0; k < zeros; ++k) rep.roots.push_back(exact_root(Rational(0), opts.precision_bits));
    const RationalPoly rest = drop_zero_roots(q, zeros);
    if (rest.degree() < 1) return rep;

    std::vector<std::pair<RationalPoly, int>> factors;
    if (square_free_mod_p(rest)) factors.emplace_back(rest, 1);
    else factors = square_free_decomposition(rest);
    unsigned bits = opts.precision_bits;
    for (const auto& [f, m] : factors) {
        ComplexRootReport part = solve_square_free(f, opts);
        rep.iterations += part.iterations;
        bits = std::max(bits, part.precision_bits);
        append_roots(rep.roots, part, m);
    }
    rep.precision_bits = bits;
    return rep;
}

ComplexRootReport find_complex_roots(const RealPoly& p, const RootOptions& opts)
{
    check_options(opts);
    if (p.degree() < 1) throw DomainError("find_roots: polynomial must be nonconstant");
    const RealPoly q = monic(p);
    const int zeros = zero_root_count(q);
    ComplexRootReport rep;
    rep.precision_bits = opts.precision_bits;
    for (int k = 0; k < zeros; ++k) rep.roots.push_back(exact_root(Rational(0), opts.precision_bits));
    const RealPoly rest = drop_zero_roots(q, zeros);
    if (rest.degree() < 1) return rep;
    if (rest.degree() == 1) {
        PrecisionScope scope(opts.precision_bits);
        ComplexRoot r{BigReal(-rest[1]), BigReal(0)};
        set_precision(r.re, opts.precision_bits);
        set_precision(r.im, opts.precision_bits);
        rep.roots.push_back(std::move(r));
        return rep;
    }
    CoefficientSource src;
    src.real = rest.coeffs();
    ComplexRootReport part = Aberth(src, opts).run();
    rep.iterations = part.iterations;
    rep.precision_bits = part.precision_bits;
    append_roots(rep.roots, part, 1);
    return rep;
}

RootReport find_roots(const RationalPoly& p, const RootOptions& opts)
{
    return to_real_report(find_complex_roots(p, opts), opts);
}

RootReport find_roots(const RealPoly& p, const RootOptions& opts)
{
    return to_real_report(find_complex_roots(p, opts), opts);
}

} // namespace finfree
