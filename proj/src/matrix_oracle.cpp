#include "finfree/matrix_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "finfree/convolve.hpp"

namespace finfree {

namespace {

using RMatrix = std::vector<std::vector<Rational>>;

RMatrix to_rational(const Eigen::MatrixXd& M)
{
    RMatrix r(static_cast<std::size_t>(M.rows()), std::vector<Rational>(static_cast<std::size_t>(M.cols())));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) r[i][j] = Rational(M(i, j));
    return r;
}

RMatrix multiply(const RMatrix& a, const RMatrix& b)
{
    const std::size_t n = a.size(), m = b.front().size(), inner = b.size();
    RMatrix c(n, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

RMatrix transpose(const RMatrix& a)
{
    RMatrix t(a.front().size(), std::vector<Rational>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

// Faddeev-LeVerrier: N_k = A N_{k-1} + c_{k-1} I, c_k = -tr(A N_k) / k.
RationalPoly char_poly(const RMatrix& A)
{
    const std::size_t n = A.size();
    std::vector<Rational> c(n + 1, Rational(0));
    c[0] = 1;
    RMatrix N(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t k = 1; k <= n; ++k) {
        RMatrix AN = multiply(A, N);
        for (std::size_t i = 0; i < n; ++i) AN[i][i] += c[k - 1];
        N = std::move(AN);
        RMatrix AN2 = multiply(A, N);
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += AN2[i][i];
        c[k] = -tr / static_cast<long>(k);
    }
    return RationalPoly(std::move(c));
}

void require_square_symmetric(const Eigen::MatrixXd& M, const char* what)
{
    if (M.rows() != M.cols() || M.rows() < 1) throw DomainError(std::string(what) + ": matrix must be square");
    if (M != M.transpose())
        throw DomainError(std::string(what) + ": matrix must be symmetric");
}

// Per-coefficient accumulation of (sum, sum of squares, count) plus the range of values seen.
class Accumulator {
public:
    explicit Accumulator(int deg)
        : sum_(deg + 1, 0.0L), sumsq_(deg + 1, 0.0L), lo_(deg + 1, std::numeric_limits<double>::infinity()),
          hi_(deg + 1, -std::numeric_limits<double>::infinity()) {}

    void add(const std::vector<double>& c)
    {
        for (std::size_t k = 0; k < c.size(); ++k) {
            sum_[k] += c[k];
            sumsq_[k] += static_cast<long double>(c[k]) * c[k];
            lo_[k] = std::min(lo_[k], c[k]);
            hi_[k] = std::max(hi_[k], c[k]);
        }
        ++count_;
    }

    McReport report(const RationalPoly& target, std::uint64_t seed) const
    {
        McReport rep;
        rep.samples = count_;
        rep.seed = seed;
        const long double n = static_cast<long double>(count_);
        for (std::size_t k = 1; k < sum_.size(); ++k) {
            McCoefficient c;
            c.index = static_cast<int>(k);
            c.zero_variance = lo_[k] == hi_[k];
            const long double mean = c.zero_variance ? static_cast<long double>(lo_[k]) : sum_[k] / n;
            long double var = 0;
            if (!c.zero_variance && count_ >= 2) var = std::max(0.0L, (sumsq_[k] - sum_[k] * sum_[k] / n) / (n - 1));
            c.mean = static_cast<double>(mean);
            c.standard_error = static_cast<double>(std::sqrt(var / n));
            c.target = to_double(target[k]);
            const double diff = c.mean - c.target;
            if (c.standard_error > 0) c.z_score = diff / c.standard_error;
            else c.z_score = std::fabs(diff) <= 1e-12 * std::max(1.0, std::fabs(c.target)) ? 0.0 : std::copysign(INFINITY, diff);
            rep.coefficients.push_back(c);
        }
        return rep;
    }

private:
    std::vector<long double> sum_, sumsq_;
    std::vector<double> lo_, hi_;
    long count_ = 0;
};

template <class Sample>
McReport run(int deg, const RationalPoly& target, long samples, std::uint64_t seed, Sample sample)
{
    if (samples < 1) throw DomainError("Monte Carlo: samples must be >= 1");
    Accumulator acc(deg);
    for (long start = 0, batch = 0; start < samples; start += mc_batch_size, ++batch) {
        std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(batch)));
        const long stop = std::min(samples, start + mc_batch_size);
        for (long s = start; s < stop; ++s) acc.add(char_poly_interpolated(sample(rng)));
    }
    return acc.report(target, seed);
}

} // namespace

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::vector<double> char_poly_interpolated(const Eigen::MatrixXd& M)
{
    const int d = static_cast<int>(M.rows());
    std::vector<double> nodes(static_cast<std::size_t>(d) + 1), values(nodes.size());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    for (int k = 0; k <= d; ++k) {
        nodes[k] = k - d / 2;
        values[k] = (nodes[k] * I - M).partialPivLu().determinant();
    }
    // Newton divided differences, then expansion into the monomial basis
    std::vector<double> dd = values;
    for (int j = 1; j <= d; ++j)
        for (int k = d; k >= j; --k) dd[k] = (dd[k] - dd[k - 1]) / (nodes[k] - nodes[k - j]);
    std::vector<double> asc(static_cast<std::size_t>(d) + 1, 0.0);  // ascending
    asc[0] = dd[d];
    int deg = 0;
    for (int k = d - 1; k >= 0; --k) {
        // asc <- asc * (x - nodes[k]) + dd[k]
        for (int i = deg + 1; i >= 1; --i) asc[i] = asc[i - 1] - nodes[k] * asc[i];
        asc[0] = -nodes[k] * asc[0] + dd[k];
        ++deg;
    }
    return std::vector<double>(asc.rbegin(), asc.rend());
}

RationalPoly char_poly_exact(const Eigen::MatrixXd& M)
{
    if (M.rows() != M.cols() || M.rows() < 1) throw DomainError("char_poly_exact: matrix must be square");
    return char_poly(to_rational(M));
}

double McReport::max_abs_z() const
{
    double m = 0;
    for (const auto& c : coefficients) m = std::max(m, std::fabs(c.z_score));
    return m;
}

bool McReport::all_zero_variance() const
{
    for (const auto& c : coefficients)
        if (!c.zero_variance) return false;
    return true;
}

McReport mc_boxplus(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, long samples, std::uint64_t seed)
{
    require_square_symmetric(A, "mc_boxplus");
    require_square_symmetric(B, "mc_boxplus");
    if (A.rows() != B.rows()) throw DegreeMismatch(static_cast<int>(A.rows()), static_cast<int>(B.rows()));
    const int d = static_cast<int>(A.rows());
    const RationalPoly target = boxplus(char_poly_exact(A), char_poly_exact(B));
    return run(d, target, samples, seed, [&](std::mt19937_64& rng) {
        const Eigen::MatrixXd O = haar_orthogonal(d, rng);
        return Eigen::MatrixXd(A + O.transpose() * B * O);
    });
}

McReport mc_compression(const Eigen::MatrixXd& A, int ell, long samples, std::uint64_t seed)
{
    require_square_symmetric(A, "mc_compression");
    const int d = static_cast<int>(A.rows());
    if (ell < 1 || ell >= d) throw DomainError("mc_compression: need 1 <= l < d");
    const RationalPoly target = normalized_derivative(char_poly_exact(A), ell);
    return run(ell, target, samples, seed, [&](std::mt19937_64& rng) {
        const Eigen::MatrixXd O = haar_orthogonal(d, rng).topRows(ell);
        return Eigen::MatrixXd(O * A * O.transpose());
    });
}

McReport mc_rect_compression(const Eigen::MatrixXd& A, int ell, long samples, std::uint64_t seed)
{
    const int d = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols()) - d;
    if (d < 1 || n < 0) throw DomainError("mc_rect_compression: A must be d x (d+n) with n >= 0");
    if (ell < 1 || ell >= d) throw DomainError("mc_rect_compression: need 1 <= l < d");
    const RMatrix a = to_rational(A);
    const RationalPoly p = char_poly(multiply(a, transpose(a)));
    const RationalPoly target = apply_Mn_power_normalized(p, Rational(n), d - ell);
    return run(ell, target, samples, seed, [&](std::mt19937_64& rng) {
        const Eigen::MatrixXd U = haar_orthogonal(d, rng).topRows(ell);
        const Eigen::MatrixXd O = haar_orthogonal(d + n, rng).leftCols(ell + n);
        const Eigen::MatrixXd C = U * A * O;
        return Eigen::MatrixXd(C * C.transpose());
    });
}

McReport mc_rect_boxplus(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, long samples, std::uint64_t seed)
{
    const int d = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols()) - d;
    if (d < 1 || n < 0) throw DomainError("mc_rect_boxplus: A must be d x (d+n) with n >= 0");
    if (B.rows() != A.rows() || B.cols() != A.cols()) throw DomainError("mc_rect_boxplus: A and B must have the same shape");
    const RMatrix a = to_rational(A), b = to_rational(B);
    const RationalPoly target =
        rect_boxplus(char_poly(multiply(a, transpose(a))), char_poly(multiply(b, transpose(b))), Rational(n));
    return run(d, target, samples, seed, [&](std::mt19937_64& rng) {
        const Eigen::MatrixXd U = haar_orthogonal(d, rng);
        const Eigen::MatrixXd O = haar_orthogonal(d + n, rng);
        const Eigen::MatrixXd C = A + U * B * O;
        return Eigen::MatrixXd(C * C.transpose());
    });
}

} // namespace finfree
