#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "finfree/poly.hpp"

namespace finfree {

// Haar orthogonal matrix: QR of an iid standard Gaussian matrix with the columns of Q signed so
// that R has a positive diagonal.
template <class Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> haar_orthogonal(int dim, std::mt19937_64& rng)
{
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (dim < 1) throw DomainError("haar_orthogonal: dim must be >= 1");
    std::normal_distribution<Scalar> gauss(0, 1);
    Mat g(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    const Mat& r = qr.matrixQR();
    for (int j = 0; j < dim; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

// det(x I - M), descending, from LU determinants at deg+1 integer nodes and Newton interpolation.
std::vector<double> char_poly_interpolated(const Eigen::MatrixXd& M);

// Exact characteristic polynomial of the rational matrix whose entries equal those of M.
RationalPoly char_poly_exact(const Eigen::MatrixXd& M);

struct McCoefficient {
    int index;  // coefficient of x^(deg - index)
    double mean;
    double standard_error;
    double target;
    double z_score;
    bool zero_variance;  // every sample produced the same value
};

struct McReport {
    std::vector<McCoefficient> coefficients;
    long samples = 0;
    std::uint64_t seed = 0;

    double max_abs_z() const;
    bool all_zero_variance() const;
};

// Samples are drawn in batches of mc_batch_size; batch b uses an mt19937_64 seeded with
// splitmix64(seed + b), so the stream of a batch does not depend on how batches are scheduled.
constexpr long mc_batch_size = 10000;
std::uint64_t splitmix64(std::uint64_t x);

// E det(x - (A + O^T B O)) against boxplus(char A, char B); A, B symmetric d x d.
McReport mc_boxplus(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, long samples, std::uint64_t seed);
// E det(x - O A O^T) with O the first l rows of a Haar matrix, against (l!/d!) D^(d-l) char A.
McReport mc_compression(const Eigen::MatrixXd& A, int ell, long samples, std::uint64_t seed);
// A is d x (d+n); E det(x - (U A O)(U A O)^T) with U the first l rows of Haar(d) and O the first
// l+n columns of Haar(d+n), against M_n^(d-l) char(A A^T) normalized to be monic.
McReport mc_rect_compression(const Eigen::MatrixXd& A, int ell, long samples, std::uint64_t seed);
// A, B are d x (d+n); E det(x - (A + U B O)(A + U B O)^T) against the rectangular convolution
// of char(A A^T) and char(B B^T).
McReport mc_rect_boxplus(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, long samples, std::uint64_t seed);

} // namespace finfree
