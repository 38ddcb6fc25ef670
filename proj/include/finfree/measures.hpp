#pragma once

#include <complex>
#include <ostream>
#include <variant>
#include <vector>

#include "finfree/atoms.hpp"
#include "finfree/scalar.hpp"

namespace finfree {

// Uniform probability measure on the given roots (with multiplicity).
AtomicMeasure erm(const std::vector<BigReal>& roots);
AtomicMeasure erm(const std::vector<double>& roots);

// Push-forward by t -> alpha t.
AtomicMeasure dilate_measure(const AtomicMeasure& mu, double alpha);
// Symmetrized push-forward by t -> sqrt(t): each atom (x, w) becomes (+-sqrt(x), w/2).
AtomicMeasure sqrt_symmetrize(const AtomicMeasure& mu);
// Push-forward by t -> t^2.
AtomicMeasure square_pushforward(const AtomicMeasure& mu);

// (x, w) -> (x, d x^2 w) and (x, d x w); atoms with zero mass are dropped.
RadonAtoms radon_t2(const AtomicMeasure& mu, double d);
RadonAtoms radon_t(const AtomicMeasure& mu, double d);

// Semicircle on [-2, 2].
struct Semicircle {};
// Density sqrt(4c - (x-1-c)^2) / (2 pi x) pushed forward by x -> scale x; rate c >= 1.
struct MarchenkoPastur {
    double rate = 1;
    double scale = 1;
};
struct Cauchy {};
// Symmetrized square root of the push-forward of MarchenkoPastur(1/lambda) by t -> lambda t.
struct RectGaussian {
    double lambda = 1;
};
// Free Levy-Khintchine triple: R(z) = gamma + sigma2 z + int (z+t)/(1-zt) t^2/(t^2+1) dnu(t).
struct FreeIdAtomic {
    double gamma = 0;
    double sigma2 = 0;
    AtomicMeasure nu;
};
// Rectangular ID law with C(z) = z int (t^2+1)/(1 - z t^2) dG(t).
struct RectIdAtomic {
    double lambda = 1;
    AtomicMeasure G;
};

using ReferenceLaw = std::variant<Semicircle, MarchenkoPastur, Cauchy, RectGaussian, FreeIdAtomic, RectIdAtomic>;

// CDF F(x) = law((-inf, x]) and its left limit law((-inf, x)). ID laws are supported when they
// reduce to a point mass, a shifted and scaled semicircle, a shifted and scaled MarchenkoPastur
// law or a scaled rectangular Gaussian; UnsupportedCdf otherwise.
double cdf(const ReferenceLaw& law, double x);
double cdf_left(const ReferenceLaw& law, double x);

// sup_x |F_mu(x) - F(x)|, evaluated on both sides of every atom.
double kolmogorov_distance(const AtomicMeasure& mu, const ReferenceLaw& law);
double kolmogorov_distance(const AtomicMeasure& mu, const AtomicMeasure& nu);

// Finite-sum transforms; PoleProximity when |1 - z t| (resp. |1 - z t^2|) < pole_tol at an atom.
std::complex<double> r_transform_eval(const FreeIdAtomic& law, std::complex<double> z, double pole_tol = 1e-12);
std::complex<double> c_transform_eval(const RectIdAtomic& law, std::complex<double> z, double pole_tol = 1e-12);

// Rectangular R-transform C(z) = U(z / H^{-1}(z) - 1) of a symmetric atomic measure, with
// H(z) = z (lambda M(z) + 1)(M(z) + 1), M the moment generating function of mu^2, and
// U(y) = (-lambda - 1 + sqrt((lambda+1)^2 + 4 lambda y)) / (2 lambda). H is inverted by bisection
// on a bracket where it is increasing; BracketFailure when no such bracket is found.
double rect_C_numeric(const AtomicMeasure& mu, double lambda, double z);

// CSV rows: location, weight, F_emp, F_ref.
void write_cdf_csv(std::ostream& out, const AtomicMeasure& mu, const ReferenceLaw& law);

} // namespace finfree
