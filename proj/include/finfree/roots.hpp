#pragma once

#include <vector>

#include "finfree/poly.hpp"

namespace finfree {

struct RootOptions {
    unsigned precision_bits = default_precision_bits;
    // Largest |Im z| / max(1, |z|) still projected onto the real axis.
    double tol = 1e-20;
    // Iteration budget per precision level.
    int max_iterations = 500;
    unsigned max_precision_bits = 4096;
};

struct ComplexRoot {
    BigReal re;
    BigReal im;
};

struct ComplexRootReport {
    std::vector<ComplexRoot> roots;  // with multiplicity, unordered
    int iterations = 0;              // sweeps summed over precision levels
    unsigned precision_bits = 0;     // precision at which the iteration finished
};

struct RootReport {
    std::vector<BigReal> roots;  // real roots with multiplicity, ascending
    double max_imag_residual = 0;
    int iterations = 0;
    unsigned precision_bits = 0;
};

// All complex roots by Aberth-Ehrlich iteration. Exact zero roots are split off first; for
// rational input repeated factors are removed by a square-free decomposition so that multiple
// roots come out exactly repeated. Throws NonConvergence at the precision ceiling.
ComplexRootReport find_complex_roots(const RationalPoly& p, const RootOptions& opts = {});
ComplexRootReport find_complex_roots(const RealPoly& p, const RootOptions& opts = {});

// Real roots; throws ComplexRoots when some root fails the real-axis test.
RootReport find_roots(const RationalPoly& p, const RootOptions& opts = {});
RootReport find_roots(const RealPoly& p, const RootOptions& opts = {});

// Square-free factors of a rational polynomial: p = prod_m f_m^m, returned as (f_m, m) with
// monic nonconstant f_m.
std::vector<std::pair<RationalPoly, int>> square_free_decomposition(const RationalPoly& p);

} // namespace finfree
