#pragma once

#include <vector>

namespace finfree {

struct Atom {
    double location;
    double weight;
};

// Finite atomic measure. Probability measures (empirical root measures) carry equal weights
// summing to 1; Radon-type measures (G_f, G_g, reweighted root measures) carry arbitrary
// nonnegative masses.
struct AtomicMeasure {
    std::vector<Atom> atoms;

    double total_mass() const;
    // Mass of the closed interval [lo, hi].
    double mass_in(double lo, double hi) const;
};

using RadonAtoms = AtomicMeasure;

// Sorted by location with atoms at equal locations merged and zero weights dropped.
AtomicMeasure canonicalize(AtomicMeasure m);

} // namespace finfree
