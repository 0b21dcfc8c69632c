#pragma once

#include <span>
#include <string>
#include <vector>

#include "otlab/interval_set.hpp"
#include "otlab/transport.hpp"

namespace otlab {

struct PorosityPoint {
    double s = 0.0;
    double tau = 0.0;
};

// Porosity index at x in A and scale s > 0: the smallest tau in (0,1) with
// B(x,s) cap A inside the closed ball B(x, tau*s), i.e. the supremum distance
// of in-ball points of A divided by s; 1 when no tau < 1 works (the infimum
// over the empty set).  Exact from the interval endpoints.
double porosity_index(const IntervalSet& A, double x, double s);

// tau(s) = sup over x in A of the index, the supremum taken over the
// certified candidate set of interval endpoints and midpoints (for point
// components, the points themselves).  Scales must be positive and strictly
// decreasing.
std::vector<PorosityPoint> porosity_profile(const IntervalSet& A, std::span<const double> scales);

// Three-valued verdict; finite scans cannot certify the limit in the porous
// class definition, so membership itself is never claimed.
enum class ClassAVerdict { ConsistentWithPorous, Inconsistent, Inconclusive };

std::string to_string(ClassAVerdict v);

// Consistent when the profile tail (at least min(3, #rows) rows) sits below
// the threshold and is nonincreasing; inconsistent when a tail of the same
// length sits at or above it; inconclusive otherwise.
ClassAVerdict class_a_diagnostic(std::span<const PorosityPoint> profile, double threshold);

// psi(x) = d(x, A): zero on A, unit-slope tents across gaps, unit slopes
// outside the hull.  Certified 1-Lipschitz; ready for dual_lower_bound_w1.
PiecewiseLinear distance_potential(const IntervalSet& A);

} // namespace otlab
