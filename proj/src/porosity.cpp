#include "otlab/porosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otlab/errors.hpp"

namespace otlab {

double porosity_index(const IntervalSet& A, double x, double s) {
    if (A.empty()) throw InputError("porosity_index: empty set");
    if (!(s > 0.0)) throw InputError("porosity_index: s must be > 0");
    if (!A.contains(x)) throw InputError("porosity_index: x must belong to A");
    // Supremum of |y - x| over y in A cap (x-s, x+s).  On each overlapping
    // interval the supremum sits at a clipped endpoint; a clip at the open
    // ball boundary contributes the (unattained) value s.
    double d = 0.0;
    for (const auto& [a, b] : A.intervals()) {
        if (b <= x - s || a >= x + s) continue;
        double lo = std::max(a, x - s);
        double hi = std::min(b, x + s);
        d = std::max(d, std::max(x - lo, hi - x));
    }
    return std::min(d / s, 1.0);
}

std::vector<PorosityPoint> porosity_profile(const IntervalSet& A, std::span<const double> scales) {
    if (A.empty()) throw InputError("porosity_profile: empty set");
    double prev = std::numeric_limits<double>::infinity();
    for (double s : scales) {
        if (!(s > 0.0) || !(s < prev)) throw InputError("porosity_profile: scales must be positive and strictly decreasing");
        prev = s;
    }
    // The index is piecewise monotone in x between interval endpoints, so the
    // supremum over x in A is attained on endpoints and midpoints.
    std::vector<double> candidates;
    candidates.reserve(3 * A.size());
    for (const auto& [a, b] : A.intervals()) {
        candidates.push_back(a);
        if (b > a) {
            candidates.push_back(0.5 * (a + b));
            candidates.push_back(b);
        }
    }
    std::vector<PorosityPoint> profile;
    profile.reserve(scales.size());
    for (double s : scales) {
        double tau = 0.0;
        for (double x : candidates) tau = std::max(tau, porosity_index(A, x, s));
        profile.push_back({s, tau});
    }
    return profile;
}

std::string to_string(ClassAVerdict v) {
    switch (v) {
        case ClassAVerdict::ConsistentWithPorous: return "consistent-with-porous-class";
        case ClassAVerdict::Inconsistent: return "inconsistent";
        case ClassAVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ClassAVerdict class_a_diagnostic(std::span<const PorosityPoint> profile, double threshold) {
    if (profile.empty()) throw InputError("class_a_diagnostic: empty profile");
    const std::size_t n = profile.size();
    const std::size_t tail = std::min<std::size_t>(3, n);
    auto below = [&](std::size_t i) { return profile[i].tau < threshold; };
    bool tail_below = true, tail_above = true;
    for (std::size_t i = n - tail; i < n; ++i) {
        tail_below = tail_below && below(i);
        tail_above = tail_above && !below(i);
    }
    if (tail_below) {
        // extend the below-threshold suffix as far as it goes
        std::size_t k = n - tail;
        while (k > 0 && below(k - 1)) --k;
        bool nonincreasing = true;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (profile[i].tau > profile[i - 1].tau + 1e-12) nonincreasing = false;
        }
        return nonincreasing ? ClassAVerdict::ConsistentWithPorous : ClassAVerdict::Inconclusive;
    }
    if (tail_above) return ClassAVerdict::Inconsistent;
    return ClassAVerdict::Inconclusive;
}

PiecewiseLinear distance_potential(const IntervalSet& A) {
    if (A.empty()) throw InputError("distance_potential: empty set");
    std::vector<double> xs, vs;
    xs.reserve(3 * A.size());
    vs.reserve(3 * A.size());
    const auto& ivs = A.intervals();
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        if (i > 0) {
            double gap_lo = ivs[i - 1].second, gap_hi = ivs[i].first;
            xs.push_back(0.5 * (gap_lo + gap_hi));
            vs.push_back(0.5 * (gap_hi - gap_lo));
        }
        xs.push_back(ivs[i].first);
        vs.push_back(0.0);
        if (ivs[i].second > ivs[i].first) {
            xs.push_back(ivs[i].second);
            vs.push_back(0.0);
        }
    }
    return PiecewiseLinear(std::move(xs), std::move(vs), -1.0, 1.0);
}

} // namespace otlab
