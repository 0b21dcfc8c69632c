#pragma once

#include <span>
#include <vector>

#include "otlab/measure.hpp"

namespace otlab {

// One row of a perturbation-rate experiment.  truncation_error_bound is the
// quotient-level error 2*D/h committed by replacing the limit measure with a
// finite-depth approximant at W_1 distance at most D (0 for exact inputs).
struct RateSample {
    double h = 0.0;
    double p = 1.0;
    double distance = 0.0;
    double quotient = 0.0;
    double truncation_error_bound = 0.0;
};

// The shift superposition 0.5*[(id-h)#m + (id+h)#m].
Measure1D shift_superpose(const Measure1D& m, double h);

// distance = W_p(m, m_h); quotient = distance/h.  The identity coupling
// forces quotient <= 1, checked up to 1e-9 (NumericError).
// approx_w1_error is the caller-certified W_1 gap between m and the measure
// it stands in for (e.g. delta_N for a depth-N Cantor approximant).
RateSample rate_quotient(const Measure1D& m, double h, double p, double approx_w1_error = 0.0);

// One RateSample per h, input order preserved; parallel over samples.
std::vector<RateSample> rate_scan(const Measure1D& m, std::span<const double> hs, double p,
                                  double approx_w1_error = 0.0);

// Geometric grid with ratio 1/2 from 1e-1 down to 1e-6.
std::vector<double> default_h_grid();

struct POrderingRow {
    double p = 1.0;
    double quotient = 0.0;
    double lower_margin = 0.0; // W_p/h - W_1/h          (>= 0 expected)
    double upper_margin = 0.0; // (W_1/h)^(1/p) - W_p/h  (>= 0 expected)
};

struct POrderingReport {
    double h = 0.0;
    double w1_quotient = 0.0;
    std::vector<POrderingRow> rows;
    bool ok = true;
};

// Checks W_1/h <= W_p/h <= (W_1/h)^(1/p) for the shift superposition, within
// 1e-9.  A violation signals a bug in the distance routines, not a math fact.
POrderingReport p_ordering_check(const Measure1D& m, double h, std::span<const double> ps);

} // namespace otlab
