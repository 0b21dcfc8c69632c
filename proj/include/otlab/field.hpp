#pragma once

#include <functional>
#include <span>
#include <vector>

#include "otlab/interval_set.hpp"
#include "otlab/measure.hpp"

namespace otlab {

struct FiberEntry {
    double v; // velocity
    double p; // probability
};

// One base point of a discrete measure field: position, base weight, and the
// fiber distribution over velocities (a probability vector).
struct Fiber {
    double x = 0.0;
    double weight = 0.0;
    std::vector<FiberEntry> dist;
};

// Discrete measure field over an atomic base: the position marginal is
// sum_i weight_i * delta_{x_i}, and every base point carries a finite
// velocity distribution.  Immutable after construction.
class MeasureField {
public:
    explicit MeasureField(std::vector<Fiber> fibers);

    // Fiber 0.5*[delta_{-1} + delta_{+1}] over every atom of the base.
    static MeasureField unit_symmetric(const Measure1D& atomic_base);
    // Map-induced field (id, f)#mu with single-point fibers.
    static MeasureField from_map(const Measure1D& atomic_base, std::span<const double> f);
    static MeasureField from_map(const Measure1D& atomic_base,
                                 const std::function<double(double)>& f);

    const std::vector<Fiber>& fibers() const { return fibers_; }
    Measure1D base() const;
    double total_mass() const;

    // (pi_x + h pi_v)#xi as an atomic measure, exact-position atoms merged.
    Measure1D exp_map(double h) const;

    // Fiberwise mean velocities b(x_i).
    std::vector<double> barycenter() const;
    // Fibers translated by -b(x_i); the result has null barycenter.
    MeasureField centered() const;

    // (pi_x, lambda pi_v)#xi, lambda >= 0.
    MeasureField scaled(double lambda) const;
    // Drop base points outside A, keep weights.  Throws when nothing remains.
    MeasureField restricted(const IntervalSet& A) const;
    // For symmetric fields 0.5*[(id,-f) + (id,f)]#mu with f >= 0: replace f by
    // min(f, R).  Throws on non-symmetric input.
    MeasureField truncated_symmetric(double R) const;

    double second_moment() const; // ||xi||^2
    double norm() const;          // ||xi||
    double max_abs_velocity() const;

    bool same_base(const MeasureField& other, double tol = 1e-12) const;

private:
    std::vector<Fiber> fibers_;
};

// Fiberwise 2-Wasserstein metric over a common base:
// W_mu^2(xi, zeta) = sum_i w_i W_2^2(fiber_i(xi), fiber_i(zeta)).
double w_mu(const MeasureField& xi, const MeasureField& zeta);

// Metric scalar product 0.5*(||xi||^2 + ||zeta||^2 - W_mu^2(xi, zeta)).
double inner(const MeasureField& xi, const MeasureField& zeta);

struct LimsupRow {
    double h = 0.0;
    double quotient = 0.0; // W_2(base, exp_map(h)) / h
    double deficit = 0.0;  // ||xi|| - quotient
};

struct LimsupReport {
    double target = 0.0; // ||xi||
    std::vector<LimsupRow> rows;
};

// Rate quotients of the curve h -> exp(h*xi) against the field norm; the
// trivial coupling forces quotient <= ||xi|| + 1e-9, asserted per row.
LimsupReport limsup_condition_check(const MeasureField& xi, std::span<const double> hs);

struct RemovebaryRow {
    double h = 0.0;
    double lhs = 0.0;    // W^2(mu, exp(h*zeta)) / h^2
    double rhs = 0.0;    // W^2(mu, exp(h*zeta^0)) / h^2 + ||b||^2
    double margin = 0.0; // rhs - lhs
};

struct RemovebaryReport {
    double barycenter_norm2 = 0.0;
    std::vector<RemovebaryRow> rows;
};

// Barycenter-removal inequality scan; asserts margin >= -1e-6 at the smallest
// scanned h.
RemovebaryReport removebary_check(const MeasureField& zeta, std::span<const double> hs);

} // namespace otlab
