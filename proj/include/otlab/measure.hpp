#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "otlab/interval_set.hpp"

namespace otlab {

struct Atom {
    double pos;
    double mass;
};

// Uniform density mass/(right-left) on [left, right].
struct Segment {
    double left;
    double right;
    double mass;
    double density() const { return mass / (right - left); }
};

// Piecewise-linear nondecreasing function with jump bookkeeping.
// Linear between breakpoints, constant extension outside.  CDFs evaluate
// right-continuously, quantiles left-continuously.
class MonotoneFn {
public:
    struct Breakpoint {
        double x;
        double value_left;
        double value_right;
    };
    enum class Continuity { Right, Left };

    MonotoneFn(std::vector<Breakpoint> bps, Continuity c);

    // Restricts the evaluation domain to (lo, hi]; throws std::domain_error outside.
    void set_domain(double lo, double hi);

    double operator()(double x) const;
    double value_before(double x) const; // left limit
    double value_after(double x) const;  // right limit

    const std::vector<Breakpoint>& breakpoints() const { return bps_; }
    Continuity continuity() const { return continuity_; }

private:
    std::vector<Breakpoint> bps_;
    Continuity continuity_;
    bool has_domain_ = false;
    double domain_lo_ = 0.0, domain_hi_ = 0.0;
};

// Exact finite-complexity nonnegative measure on R: atoms plus
// piecewise-uniform segments.  An atom may sit inside a segment; the parts
// superpose.  Immutable after construction; total mass strictly positive.
class Measure1D {
public:
    Measure1D(std::vector<Atom> atoms, std::vector<Segment> segments);

    static Measure1D dirac(double pos, double mass = 1.0);
    static Measure1D uniform(double left, double right, double mass = 1.0);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Segment>& segments() const { return segments_; }
    double total_mass() const { return total_mass_; }
    bool is_atomic() const { return segments_.empty(); }
    std::pair<double, double> support_hull() const;

    // F(x) = mass((-inf, x]), right-continuous.
    double cdf_at(double x) const;
    // Left limit F(x^-) = mass((-inf, x)).
    double cdf_before(double x) const;
    MonotoneFn cdf() const;

    // Q(r) = inf{x : F(x) >= r} for r in (0, total_mass].
    // Throws std::domain_error outside the domain.
    double quantile_at(double r) const;
    MonotoneFn quantile() const;

    // Affine image (ax+b)#m; a = 0 collapses to a single atom at b.
    Measure1D pushforward_affine(double a, double b) const;

    // Restriction to a finite union of closed intervals.  Atoms on interval
    // endpoints are kept.  Throws InputError when the result has no mass.
    Measure1D restrict_to(const IntervalSet& A) const;

    // p-th absolute moment, p >= 1.  Closed form for atoms and for segments
    // with p in {1,2}; adaptive quadrature (rel. tol 1e-10) otherwise.
    double moment(double p) const;

    // Sorted distinct atom positions and segment endpoints.
    std::vector<double> breakpoints() const;

    // Measure equality through CDF agreement (value and left limit) at the
    // union of breakpoints of both representations.
    bool approx_equal(const Measure1D& other, double tol = 1e-12) const;

    // Affine pieces of the quantile function: r -> x is linear on (r0, r1],
    // constant (x0 == x1) across atoms.  Pieces tile (0, total_mass].
    struct QuantilePiece {
        double r0, r1;
        double x0, x1;
    };
    const std::vector<QuantilePiece>& quantile_pieces() const { return qpieces_; }

private:
    std::vector<Atom> atoms_;
    std::vector<Segment> segments_;
    double total_mass_ = 0.0;
    std::vector<double> atom_prefix_; // cumulative atom mass
    std::vector<double> seg_prefix_;  // cumulative segment mass
    std::vector<QuantilePiece> qpieces_;

    void canonicalize();
    void build_prefixes();
    void build_quantile_pieces();
};

// Weighted sum of measures.  Atoms at identical positions merge; overlapping
// segments are split at all endpoints and densities added.  Zero-weight terms
// are ignored; throws InputError when no positive weight remains.
Measure1D mixture(const std::vector<std::pair<Measure1D, double>>& terms);

} // namespace otlab
