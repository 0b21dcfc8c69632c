#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "otlab/measure.hpp"

namespace otlab {

// Continuous piecewise-linear function; affine between breakpoints and
// extended with fixed slopes outside the breakpoint range.
class PiecewiseLinear {
public:
    PiecewiseLinear(std::vector<double> xs, std::vector<double> values,
                    double left_slope = 0.0, double right_slope = 0.0);

    double operator()(double x) const;
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& values() const { return values_; }
    double left_slope() const { return left_slope_; }
    double right_slope() const { return right_slope_; }

    double max_abs_slope() const;
    bool is_lipschitz(double bound, double tol = 1e-12) const;
    // Largest |value| over the breakpoints (the sup-norm when the extension
    // slopes vanish).
    double sup_norm() const;

private:
    std::vector<double> xs_, values_;
    double left_slope_, right_slope_;
};

// Exact integral of a piecewise-linear function against a measure.
double integrate(const PiecewiseLinear& f, const Measure1D& m);

// ------------------------------------------------------------ W_p distances

// p-Wasserstein distance via closed-form integration of |Q_m - Q_n|^p over
// the common quantile refinement for p in {1, 2}, adaptive quadrature
// (rel. tol 1e-10) otherwise.  For p = 1 an independent CDF-difference route
// is evaluated and the two must agree within 1e-9 (NumericError otherwise).
// Masses must agree within 1e-12; non-unit common mass M rescales the
// distance as M * W_p(m/M, n/M).
double wasserstein(const Measure1D& m, const Measure1D& n, double p);

// Optimal-plan transport cost  inf_plan int |x-y|^p dplan  without the mass
// normalization; equals W_p^p for probability measures.
double transport_cost_p(const Measure1D& m, const Measure1D& n, double p);

struct PlanSample {
    double r, x, y;
};

// Samples (r, Q_m(r), Q_n(r)) of the monotone plan at the given levels.
std::vector<PlanSample> monotone_plan(const Measure1D& m, const Measure1D& n,
                                      std::span<const double> rs);

// Dual lower bound int psi dn - int psi dm for 1-Lipschitz psi; validates the
// Lipschitz property (slopes <= 1 + 1e-12) and the mass balance.
double dual_lower_bound_w1(const Measure1D& m, const Measure1D& n, const PiecewiseLinear& psi);

// -------------------------------------------------------------- c-transform

// Potential sampled on a uniform grid, with the cost exponent it pairs with.
struct GridPotential {
    double x0 = 0.0;
    double step = 1.0;
    std::vector<double> values;
    double p = 1.0;

    double coord(std::size_t i) const { return x0 + static_cast<double>(i) * step; }
    std::size_t size() const { return values.size(); }
};

// phi^c(y_j) = min_i phi(x_i) + |x_i - y_j|^p.  O(N^2) reference.
GridPotential c_transform_reference(const GridPotential& phi);

// Same values through lower-envelope fast paths for p in {1, 2} (linear-time
// sweeps resp. parabola envelope); falls back to the reference otherwise.
GridPotential c_transform(const GridPotential& phi);

// Grid points where (0.5*[phi^c(x-h) + phi^c(x+h)] - phi(x)) / h^p >= gamma,
// h snapped to a grid multiple.  The returned set is checked against the
// separation dichotomy: any two members closer than h(1+kappa) must lie
// within h(1-kappa), kappa = (2*gamma-1)^(1/p).
std::vector<double> coarse_porous_set(const GridPotential& phi, double gamma, double h);

// ------------------------------------------------------- submeasure estimate

struct SubmeasureBound {
    double wp_p;    // optimal-plan cost between alpha and beta
    double bound;   // epsilon * diam(K)^p
    double epsilon; // mu(R) - alpha(R)
    double diam;    // support hull diameter of mu
};

// Validates alpha <= mu and beta <= mu on the common refinement, computes the
// plan cost and the certified bound, and asserts cost <= bound + 1e-9.
SubmeasureBound submeasure_distance_bound(const Measure1D& mu, const Measure1D& alpha,
                                          const Measure1D& beta, double p);

} // namespace otlab
