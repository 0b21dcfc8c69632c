#pragma once

#include <utility>
#include <vector>

#include "otlab/interval_set.hpp"
#include "otlab/measure.hpp"
#include "otlab/transport.hpp"

namespace otlab {

// Gap-ratio sequence alpha and the centered Cantor construction it drives:
// C^0 = [0,1] and C^{n+1} removes the open middle proportion alpha_n of every
// interval, so interval lengths obey delta_{n+1} = delta_n (1 - alpha_n) / 2.
// Only nonincreasing sequences with alpha_n in (0,1) are accepted.
class CantorSpec {
public:
    enum class Kind { Constant, Vector, Harmonic };

    static CantorSpec constant(double c, int depth_limit = 26);
    // Explicit leading values, constant tail equal to the last entry.
    static CantorSpec vector(std::vector<double> values, int depth_limit = 26);
    // alpha_n = 1 / (n + c), c > 1.
    static CantorSpec harmonic(double c, int depth_limit = 26);

    Kind kind() const { return kind_; }
    double parameter() const { return param_; }
    const std::vector<double>& values() const { return values_; }
    int depth_limit() const { return depth_limit_; }

    double alpha(int n) const;
    double delta(int n) const;

    // Generation set C^n as 2^n closed intervals.  Throws when n exceeds the
    // depth limit.
    IntervalSet generation(int n) const;

    // Uniform probability measure on C^n: 2^n segments of mass 2^-n.
    Measure1D measure(int n) const;

    // F_{mu^n}(x) evaluated by descending the construction, O(n) time and no
    // materialization; usable beyond any practical generation() depth.
    double cdf_at(double x, int n) const;

    // Layer f_n = F_{mu^{n+1}} - F_{mu^n}: zero off C^n, the same three-piece
    // pattern on every interval of C^n, sup-norm 2^-(n+1) * alpha_n.
    PiecewiseLinear layer(int n) const;
    double layer_sup_norm(int n) const;

    // Lebesgue mass of C^n: prod_{k<n} (1 - alpha_k) = 2^n * delta_n.
    double lebesgue_mass(int n) const;

    // Probe scales h_n = alpha_n * delta_n / 2 of the failure regime,
    // for n in [n_lo, n_hi].
    std::vector<double> failure_probes(int n_lo, int n_hi) const;

    // Bands [sqrt(alpha_n) delta_{n+1}, sqrt(alpha_{n-1}) delta_n) of the
    // success regime, for n in [n_lo, n_hi]; requires n_lo >= 1.
    std::vector<std::pair<double, double>> band_probes(int n_lo, int n_hi) const;

private:
    CantorSpec(Kind kind, double param, std::vector<double> values, int depth_limit);

    Kind kind_;
    double param_ = 0.0;
    std::vector<double> values_;
    int depth_limit_ = 26;
    std::vector<double> deltas_; // delta_0 .. delta_{depth_limit+1}, fixed at construction
    void check_depth(int n) const;
};

} // namespace otlab
