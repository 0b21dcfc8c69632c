#include "otlab/cantor.hpp"

#include <cmath>

#include "otlab/errors.hpp"

namespace otlab {

CantorSpec::CantorSpec(Kind kind, double param, std::vector<double> values, int depth_limit)
    : kind_(kind), param_(param), values_(std::move(values)), depth_limit_(depth_limit) {
    if (depth_limit_ < 0) throw InputError("CantorSpec: depth limit must be >= 0");
    if (kind_ == Kind::Vector) {
        if (values_.empty()) throw InputError("CantorSpec: empty alpha vector");
        double prev = 1.0;
        for (double a : values_) {
            if (!(a > 0.0) || !(a < 1.0)) throw InputError("CantorSpec: alpha_n must lie in (0,1)");
            if (a > prev) throw InputError("CantorSpec: alpha must be nonincreasing");
            prev = a;
        }
    }
    deltas_.resize(static_cast<std::size_t>(depth_limit_) + 2);
    deltas_[0] = 1.0;
    for (int n = 0; n <= depth_limit_; ++n)
        deltas_[static_cast<std::size_t>(n) + 1] =
            deltas_[static_cast<std::size_t>(n)] * (1.0 - alpha(n)) / 2.0;
}

CantorSpec CantorSpec::constant(double c, int depth_limit) {
    if (!(c > 0.0) || !(c < 1.0)) throw InputError("CantorSpec: constant alpha must lie in (0,1)");
    return CantorSpec(Kind::Constant, c, {}, depth_limit);
}

CantorSpec CantorSpec::vector(std::vector<double> values, int depth_limit) {
    return CantorSpec(Kind::Vector, 0.0, std::move(values), depth_limit);
}

CantorSpec CantorSpec::harmonic(double c, int depth_limit) {
    if (!(c > 1.0)) throw InputError("CantorSpec: harmonic rule needs c > 1");
    return CantorSpec(Kind::Harmonic, c, {}, depth_limit);
}

double CantorSpec::alpha(int n) const {
    if (n < 0) throw InputError("CantorSpec: alpha index must be >= 0");
    switch (kind_) {
        case Kind::Constant: return param_;
        case Kind::Harmonic: return 1.0 / (static_cast<double>(n) + param_);
        case Kind::Vector: {
            std::size_t i = std::min(static_cast<std::size_t>(n), values_.size() - 1);
            return values_[i];
        }
    }
    throw InputError("CantorSpec: unknown kind");
}

void CantorSpec::check_depth(int n) const {
    if (n < 0) throw InputError("CantorSpec: generation index must be >= 0");
    if (n > depth_limit_) throw InputError("CantorSpec: depth exceeded");
}

double CantorSpec::delta(int n) const {
    if (n < 0 || n > depth_limit_ + 1) throw InputError("CantorSpec: delta index out of range");
    return deltas_[static_cast<std::size_t>(n)];
}

IntervalSet CantorSpec::generation(int n) const {
    check_depth(n);
    std::vector<double> lefts{0.0};
    for (int k = 0; k < n; ++k) {
        double shift = delta(k) - delta(k + 1); // right child offset
        std::vector<double> next;
        next.reserve(lefts.size() * 2);
        for (double a : lefts) {
            next.push_back(a);
            next.push_back(a + shift);
        }
        lefts = std::move(next);
    }
    std::vector<IntervalSet::Interval> ivs;
    ivs.reserve(lefts.size());
    double d = delta(n);
    for (double a : lefts) ivs.emplace_back(a, a + d);
    return IntervalSet(std::move(ivs));
}

Measure1D CantorSpec::measure(int n) const {
    check_depth(n);
    IntervalSet g = generation(n);
    double mass = std::ldexp(1.0, -n);
    std::vector<Segment> segs;
    segs.reserve(g.size());
    for (const auto& [a, b] : g.intervals()) segs.push_back({a, b, mass});
    return Measure1D({}, std::move(segs));
}

double CantorSpec::cdf_at(double x, int n) const {
    check_depth(n);
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double acc = 0.0;
    double a = 0.0, b = 1.0;   // current interval
    double mass = 1.0;         // its mass
    for (int k = 0; k < n; ++k) {
        double dnext = delta(k + 1);
        double left_hi = a + dnext;
        double right_lo = b - dnext;
        mass *= 0.5;
        if (x <= left_hi) {
            b = left_hi;
        } else if (x < right_lo) {
            return acc + mass; // in the removed gap: left child fully counted
        } else {
            acc += mass;
            a = right_lo;
        }
    }
    return acc + mass * std::min(1.0, std::max(0.0, (x - a) / (b - a)));
}

double CantorSpec::layer_sup_norm(int n) const {
    check_depth(n);
    return std::ldexp(alpha(n), -(n + 1));
}

PiecewiseLinear CantorSpec::layer(int n) const {
    check_depth(n); // delta(n+1) is always available alongside generation n
    IntervalSet g = generation(n);
    const double dn = delta(n);
    const double dn1 = delta(n + 1);
    const double peak = layer_sup_norm(n);
    std::vector<double> xs, vs;
    xs.reserve(4 * g.size());
    vs.reserve(4 * g.size());
    for (const auto& [a, b] : g.intervals()) {
        xs.push_back(a);
        vs.push_back(0.0);
        xs.push_back(a + dn1);
        vs.push_back(peak);
        xs.push_back(a + (dn - dn1));
        vs.push_back(-peak);
        xs.push_back(b);
        vs.push_back(0.0);
    }
    return PiecewiseLinear(std::move(xs), std::move(vs));
}

double CantorSpec::lebesgue_mass(int n) const {
    if (n < 0) throw InputError("CantorSpec: generation index must be >= 0");
    double prod = 1.0;
    for (int k = 0; k < n; ++k) prod *= 1.0 - alpha(k);
    return prod;
}

std::vector<double> CantorSpec::failure_probes(int n_lo, int n_hi) const {
    if (n_lo < 0 || n_hi < n_lo) throw InputError("CantorSpec: bad probe range");
    check_depth(n_hi);
    std::vector<double> hs;
    hs.reserve(static_cast<std::size_t>(n_hi - n_lo) + 1);
    for (int n = n_lo; n <= n_hi; ++n) hs.push_back(alpha(n) * delta(n) / 2.0);
    return hs;
}

std::vector<std::pair<double, double>> CantorSpec::band_probes(int n_lo, int n_hi) const {
    if (n_lo < 1 || n_hi < n_lo) throw InputError("CantorSpec: band range needs n >= 1");
    check_depth(n_hi);
    std::vector<std::pair<double, double>> bands;
    bands.reserve(static_cast<std::size_t>(n_hi - n_lo) + 1);
    for (int n = n_lo; n <= n_hi; ++n) {
        bands.emplace_back(std::sqrt(alpha(n)) * delta(n + 1), std::sqrt(alpha(n - 1)) * delta(n));
    }
    return bands;
}

} // namespace otlab
