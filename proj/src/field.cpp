#include "otlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otlab/errors.hpp"
#include "otlab/transport.hpp"

namespace otlab {

MeasureField::MeasureField(std::vector<Fiber> fibers) : fibers_(std::move(fibers)) {
    if (fibers_.empty()) throw InputError("MeasureField needs at least one fiber");
    std::sort(fibers_.begin(), fibers_.end(),
              [](const Fiber& a, const Fiber& b) { return a.x < b.x; });
    double prev = -std::numeric_limits<double>::infinity();
    for (auto& f : fibers_) {
        if (!std::isfinite(f.x) || !(f.weight > 0.0))
            throw InputError("MeasureField: base points need finite x and weight > 0");
        if (!(f.x > prev)) throw InputError("MeasureField: base positions must be strictly increasing");
        prev = f.x;
        if (f.dist.empty()) throw InputError("MeasureField: empty fiber");
        std::sort(f.dist.begin(), f.dist.end(),
                  [](const FiberEntry& a, const FiberEntry& b) { return a.v < b.v; });
        double sum = 0.0;
        std::vector<FiberEntry> merged;
        for (const auto& e : f.dist) {
            if (!std::isfinite(e.v) || e.p < 0.0) throw InputError("MeasureField: bad fiber entry");
            sum += e.p;
            if (e.p == 0.0) continue;
            if (!merged.empty() && merged.back().v == e.v) {
                merged.back().p += e.p;
            } else {
                merged.push_back(e);
            }
        }
        if (std::abs(sum - 1.0) > 1e-12) throw InputError("MeasureField: fiber must be a probability vector");
        if (merged.empty()) throw InputError("MeasureField: fiber has no mass");
        f.dist = std::move(merged);
    }
}

MeasureField MeasureField::unit_symmetric(const Measure1D& atomic_base) {
    if (!atomic_base.is_atomic()) throw InputError("unit_symmetric needs an atomic base");
    std::vector<Fiber> fibers;
    fibers.reserve(atomic_base.atoms().size());
    for (const auto& a : atomic_base.atoms()) {
        fibers.push_back({a.pos, a.mass, {{-1.0, 0.5}, {1.0, 0.5}}});
    }
    return MeasureField(std::move(fibers));
}

MeasureField MeasureField::from_map(const Measure1D& atomic_base, std::span<const double> f) {
    if (!atomic_base.is_atomic()) throw InputError("from_map needs an atomic base");
    if (f.size() != atomic_base.atoms().size())
        throw InputError("from_map: one velocity per base atom required");
    std::vector<Fiber> fibers;
    fibers.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto& a = atomic_base.atoms()[i];
        fibers.push_back({a.pos, a.mass, {{f[i], 1.0}}});
    }
    return MeasureField(std::move(fibers));
}

MeasureField MeasureField::from_map(const Measure1D& atomic_base,
                                    const std::function<double(double)>& f) {
    std::vector<double> vals;
    vals.reserve(atomic_base.atoms().size());
    for (const auto& a : atomic_base.atoms()) vals.push_back(f(a.pos));
    return from_map(atomic_base, vals);
}

Measure1D MeasureField::base() const {
    std::vector<Atom> atoms;
    atoms.reserve(fibers_.size());
    for (const auto& f : fibers_) atoms.push_back({f.x, f.weight});
    return Measure1D(std::move(atoms), {});
}

double MeasureField::total_mass() const {
    double m = 0.0;
    for (const auto& f : fibers_) m += f.weight;
    return m;
}

Measure1D MeasureField::exp_map(double h) const {
    std::vector<Atom> atoms;
    for (const auto& f : fibers_) {
        for (const auto& e : f.dist) atoms.push_back({f.x + h * e.v, f.weight * e.p});
    }
    return Measure1D(std::move(atoms), {});
}

std::vector<double> MeasureField::barycenter() const {
    std::vector<double> b;
    b.reserve(fibers_.size());
    for (const auto& f : fibers_) {
        double m = 0.0;
        for (const auto& e : f.dist) m += e.p * e.v;
        b.push_back(m);
    }
    return b;
}

MeasureField MeasureField::centered() const {
    std::vector<double> b = barycenter();
    std::vector<Fiber> fibers = fibers_;
    for (std::size_t i = 0; i < fibers.size(); ++i) {
        for (auto& e : fibers[i].dist) e.v -= b[i];
    }
    return MeasureField(std::move(fibers));
}

MeasureField MeasureField::scaled(double lambda) const {
    if (lambda < 0.0 || !std::isfinite(lambda)) throw InputError("scaled: lambda must be >= 0");
    std::vector<Fiber> fibers = fibers_;
    for (auto& f : fibers) {
        for (auto& e : f.dist) e.v *= lambda;
    }
    return MeasureField(std::move(fibers));
}

MeasureField MeasureField::restricted(const IntervalSet& A) const {
    std::vector<Fiber> kept;
    for (const auto& f : fibers_) {
        if (A.contains(f.x)) kept.push_back(f);
    }
    if (kept.empty()) throw InputError("restricted: no base point lies in A");
    return MeasureField(std::move(kept));
}

MeasureField MeasureField::truncated_symmetric(double R) const {
    if (!(R > 0.0)) throw InputError("truncated_symmetric: R must be > 0");
    std::vector<Fiber> fibers = fibers_;
    const double scale = std::max(1.0, max_abs_velocity());
    for (auto& f : fibers) {
        if (f.dist.size() == 1) {
            if (std::abs(f.dist[0].v) > 1e-12 * scale)
                throw InputError("truncated_symmetric: field is not symmetric");
            continue;
        }
        if (f.dist.size() != 2 || std::abs(f.dist[0].v + f.dist[1].v) > 1e-12 * scale ||
            std::abs(f.dist[0].p - 0.5) > 1e-12 || std::abs(f.dist[1].p - 0.5) > 1e-12)
            throw InputError("truncated_symmetric: field is not symmetric");
        double v = std::min(f.dist[1].v, R);
        f.dist[0].v = -v;
        f.dist[1].v = v;
    }
    return MeasureField(std::move(fibers));
}

double MeasureField::second_moment() const {
    double m = 0.0;
    for (const auto& f : fibers_) {
        for (const auto& e : f.dist) m += f.weight * e.p * e.v * e.v;
    }
    return m;
}

double MeasureField::norm() const { return std::sqrt(second_moment()); }

double MeasureField::max_abs_velocity() const {
    double m = 0.0;
    for (const auto& f : fibers_) {
        for (const auto& e : f.dist) m = std::max(m, std::abs(e.v));
    }
    return m;
}

bool MeasureField::same_base(const MeasureField& other, double tol) const {
    if (fibers_.size() != other.fibers_.size()) return false;
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
        if (std::abs(fibers_[i].x - other.fibers_[i].x) > tol) return false;
        if (std::abs(fibers_[i].weight - other.fibers_[i].weight) > tol) return false;
    }
    return true;
}

namespace {

// Exact 2-Wasserstein cost between two finite probability vectors on R via
// the comonotone coupling (entries sorted by velocity).
double fiber_w2_sq(const std::vector<FiberEntry>& a, const std::vector<FiberEntry>& b) {
    double cost = 0.0;
    std::size_t i = 0, j = 0;
    double pa = a[0].p, pb = b[0].p;
    while (i < a.size() && j < b.size()) {
        double t = std::min(pa, pb);
        double d = a[i].v - b[j].v;
        cost += t * d * d;
        pa -= t;
        pb -= t;
        if (pa <= 0.0 && i + 1 < a.size()) pa = a[++i].p;
        else if (pa <= 0.0) ++i;
        if (pb <= 0.0 && j + 1 < b.size()) pb = b[++j].p;
        else if (pb <= 0.0) ++j;
    }
    return cost;
}

} // namespace

double w_mu(const MeasureField& xi, const MeasureField& zeta) {
    if (!xi.same_base(zeta)) throw InputError("w_mu: fields must share the base");
    double total = 0.0;
    for (std::size_t i = 0; i < xi.fibers().size(); ++i) {
        total += xi.fibers()[i].weight * fiber_w2_sq(xi.fibers()[i].dist, zeta.fibers()[i].dist);
    }
    return std::sqrt(total);
}

double inner(const MeasureField& xi, const MeasureField& zeta) {
    double w = w_mu(xi, zeta);
    return 0.5 * (xi.second_moment() + zeta.second_moment() - w * w);
}

LimsupReport limsup_condition_check(const MeasureField& xi, std::span<const double> hs) {
    LimsupReport rep;
    rep.target = xi.norm();
    Measure1D base = xi.base();
    for (double h : hs) {
        if (!(h > 0.0)) throw InputError("limsup_condition_check: h must be > 0");
        double q = wasserstein(base, xi.exp_map(h), 2.0) / h;
        if (q > rep.target + 1e-9)
            throw NumericError("limsup check: quotient exceeds the field norm");
        rep.rows.push_back({h, q, rep.target - q});
    }
    return rep;
}

RemovebaryReport removebary_check(const MeasureField& zeta, std::span<const double> hs) {
    if (hs.empty()) throw InputError("removebary_check: empty h list");
    RemovebaryReport rep;
    std::vector<double> b = zeta.barycenter();
    double b2 = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) b2 += zeta.fibers()[i].weight * b[i] * b[i];
    rep.barycenter_norm2 = b2;
    MeasureField z0 = zeta.centered();
    Measure1D base = zeta.base();
    double smallest = std::numeric_limits<double>::infinity();
    double smallest_margin = 0.0;
    for (double h : hs) {
        if (!(h > 0.0)) throw InputError("removebary_check: h must be > 0");
        double wl = wasserstein(base, zeta.exp_map(h), 2.0);
        double wr = wasserstein(base, z0.exp_map(h), 2.0);
        RemovebaryRow row;
        row.h = h;
        row.lhs = wl * wl / (h * h);
        row.rhs = wr * wr / (h * h) + b2;
        row.margin = row.rhs - row.lhs;
        rep.rows.push_back(row);
        if (h < smallest) {
            smallest = h;
            smallest_margin = row.margin;
        }
    }
    if (smallest_margin < -1e-6)
        throw NumericError("removebary check: inequality violated at the smallest scale");
    return rep;
}

} // namespace otlab
