#include "otlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "otlab/errors.hpp"
#include "otlab/quadrature.hpp"

namespace otlab {

// ---------------------------------------------------------------- MonotoneFn

MonotoneFn::MonotoneFn(std::vector<Breakpoint> bps, Continuity c)
    : bps_(std::move(bps)), continuity_(c) {
    if (bps_.empty()) throw InputError("MonotoneFn needs at least one breakpoint");
    double prev = -std::numeric_limits<double>::infinity();
    double prev_x = -std::numeric_limits<double>::infinity();
    for (const auto& bp : bps_) {
        if (!(bp.x > prev_x)) throw InputError("MonotoneFn breakpoints must be strictly increasing");
        if (bp.value_left < prev || bp.value_right < bp.value_left)
            throw InputError("MonotoneFn values must be nondecreasing");
        prev = bp.value_right;
        prev_x = bp.x;
    }
}

void MonotoneFn::set_domain(double lo, double hi) {
    has_domain_ = true;
    domain_lo_ = lo;
    domain_hi_ = hi;
}

double MonotoneFn::operator()(double x) const {
    if (has_domain_ && (!(x > domain_lo_) || x > domain_hi_))
        throw std::domain_error("MonotoneFn evaluated outside its domain");
    return continuity_ == Continuity::Right ? value_after(x) : value_before(x);
}

namespace {
// Index of the last breakpoint with bp.x <= x, or -1.
long last_le(const std::vector<MonotoneFn::Breakpoint>& bps, double x) {
    auto it = std::upper_bound(bps.begin(), bps.end(), x,
                               [](double v, const MonotoneFn::Breakpoint& bp) { return v < bp.x; });
    return static_cast<long>(it - bps.begin()) - 1;
}
} // namespace

double MonotoneFn::value_after(double x) const {
    long i = last_le(bps_, x);
    if (i < 0) return bps_.front().value_left;
    const auto& a = bps_[static_cast<std::size_t>(i)];
    if (a.x == x || static_cast<std::size_t>(i) + 1 == bps_.size()) return a.value_right;
    const auto& b = bps_[static_cast<std::size_t>(i) + 1];
    double t = (x - a.x) / (b.x - a.x);
    return a.value_right + t * (b.value_left - a.value_right);
}

double MonotoneFn::value_before(double x) const {
    long i = last_le(bps_, x);
    if (i < 0) return bps_.front().value_left;
    const auto& a = bps_[static_cast<std::size_t>(i)];
    if (a.x == x) return a.value_left;
    return value_after(x);
}

// ---------------------------------------------------------------- Measure1D

Measure1D::Measure1D(std::vector<Atom> atoms, std::vector<Segment> segments)
    : atoms_(std::move(atoms)), segments_(std::move(segments)) {
    canonicalize();
    build_prefixes();
    build_quantile_pieces();
}

Measure1D Measure1D::dirac(double pos, double mass) { return Measure1D({{pos, mass}}, {}); }

Measure1D Measure1D::uniform(double left, double right, double mass) {
    return Measure1D({}, {{left, right, mass}});
}

void Measure1D::canonicalize() {
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.pos) || !std::isfinite(a.mass)) throw InputError("atom must be finite");
        if (!(a.mass > 0.0)) throw InputError("atom mass must be > 0");
    }
    for (const auto& s : segments_) {
        if (!std::isfinite(s.left) || !std::isfinite(s.right) || !std::isfinite(s.mass))
            throw InputError("segment must be finite");
        if (!(s.left < s.right)) throw InputError("segment needs left < right");
        if (!(s.mass > 0.0)) throw InputError("segment mass must be > 0");
    }

    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
    std::vector<Atom> merged;
    merged.reserve(atoms_.size());
    for (const auto& a : atoms_) {
        if (!merged.empty() && merged.back().pos == a.pos) {
            merged.back().mass += a.mass;
        } else {
            merged.push_back(a);
        }
    }
    atoms_ = std::move(merged);

    std::sort(segments_.begin(), segments_.end(), [](const Segment& a, const Segment& b) {
        return a.left < b.left || (a.left == b.left && a.right < b.right);
    });
    bool overlap = false;
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        if (segments_[i].left < segments_[i - 1].right) {
            overlap = true;
            break;
        }
    }
    if (overlap) {
        // Split at every endpoint and add densities on each elementary piece.
        std::vector<double> cuts;
        cuts.reserve(2 * segments_.size());
        for (const auto& s : segments_) {
            cuts.push_back(s.left);
            cuts.push_back(s.right);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        // Sweep with an active-segment pool; segments_ is sorted by left.
        std::vector<Segment> pieces;
        pieces.reserve(segments_.size() * 2);
        std::size_t next = 0;
        std::vector<const Segment*> active;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double a = cuts[i], b = cuts[i + 1];
            while (next < segments_.size() && segments_[next].left <= a) {
                active.push_back(&segments_[next]);
                ++next;
            }
            std::erase_if(active, [a](const Segment* s) { return s->right <= a; });
            double density = 0.0;
            for (const Segment* s : active) density += s->density();
            if (density > 0.0) pieces.push_back({a, b, density * (b - a)});
        }
        segments_ = std::move(pieces);
    }

    // Neumaier-compensated total: naive summation drifts past the 1e-12 mass
    // tolerance once deep Cantor mixtures reach ~1e6 components.
    double sum = 0.0, comp = 0.0;
    auto add = [&](double v) {
        double t = sum + v;
        comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    };
    for (const auto& a : atoms_) add(a.mass);
    for (const auto& s : segments_) add(s.mass);
    total_mass_ = sum + comp;
    if (!(total_mass_ > 0.0) || !std::isfinite(total_mass_))
        throw InputError("measure must have positive finite total mass");
}

void Measure1D::build_prefixes() {
    atom_prefix_.resize(atoms_.size());
    double c = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) atom_prefix_[i] = (c += atoms_[i].mass);
    seg_prefix_.resize(segments_.size());
    c = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) seg_prefix_[i] = (c += segments_[i].mass);
}

std::pair<double, double> Measure1D::support_hull() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    if (!atoms_.empty()) {
        lo = std::min(lo, atoms_.front().pos);
        hi = std::max(hi, atoms_.back().pos);
    }
    if (!segments_.empty()) {
        lo = std::min(lo, segments_.front().left);
        hi = std::max(hi, segments_.back().right);
    }
    return {lo, hi};
}

double Measure1D::cdf_at(double x) const {
    double m = 0.0;
    auto ait = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                [](double v, const Atom& a) { return v < a.pos; });
    if (ait != atoms_.begin()) m += atom_prefix_[static_cast<std::size_t>(ait - atoms_.begin()) - 1];
    auto sit = std::upper_bound(segments_.begin(), segments_.end(), x,
                                [](double v, const Segment& s) { return v < s.left; });
    std::size_t k = static_cast<std::size_t>(sit - segments_.begin());
    if (k > 0) {
        m += seg_prefix_[k - 1];
        const Segment& s = segments_[k - 1];
        if (x < s.right) m -= s.density() * (s.right - x);
    }
    return m;
}

double Measure1D::cdf_before(double x) const {
    double m = cdf_at(x);
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Atom& a, double v) { return a.pos < v; });
    if (it != atoms_.end() && it->pos == x) m -= it->mass;
    return m;
}

MonotoneFn Measure1D::cdf() const {
    std::vector<double> xs = breakpoints();
    std::vector<MonotoneFn::Breakpoint> bps;
    bps.reserve(xs.size());
    for (double x : xs) bps.push_back({x, cdf_before(x), cdf_at(x)});
    return MonotoneFn(std::move(bps), MonotoneFn::Continuity::Right);
}

std::vector<double> Measure1D::breakpoints() const {
    std::vector<double> xs;
    xs.reserve(atoms_.size() + 2 * segments_.size());
    for (const auto& a : atoms_) xs.push_back(a.pos);
    for (const auto& s : segments_) {
        xs.push_back(s.left);
        xs.push_back(s.right);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

void Measure1D::build_quantile_pieces() {
    // Single cumulative sweep over the breakpoints: ramps invert to linear
    // pieces, atoms to constant pieces, flats carry no r-mass.  Using one
    // accumulator keeps consecutive piece boundaries bitwise identical; the
    // pointwise CDF evaluations can disagree by an ulp between summation
    // orders, which would open sliver pieces across support gaps and spoil
    // costs for p > 1.
    std::vector<double> xs = breakpoints();
    qpieces_.clear();
    qpieces_.reserve(xs.size() + 1);
    double cum = 0.0;
    std::size_t si = 0, ai = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k > 0) {
            double a = xs[k - 1], b = xs[k];
            while (si < segments_.size() && segments_[si].right <= a) ++si;
            if (si < segments_.size() && segments_[si].left <= a && segments_[si].right >= b) {
                const Segment& s = segments_[si];
                double ramp = (s.left == a && s.right == b) ? s.mass : s.density() * (b - a);
                qpieces_.push_back({cum, cum + ramp, a, b});
                cum += ramp;
            }
        }
        if (ai < atoms_.size() && atoms_[ai].pos == xs[k]) {
            qpieces_.push_back({cum, cum + atoms_[ai].mass, xs[k], xs[k]});
            cum += atoms_[ai].mass;
            ++ai;
        }
    }
    // the sweep total can drift from total_mass_ by an ulp; pin the top level
    if (!qpieces_.empty()) qpieces_.back().r1 = total_mass_;
}

double Measure1D::quantile_at(double r) const {
    const double slack = 1e-12 * std::max(1.0, total_mass_);
    if (!(r > 0.0)) throw std::domain_error("quantile: r must be > 0");
    if (r > total_mass_) {
        if (r <= total_mass_ + slack)
            r = total_mass_;
        else
            throw std::domain_error("quantile: r exceeds total mass");
    }
    auto it = std::lower_bound(qpieces_.begin(), qpieces_.end(), r,
                               [](const QuantilePiece& p, double v) { return p.r1 < v; });
    if (it == qpieces_.end()) --it;
    const QuantilePiece& p = *it;
    if (p.x0 == p.x1 || r <= p.r0) return p.x0;
    double t = (r - p.r0) / (p.r1 - p.r0);
    return p.x0 + t * (p.x1 - p.x0);
}

MonotoneFn Measure1D::quantile() const {
    // Nodes at piece boundaries; consecutive pieces share the boundary r
    // exactly, and x-jumps across massless gaps show up as left/right values.
    std::vector<MonotoneFn::Breakpoint> bps;
    bps.reserve(qpieces_.size() + 1);
    bps.push_back({qpieces_.front().r0, qpieces_.front().x0, qpieces_.front().x0});
    for (std::size_t i = 0; i < qpieces_.size(); ++i) {
        const auto& p = qpieces_[i];
        double right = (i + 1 < qpieces_.size()) ? qpieces_[i + 1].x0 : p.x1;
        bps.push_back({p.r1, p.x1, right});
    }
    MonotoneFn q(std::move(bps), MonotoneFn::Continuity::Left);
    q.set_domain(0.0, total_mass_);
    return q;
}

Measure1D Measure1D::pushforward_affine(double a, double b) const {
    if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("affine coefficients must be finite");
    if (a == 0.0) return dirac(b, total_mass_);
    std::vector<Atom> atoms;
    atoms.reserve(atoms_.size());
    for (const auto& at : atoms_) atoms.push_back({a * at.pos + b, at.mass});
    std::vector<Segment> segs;
    segs.reserve(segments_.size());
    for (const auto& s : segments_) {
        double u = a * s.left + b, v = a * s.right + b;
        segs.push_back({std::min(u, v), std::max(u, v), s.mass});
    }
    return Measure1D(std::move(atoms), std::move(segs));
}

Measure1D Measure1D::restrict_to(const IntervalSet& A) const {
    if (A.empty()) throw InputError("restriction to empty interval set");
    std::vector<Atom> atoms;
    for (const auto& at : atoms_) {
        if (A.contains(at.pos)) atoms.push_back(at);
    }
    std::vector<Segment> segs;
    for (const auto& s : segments_) {
        for (const auto& [a, b] : A.intervals()) {
            if (a >= s.right) break;
            double lo = std::max(s.left, a), hi = std::min(s.right, b);
            if (hi > lo) segs.push_back({lo, hi, s.density() * (hi - lo)});
        }
    }
    if (atoms.empty() && segs.empty()) throw InputError("restriction yields the empty measure");
    return Measure1D(std::move(atoms), std::move(segs));
}

double Measure1D::moment(double p) const {
    if (!(p >= 1.0)) throw InputError("moment requires p >= 1");
    double m = 0.0;
    for (const auto& a : atoms_) m += a.mass * std::pow(std::abs(a.pos), p);
    for (const auto& s : segments_) {
        double d = s.density();
        if (p == 1.0) {
            auto prim = [](double x) { return 0.5 * x * std::abs(x); };
            m += d * (prim(s.right) - prim(s.left));
        } else if (p == 2.0) {
            m += d * (s.right * s.right * s.right - s.left * s.left * s.left) / 3.0;
        } else {
            auto f = [p](double x) { return std::pow(std::abs(x), p); };
            if (s.left < 0.0 && 0.0 < s.right) {
                m += d * (adaptive_quadrature(f, s.left, 0.0, 1e-10) +
                          adaptive_quadrature(f, 0.0, s.right, 1e-10));
            } else {
                m += d * adaptive_quadrature(f, s.left, s.right, 1e-10);
            }
        }
    }
    return m;
}

bool Measure1D::approx_equal(const Measure1D& other, double tol) const {
    if (std::abs(total_mass_ - other.total_mass_) > tol * std::max(1.0, total_mass_)) return false;
    std::vector<double> xs = breakpoints();
    std::vector<double> ys = other.breakpoints();
    xs.insert(xs.end(), ys.begin(), ys.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    // Both CDFs are affine between consecutive union breakpoints, so agreement
    // of the one-sided values at each breakpoint is agreement everywhere.
    for (double x : xs) {
        if (std::abs(cdf_at(x) - other.cdf_at(x)) > tol) return false;
        if (std::abs(cdf_before(x) - other.cdf_before(x)) > tol) return false;
    }
    return true;
}

Measure1D mixture(const std::vector<std::pair<Measure1D, double>>& terms) {
    std::vector<Atom> atoms;
    std::vector<Segment> segs;
    bool any = false;
    for (const auto& [m, w] : terms) {
        if (w < 0.0 || !std::isfinite(w)) throw InputError("mixture weights must be >= 0");
        if (w == 0.0) continue;
        any = true;
        for (const auto& a : m.atoms()) atoms.push_back({a.pos, w * a.mass});
        for (const auto& s : m.segments()) segs.push_back({s.left, s.right, w * s.mass});
    }
    if (!any) throw InputError("mixture needs at least one positive weight");
    return Measure1D(std::move(atoms), std::move(segs));
}

} // namespace otlab
