#include "otlab/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "otlab/errors.hpp"
#include "otlab/quadrature.hpp"

namespace otlab {

// ----------------------------------------------------------- PiecewiseLinear

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> values,
                                 double left_slope, double right_slope)
    : xs_(std::move(xs)), values_(std::move(values)), left_slope_(left_slope), right_slope_(right_slope) {
    if (xs_.empty() || xs_.size() != values_.size())
        throw InputError("PiecewiseLinear needs matching nonempty xs/values");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(values_[i]))
            throw InputError("PiecewiseLinear entries must be finite");
        if (i > 0 && !(xs_[i] > xs_[i - 1]))
            throw InputError("PiecewiseLinear breakpoints must be strictly increasing");
    }
}

double PiecewiseLinear::operator()(double x) const {
    if (x <= xs_.front()) return values_.front() + left_slope_ * (x - xs_.front());
    if (x >= xs_.back()) return values_.back() + right_slope_ * (x - xs_.back());
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

double PiecewiseLinear::max_abs_slope() const {
    double m = std::max(std::abs(left_slope_), std::abs(right_slope_));
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        m = std::max(m, std::abs((values_[i] - values_[i - 1]) / (xs_[i] - xs_[i - 1])));
    }
    return m;
}

bool PiecewiseLinear::is_lipschitz(double bound, double tol) const {
    return max_abs_slope() <= bound * (1.0 + tol);
}

double PiecewiseLinear::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double integrate(const PiecewiseLinear& f, const Measure1D& m) {
    double total = 0.0;
    for (const auto& a : m.atoms()) total += a.mass * f(a.pos);
    for (const auto& s : m.segments()) {
        // split [left,right] at the breakpoints of f; trapezoid is exact on
        // each affine piece
        double d = s.density();
        const auto& xs = f.xs();
        double prev = s.left;
        double fprev = f(prev);
        auto it = std::upper_bound(xs.begin(), xs.end(), s.left);
        for (; it != xs.end() && *it < s.right; ++it) {
            double fx = f(*it);
            total += d * 0.5 * (fprev + fx) * (*it - prev);
            prev = *it;
            fprev = fx;
        }
        double fend = f(s.right);
        total += d * 0.5 * (fprev + fend) * (s.right - prev);
    }
    return total;
}

// ------------------------------------------------------------ W_p machinery

namespace {

void check_equal_masses(const Measure1D& m, const Measure1D& n) {
    double tol = 1e-12 * std::max(1.0, std::max(m.total_mass(), n.total_mass()));
    if (std::abs(m.total_mass() - n.total_mass()) > tol)
        throw InputError("wasserstein: total masses differ");
}

// int_a^b |u0 + t*(u1-u0)/(b-a)|^p dt for an affine integrand with no sign
// change in the open interval; closed form for p in {1,2}.
double piece_cost(double u0, double u1, double width, double p) {
    if (width <= 0.0) return 0.0;
    if (p == 1.0) return 0.5 * std::abs(u0 + u1) * width;
    if (p == 2.0) return width * (u0 * u0 + u0 * u1 + u1 * u1) / 3.0;
    auto f = [&](double t) { return std::pow(std::abs(u0 + (u1 - u0) * (t / width)), p); };
    return adaptive_quadrature(f, 0.0, width, 1e-10);
}

// Accumulates int |Q_m - Q_n|^p dr over the common refinement of quantile
// pieces, splitting each elementary interval at the sign change of the
// difference.
double quantile_route_cost(const Measure1D& m, const Measure1D& n, double p) {
    const auto& pm = m.quantile_pieces();
    const auto& pn = n.quantile_pieces();
    double total = 0.0;
    std::size_t i = 0, j = 0;
    double r = 0.0;
    const double M = std::min(m.total_mass(), n.total_mass());
    // The two cumulative grids are built by independent summations, so
    // mathematically equal boundaries can differ by an ulp.  Without snapping,
    // the leftover slivers pair far-apart quantile values over ~1e-16 of mass,
    // which |x-y|^p amplifies beyond the certified tolerances for p > 1.
    const double snap = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, M);
    auto value_at = [](const Measure1D::QuantilePiece& q, double rr) {
        if (q.x1 == q.x0 || q.r1 == q.r0) return q.x0;
        double t = std::min(1.0, std::max(0.0, (rr - q.r0) / (q.r1 - q.r0)));
        return q.x0 + t * (q.x1 - q.x0);
    };
    while (i < pm.size() && j < pn.size() && r < M) {
        double r1 = std::min(std::min(pm[i].r1, pn[j].r1), M);
        if (r1 > r) {
            double a0 = value_at(pm[i], r), a1 = value_at(pm[i], r1);
            double b0 = value_at(pn[j], r), b1 = value_at(pn[j], r1);
            double u0 = a0 - b0, u1 = a1 - b1;
            if (u0 == 0.0 || u1 == 0.0 || (u0 > 0) == (u1 > 0)) {
                total += piece_cost(u0, u1, r1 - r, p);
            } else {
                double t = u0 / (u0 - u1); // root of the affine difference
                double rm = r + t * (r1 - r);
                total += piece_cost(u0, 0.0, rm - r, p);
                total += piece_cost(0.0, u1, r1 - rm, p);
            }
            r = r1;
        }
        if (pm[i].r1 <= r + snap) ++i;
        if (j < pn.size() && pn[j].r1 <= r + snap) ++j;
    }
    return total;
}

// W_1 through int |F_m - F_n| dx over the union breakpoint refinement.
double cdf_route_w1(const Measure1D& m, const Measure1D& n) {
    std::vector<double> xs = m.breakpoints();
    std::vector<double> ys = n.breakpoints();
    xs.insert(xs.end(), ys.begin(), ys.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        // affine on the open interval; one-sided values at its ends
        double g0 = m.cdf_at(xs[i]) - n.cdf_at(xs[i]);
        double g1 = m.cdf_before(xs[i + 1]) - n.cdf_before(xs[i + 1]);
        double w = xs[i + 1] - xs[i];
        if (g0 == 0.0 || g1 == 0.0 || (g0 > 0) == (g1 > 0)) {
            total += 0.5 * std::abs(g0 + g1) * w;
        } else {
            double t = g0 / (g0 - g1);
            total += 0.5 * (std::abs(g0) * t + std::abs(g1) * (1.0 - t)) * w;
        }
    }
    return total;
}

} // namespace

double transport_cost_p(const Measure1D& m, const Measure1D& n, double p) {
    if (!(p >= 1.0)) throw InputError("wasserstein requires p >= 1");
    check_equal_masses(m, n);
    double cost = quantile_route_cost(m, n, p);
    if (p == 1.0) {
        double alt = cdf_route_w1(m, n);
        if (std::abs(cost - alt) > 1e-9 * std::max(1.0, std::max(cost, alt)))
            throw NumericError("W_1 quantile and CDF routes disagree beyond 1e-9");
    }
    return cost;
}

double wasserstein(const Measure1D& m, const Measure1D& n, double p) {
    double cost = transport_cost_p(m, n, p);
    double M = std::min(m.total_mass(), n.total_mass());
    // mass convention: W_p(m, n) = M * W_p(m/M, n/M)
    return std::pow(M, 1.0 - 1.0 / p) * std::pow(cost, 1.0 / p);
}

std::vector<PlanSample> monotone_plan(const Measure1D& m, const Measure1D& n,
                                      std::span<const double> rs) {
    check_equal_masses(m, n);
    double M = std::min(m.total_mass(), n.total_mass());
    std::vector<double> levels(rs.begin(), rs.end());
    std::sort(levels.begin(), levels.end());
    std::vector<PlanSample> out;
    out.reserve(levels.size());
    for (double r : levels) {
        if (!(r > 0.0) || r > M * (1.0 + 1e-12))
            throw InputError("monotone_plan: level outside (0, total_mass]");
        out.push_back({r, m.quantile_at(r), n.quantile_at(r)});
    }
    return out;
}

double dual_lower_bound_w1(const Measure1D& m, const Measure1D& n, const PiecewiseLinear& psi) {
    check_equal_masses(m, n);
    if (!psi.is_lipschitz(1.0, 1e-12)) throw InputError("dual potential is not 1-Lipschitz");
    return integrate(psi, n) - integrate(psi, m);
}

// --------------------------------------------------------------- c-transform

namespace {

inline double cost_pow(double d, double p) {
    double a = std::abs(d);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

// Exact candidate cost shared by the reference and the fast paths, so that
// agreement can be bitwise.
inline double candidate(const GridPotential& phi, std::size_t i, std::size_t j) {
    return phi.values[i] + cost_pow(phi.coord(i) - phi.coord(j), phi.p);
}

GridPotential c_transform_p1(const GridPotential& phi) {
    const std::size_t n = phi.size();
    // Keep the three best keys per direction; the final min re-evaluates the
    // exact candidate expression so ties resolve like the reference.
    constexpr int K = 3;
    auto run = [&](bool forward, std::vector<std::array<std::size_t, K>>& best,
                   std::vector<int>& count, auto key) {
        std::array<double, K> topv{};
        std::array<std::size_t, K> topi{};
        int cnt = 0;
        for (std::size_t step = 0; step < n; ++step) {
            std::size_t i = forward ? step : n - 1 - step;
            double k = key(i);
            int pos = cnt;
            while (pos > 0 && topv[pos - 1] > k) --pos;
            if (pos < K) {
                for (int q = std::min(cnt, K - 1); q > pos; --q) {
                    topv[q] = topv[q - 1];
                    topi[q] = topi[q - 1];
                }
                topv[pos] = k;
                topi[pos] = i;
                if (cnt < K) ++cnt;
            }
            best[i] = topi;
            count[i] = cnt;
        }
    };
    std::vector<std::array<std::size_t, K>> bl(n), br(n);
    std::vector<int> cl(n), cr(n);
    run(true, bl, cl, [&](std::size_t i) { return phi.values[i] - phi.coord(i); });
    run(false, br, cr, [&](std::size_t i) { return phi.values[i] + phi.coord(i); });
    GridPotential out = phi;
    for (std::size_t j = 0; j < n; ++j) {
        double v = std::numeric_limits<double>::infinity();
        for (int k = 0; k < cl[j]; ++k) v = std::min(v, candidate(phi, bl[j][k], j));
        for (int k = 0; k < cr[j]; ++k) v = std::min(v, candidate(phi, br[j][k], j));
        out.values[j] = v;
    }
    return out;
}

// Felzenszwalb-Huttenlocher lower envelope of parabolas; the winning parabola
// index per grid point is refined over a small window with the exact
// candidate expression.
GridPotential c_transform_p2(const GridPotential& phi) {
    const std::size_t n = phi.size();
    std::vector<std::size_t> v(n);     // parabola indices in the envelope
    std::vector<double> z(n + 1);      // boundaries between envelope pieces
    std::size_t k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    auto sq = [](double t) { return t * t; };
    for (std::size_t q = 1; q < n; ++q) {
        double xq = phi.coord(q);
        double s;
        while (true) {
            std::size_t r = v[k];
            double xr = phi.coord(r);
            s = ((phi.values[q] + sq(xq)) - (phi.values[r] + sq(xr))) / (2.0 * (xq - xr));
            if (s <= z[k] && k > 0) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    GridPotential out = phi;
    std::size_t k2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double xj = phi.coord(j);
        while (z[k2 + 1] < xj) ++k2;
        double val = std::numeric_limits<double>::infinity();
        // window of +-2 envelope pieces absorbs boundary rounding
        std::size_t lo = k2 >= 2 ? k2 - 2 : 0;
        std::size_t hi = std::min(k2 + 2, k);
        for (std::size_t t = lo; t <= hi; ++t) val = std::min(val, candidate(phi, v[t], j));
        out.values[j] = val;
    }
    return out;
}

} // namespace

GridPotential c_transform_reference(const GridPotential& phi) {
    if (phi.size() == 0) throw InputError("c_transform on empty grid");
    if (!(phi.step > 0.0)) throw InputError("c_transform requires positive grid step");
    GridPotential out = phi;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        double v = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < phi.size(); ++i) v = std::min(v, candidate(phi, i, j));
        out.values[j] = v;
    }
    return out;
}

GridPotential c_transform(const GridPotential& phi) {
    if (phi.size() == 0) throw InputError("c_transform on empty grid");
    if (!(phi.step > 0.0)) throw InputError("c_transform requires positive grid step");
    if (phi.p == 1.0) return c_transform_p1(phi);
    if (phi.p == 2.0) return c_transform_p2(phi);
    return c_transform_reference(phi);
}

std::vector<double> coarse_porous_set(const GridPotential& phi, double gamma, double h) {
    if (!(gamma > 0.5) || gamma > 1.0) throw InputError("coarse_porous_set: gamma must be in (1/2, 1]");
    if (!(h > 0.0)) throw InputError("coarse_porous_set: h must be > 0");
    const long k = std::lround(h / phi.step);
    if (k < 1) throw InputError("coarse_porous_set: h below the grid resolution");
    const double hs = static_cast<double>(k) * phi.step; // snapped h
    const long n = static_cast<long>(phi.size());
    if (2 * k >= n) throw InputError("coarse_porous_set: grid too narrow for the requested h");

    GridPotential phic = c_transform(phi);
    const double hp = cost_pow(hs, phi.p);
    std::vector<double> S;
    for (long j = k; j + k < n; ++j) {
        double q = (0.5 * (phic.values[static_cast<std::size_t>(j - k)] +
                           phic.values[static_cast<std::size_t>(j + k)]) -
                    phi.values[static_cast<std::size_t>(j)]) /
                   hp;
        if (q >= gamma) S.push_back(phi.coord(static_cast<std::size_t>(j)));
    }

    // separation dichotomy of the returned set
    const double kappa = std::pow(2.0 * gamma - 1.0, 1.0 / phi.p);
    const double near = hs * (1.0 + kappa) * (1.0 - 1e-9);
    const double tight = hs * (1.0 - kappa) * (1.0 + 1e-9) + 1e-12 * hs;
    for (std::size_t a = 0; a < S.size(); ++a) {
        for (std::size_t b = a + 1; b < S.size(); ++b) {
            double d = S[b] - S[a];
            if (d >= near) break;
            if (d > tight)
                throw NumericError("coarse_porous_set: separation dichotomy violated");
        }
    }
    return S;
}

// ------------------------------------------------------- submeasure estimate

namespace {

// alpha <= mu checked atom-by-atom and on the common segment refinement.
void check_submeasure(const Measure1D& mu, const Measure1D& alpha, const char* name) {
    const double tol = 1e-12;
    for (const auto& a : alpha.atoms()) {
        const auto& atoms = mu.atoms();
        auto it = std::lower_bound(atoms.begin(), atoms.end(), a.pos,
                                   [](const Atom& x, double v) { return x.pos < v; });
        if (it == atoms.end() || it->pos != a.pos || a.mass > it->mass * (1.0 + tol) + tol)
            throw InputError(std::string(name) + " is not a submeasure (atoms)");
    }
    // density comparison on the union refinement
    std::vector<double> cuts;
    for (const auto& s : mu.segments()) {
        cuts.push_back(s.left);
        cuts.push_back(s.right);
    }
    for (const auto& s : alpha.segments()) {
        cuts.push_back(s.left);
        cuts.push_back(s.right);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto density_at = [](const Measure1D& m, double a, double b) {
        double mid = 0.5 * (a + b);
        double d = 0.0;
        for (const auto& s : m.segments()) {
            if (s.left <= a && b <= s.right && s.left <= mid && mid <= s.right) d += s.density();
        }
        return d;
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double da = density_at(alpha, cuts[i], cuts[i + 1]);
        if (da == 0.0) continue;
        double dm = density_at(mu, cuts[i], cuts[i + 1]);
        if (da > dm * (1.0 + 1e-12) + 1e-12)
            throw InputError(std::string(name) + " is not a submeasure (segments)");
    }
}

} // namespace

SubmeasureBound submeasure_distance_bound(const Measure1D& mu, const Measure1D& alpha,
                                          const Measure1D& beta, double p) {
    check_submeasure(mu, alpha, "alpha");
    check_submeasure(mu, beta, "beta");
    check_equal_masses(alpha, beta);
    double eps = std::max(0.0, mu.total_mass() - alpha.total_mass());
    auto [lo, hi] = mu.support_hull();
    double diam = hi - lo;
    SubmeasureBound out;
    out.epsilon = eps;
    out.diam = diam;
    out.bound = eps * cost_pow(diam, p);
    out.wp_p = transport_cost_p(alpha, beta, p);
    if (out.wp_p > out.bound + 1e-9)
        throw NumericError("submeasure distance exceeds the certified bound");
    return out;
}

} // namespace otlab
