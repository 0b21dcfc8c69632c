#include "otlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "otlab/cantor.hpp"
#include "otlab/errors.hpp"
#include "otlab/field.hpp"
#include "otlab/io.hpp"
#include "otlab/parallel.hpp"
#include "otlab/porosity.hpp"
#include "otlab/rates.hpp"
#include "otlab/transport.hpp"

namespace otlab {

namespace {

using Clock = std::chrono::steady_clock;

// Tracks the tightest slack and a one-line description of where it occurred.
struct Check {
    double margin = std::numeric_limits<double>::infinity();
    std::string worst = "no sub-checks ran";

    void expect(double slack, const std::string& what) {
        if (slack < margin) {
            margin = slack;
            worst = what;
        }
    }
    bool ok() const { return margin >= 0.0; }
};

std::string fmt(double v) { return format_double(v); }

Measure1D random_probability_measure(std::mt19937_64& rng, bool allow_segments = true) {
    std::uniform_int_distribution<int> n_atoms(0, 4);
    std::uniform_int_distribution<int> n_segs(0, 3);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    std::uniform_real_distribution<double> len(0.05, 1.5);
    int ka = n_atoms(rng);
    int ks = allow_segments ? n_segs(rng) : 0;
    if (ka + ks == 0) ka = 1;
    std::vector<Atom> atoms;
    std::vector<Segment> segs;
    double total = 0.0;
    for (int i = 0; i < ka; ++i) {
        atoms.push_back({pos(rng), mass(rng)});
        total += atoms.back().mass;
    }
    for (int i = 0; i < ks; ++i) {
        double a = pos(rng);
        segs.push_back({a, a + len(rng), mass(rng)});
        total += segs.back().mass;
    }
    for (auto& a : atoms) a.mass /= total;
    for (auto& s : segs) s.mass /= total;
    return Measure1D(std::move(atoms), std::move(segs));
}

MeasureField random_field(std::mt19937_64& rng, double vmax) {
    std::uniform_int_distribution<int> n_atoms(1, 6);
    std::uniform_int_distribution<int> n_vel(1, 4);
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    std::uniform_real_distribution<double> wgt(0.1, 1.0);
    std::uniform_real_distribution<double> vel(-vmax, vmax);
    std::uniform_real_distribution<double> prob(0.05, 1.0);
    int n = n_atoms(rng);
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) xs.push_back(pos(rng));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double wtotal = 0.0;
    std::vector<Fiber> fibers;
    for (double x : xs) {
        Fiber f;
        f.x = x;
        f.weight = wgt(rng);
        wtotal += f.weight;
        int m = n_vel(rng);
        double psum = 0.0;
        for (int k = 0; k < m; ++k) {
            f.dist.push_back({vel(rng), prob(rng)});
            psum += f.dist.back().p;
        }
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < f.dist.size(); ++k) {
            f.dist[k].p /= psum;
            acc += f.dist[k].p;
        }
        f.dist.back().p = 1.0 - acc; // exact unit sum
        fibers.push_back(std::move(f));
    }
    for (auto& f : fibers) f.weight /= wtotal;
    return MeasureField(std::move(fibers));
}

// ---------------------------------------------------------------- criteria

CriterionResult criterion_1(std::uint64_t) {
    Check c;
    auto t0 = Clock::now();
    const Measure1D m = Measure1D::dirac(0.0);
    for (double p : {1.0, 2.0, 3.0}) {
        for (double h : {0.25, 1e-3}) {
            double w = wasserstein(m, shift_superpose(m, h), p);
            c.expect(1e-12 - std::abs(w - h),
                     "p=" + fmt(p) + " h=" + fmt(h) + " |W-h|=" + fmt(std::abs(w - h)));
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(1e-3 - secs, "runtime " + fmt(secs) + "s vs 1ms cap");
    return {1, "dirac-exactness", c.ok(), c.margin, c.worst, secs};
}

CriterionResult criterion_2(std::uint64_t seed) {
    Check c;
    auto t0 = Clock::now();
    const Measure1D m = Measure1D::uniform(0.0, 1.0);
    std::mt19937_64 rng(seed + 2);
    for (double h : {0.1, 0.01, 0.001}) {
        Measure1D mh = shift_superpose(m, h);
        double w = wasserstein(m, mh, 1.0);
        double rel = std::abs(w - h * h) / (h * h);
        c.expect(1e-12 - rel, "h=" + fmt(h) + " rel err " + fmt(rel));
        // Monte-Carlo CDF-difference oracle
        const std::size_t N = 10'000'000;
        double lo = -h, hi = 1.0 + h;
        std::uniform_real_distribution<double> ux(lo, hi);
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double x = ux(rng);
            sum += std::abs(m.cdf_at(x) - mh.cdf_at(x));
        }
        double mc = sum / static_cast<double>(N) * (hi - lo);
        c.expect(1e-3 - std::abs(mc - w), "h=" + fmt(h) + " MC gap " + fmt(std::abs(mc - w)));
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {2, "absolutely-continuous-decay", c.ok(), c.margin, c.worst, secs};
}

CriterionResult criterion_3(std::uint64_t seed) {
    Check c;
    auto t0 = Clock::now();
    const std::vector<double> ps = {1.0, 1.5, 2.0, 3.0};
    const int N = 200;
    std::vector<double> slack(static_cast<std::size_t>(N),
                              std::numeric_limits<double>::infinity());
    std::vector<std::mt19937_64> rngs;
    for (int i = 0; i < N; ++i) rngs.emplace_back(seed + 3000 + static_cast<std::uint64_t>(i));
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
        Measure1D m = random_probability_measure(rngs[i]);
        for (double h : {1e-1, 1e-3}) {
            POrderingReport rep = p_ordering_check(m, h, ps);
            for (const auto& row : rep.rows) {
                slack[i] = std::min(slack[i], row.lower_margin + 1e-9);
                slack[i] = std::min(slack[i], row.upper_margin + 1e-9);
            }
        }
    });
    for (int i = 0; i < N; ++i) c.expect(slack[static_cast<std::size_t>(i)], "measure #" + std::to_string(i));
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {3, "p-ordering-sandwich", c.ok(), c.margin, c.worst, secs};
}

CriterionResult criterion_4(std::uint64_t seed) {
    Check c;
    auto t0 = Clock::now();
    std::mt19937_64 rng(seed + 4);
    std::uniform_real_distribution<double> rad(0.3, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        double R = rad(rng);
        MeasureField xi = random_field(rng, R);
        Measure1D base = xi.base();
        Measure1D moved = xi.exp_map(1.0);
        double M = base.total_mass();
        std::vector<double> rs;
        for (int k = 0; k < 40; ++k) rs.push_back((k + 0.5) / 40.0 * M);
        std::uniform_real_distribution<double> ur(1e-9, M);
        for (int k = 0; k < 10; ++k) rs.push_back(ur(rng));
        for (const auto& s : monotone_plan(base, moved, rs)) {
            c.expect(R + 1e-12 - std::abs(s.y - s.x),
                     "trial " + std::to_string(trial) + " r=" + fmt(s.r));
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {4, "plan-support-bound", c.ok(), c.margin, c.worst, secs};
}

CriterionResult criterion_5(std::uint64_t) {
    Check c;
    auto t0 = Clock::now();
    const int depth = 14;
    CantorSpec spec = CantorSpec::constant(1.0 / 3.0);
    Measure1D mu = spec.measure(depth);
    double trunc_dist = spec.delta(depth); // W_1(mu_alpha, mu^N) <= delta_N
    std::vector<double> probes = spec.failure_probes(2, 8);
    const double floor = std::ldexp(1.0, -7);
    std::vector<RateSample> rows = rate_scan(mu, probes, 1.0, trunc_dist);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        c.expect(r.quotient - (floor - r.truncation_error_bound),
                 "n=" + std::to_string(2 + i) + " q=" + fmt(r.quotient));
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(30.0 - secs, "runtime " + fmt(secs) + "s vs 30s cap");
    return {5, "cantor-failure-regime", c.ok(), c.margin, c.worst, secs};
}

CriterionResult criterion_6(std::uint64_t) {
    Check c;
    auto t0 = Clock::now();
    const int depth = 18;
    CantorSpec spec = CantorSpec::harmonic(2.0);
    Measure1D mu = spec.measure(depth);
    double trunc_dist = spec.delta(depth);
    auto bands = spec.band_probes(3, 10);
    std::vector<double> probes;
    for (const auto& [lo, hi] : bands) probes.push_back(std::sqrt(lo * hi));
    std::vector<RateSample> rows = rate_scan(mu, probes, 1.0, trunc_dist);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int n = 3 + static_cast<int>(i);
        double cap = 20.0 * std::sqrt(spec.alpha(n)) + rows[i].truncation_error_bound;
        c.expect(cap - rows[i].quotient, "n=" + std::to_string(n) + " q=" + fmt(rows[i].quotient));
    }
    double q3 = rows.front().quotient;
    double q10 = rows.back().quotient;
    c.expect(q3 / 2.0 - q10,
             "halving: q(10)=" + fmt(q10) + " vs q(3)/2=" + fmt(q3 / 2.0));
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(120.0 - secs, "runtime " + fmt(secs) + "s vs 120s cap");
    return {6, "cantor-success-regime", c.ok(), c.margin, c.worst, secs};
}

CriterionResult criterion_7(std::uint64_t seed) {
    Check c;
    auto t0 = Clock::now();
    std::mt19937_64 rng(seed + 7);
    std::uniform_real_distribution<double> keep(0.05, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Measure1D mu = random_probability_measure(rng);
        auto shrink = [&](const Measure1D& m) {
            std::vector<Atom> atoms;
            std::vector<Segment> segs;
            for (const auto& a : m.atoms()) atoms.push_back({a.pos, keep(rng) * a.mass});
            for (const auto& s : m.segments()) segs.push_back({s.left, s.right, keep(rng) * s.mass});
            return Measure1D(std::move(atoms), std::move(segs));
        };
        Measure1D alpha = shrink(mu);
        Measure1D beta = shrink(mu);
        // equalize masses by scaling the heavier one down (stays a submeasure)
        double sa = alpha.total_mass(), sb = beta.total_mass();
        if (sa > sb) {
            alpha = mixture({{alpha, sb / sa}});
        } else if (sb > sa) {
            beta = mixture({{beta, sa / sb}});
        }
        for (double p : {1.0, 2.0}) {
            try {
                SubmeasureBound b = submeasure_distance_bound(mu, alpha, beta, p);
                c.expect(b.bound + 1e-9 - b.wp_p, "trial " + std::to_string(trial) + " p=" + fmt(p));
            } catch (const NumericError& e) {
                c.expect(-1.0, std::string("trial ") + std::to_string(trial) + ": " + e.what());
            }
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {7, "submeasure-estimate", c.ok(), c.margin, c.worst, secs};
}

// Recomputes the separation slack of a porous-set result.
void separation_slack(const std::vector<double>& S, double h, double gamma, double p, Check& c,
                      const std::string& tag) {
    double kappa = std::pow(2.0 * gamma - 1.0, 1.0 / p);
    double near = h * (1.0 + kappa);
    double tight = h * (1.0 - kappa);
    for (std::size_t a = 0; a < S.size(); ++a) {
        for (std::size_t b = a + 1; b < S.size(); ++b) {
            double d = S[b] - S[a];
            if (d >= near * (1.0 - 1e-9)) break;
            c.expect(tight * (1.0 + 1e-9) + 1e-12 * h - d, tag + " pair gap " + fmt(d));
        }
    }
}

CriterionResult criterion_8(std::uint64_t seed) {
    Check c;
    auto t0 = Clock::now();
    std::mt19937_64 rng(seed + 8);
    std::uniform_int_distribution<int> nsize(32, 256);
    std::uniform_real_distribution<double> ustep(0.005, 0.05);
    std::uniform_real_distribution<double> ux0(-2.0, 0.0);
    std::uniform_real_distribution<double> uval(-1.0, 1.0);
    const double gammas[] = {0.6, 0.9};
    const double pexp[] = {1.0, 2.0};
    std::size_t nonempty = 0;
    for (int trial = 0; trial < 50; ++trial) {
        GridPotential phi;
        phi.x0 = ux0(rng);
        phi.step = ustep(rng);
        phi.p = pexp[trial % 2];
        int n = nsize(rng);
        double scale = phi.step * (phi.p == 1.0 ? 1.0 : phi.step) * 4.0;
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            v += uval(rng) * scale;
            phi.values.push_back(v);
        }
        double gamma = gammas[(trial / 2) % 2];
        std::uniform_int_distribution<int> uk(1, std::max(1, n / 4 - 1));
        double h = uk(rng) * phi.step;
        try {
            auto S = coarse_porous_set(phi, gamma, h);
            if (!S.empty()) ++nonempty;
            separation_slack(S, h, gamma, phi.p, c, "random #" + std::to_string(trial));
        } catch (const NumericError& e) {
            c.expect(-1.0, std::string("random #") + std::to_string(trial) + ": " + e.what());
        }
    }
    // distance-corner family: phi = d(., {0}) and phi = d(., midpoints of C^3)
    CantorSpec triadic = CantorSpec::constant(1.0 / 3.0);
    std::vector<double> mids;
    for (const auto& [a, b] : triadic.generation(3).intervals()) mids.push_back(0.5 * (a + b));
    PiecewiseLinear d0 = distance_potential(IntervalSet::points({0.0}));
    PiecewiseLinear dmid = distance_potential(IntervalSet::points(mids));
    for (double p : pexp) {
        for (double gamma : gammas) {
            {
                GridPotential phi;
                phi.x0 = -1.0;
                phi.step = 0.025;
                phi.p = p;
                for (int i = 0; i <= 80; ++i) phi.values.push_back(d0(phi.coord(i)));
                auto S = coarse_porous_set(phi, gamma, 0.1);
                if (S.empty()) c.expect(-1.0, "corner family produced empty S");
                ++nonempty;
                separation_slack(S, 0.1, gamma, p, c, "corner p=" + fmt(p));
            }
            {
                // clusters around isolated midpoints; their diameter saturates
                // the h(1-kappa) side of the dichotomy
                double h = triadic.alpha(3) * triadic.delta(3) / 2.0;
                GridPotential phi;
                phi.step = h / 4.0;
                phi.x0 = -32.0 * phi.step;
                phi.p = p;
                std::size_t n = static_cast<std::size_t>((1.0 + 64.0 * phi.step) / phi.step) + 1;
                for (std::size_t i = 0; i < n; ++i) phi.values.push_back(dmid(phi.coord(i)));
                auto S = coarse_porous_set(phi, gamma, h);
                if (S.empty()) c.expect(-1.0, "midpoint family produced empty S");
                ++nonempty;
                separation_slack(S, 4.0 * phi.step, gamma, p, c, "midpoints p=" + fmt(p));
            }
        }
    }
    if (nonempty == 0) c.expect(-1.0, "all S-sets empty; criterion vacuous");
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {8, "coarse-porous-separation", c.ok(), c.margin, c.worst, secs};
}

CriterionResult criterion_9(std::uint64_t seed) {
    Check c;
    auto t0 = Clock::now();
    std::mt19937_64 rng(seed + 9);
    std::uniform_real_distribution<double> uh(0.01, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        MeasureField zeta = random_field(rng, 2.0);
        std::vector<double> b = zeta.barycenter();
        MeasureField z0 = zeta.centered();
        Measure1D base = zeta.base();
        // orthogonality of the centred field and the map field of b
        double ip = inner(z0, MeasureField::from_map(base, b));
        c.expect(1e-12 - std::abs(ip), "trial " + std::to_string(trial) + " <z0,map(b)>=" + fmt(ip));
        // norm decomposition
        double b2 = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) b2 += zeta.fibers()[i].weight * b[i] * b[i];
        double gap = zeta.second_moment() - z0.second_moment() - b2;
        c.expect(1e-12 - std::abs(gap), "trial " + std::to_string(trial) + " decomposition gap " + fmt(gap));
        // exp of the unit symmetric field realizes the shift superposition
        double h = (trial == 0) ? 0.25 : uh(rng);
        MeasureField sym = MeasureField::unit_symmetric(base);
        bool same = sym.exp_map(h).approx_equal(shift_superpose(base, h), 0.0);
        c.expect(same ? 0.0 : -1.0, "trial " + std::to_string(trial) + " exp/shift identity");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {9, "tangent-field-identities", c.ok(), c.margin, c.worst, secs};
}

CriterionResult criterion_10(std::uint64_t) {
    Check c;
    auto t0 = Clock::now();
    CantorSpec spec = CantorSpec::constant(1.0 / 3.0);
    const int depth = 8;
    Measure1D mu8 = spec.measure(depth);
    std::vector<PiecewiseLinear> layers;
    for (int n = 0; n < depth; ++n) layers.push_back(spec.layer(n));
    for (int i = 0; i < 1000; ++i) {
        double x = -0.05 + 1.1 * static_cast<double>(i) / 999.0;
        double f = std::max(0.0, std::min(1.0, x)); // F of the unit uniform
        for (const auto& layer : layers) f += layer(x);
        double gap = std::abs(f - mu8.cdf_at(x));
        c.expect(1e-12 - gap, "x=" + fmt(x) + " series gap " + fmt(gap));
    }
    for (int n = 0; n <= 7; ++n) {
        double expected = std::ldexp(spec.alpha(n), -(n + 1));
        double got = layers[static_cast<std::size_t>(n)].sup_norm();
        c.expect(got == expected ? 0.0 : -std::abs(got - expected),
                 "n=" + std::to_string(n) + " sup-norm " + fmt(got));
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {10, "layer-series-consistency", c.ok(), c.margin, c.worst, secs};
}

} // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& only, std::uint64_t seed) {
    using Fn = CriterionResult (*)(std::uint64_t);
    const Fn fns[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 10; ++id) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        out.push_back(fns[id - 1](seed));
    }
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
       << " (margin=" << format_double(r.margin) << ", " << format_double(r.seconds)
       << "s) worst: " << r.detail;
    return os.str();
}

} // namespace otlab
