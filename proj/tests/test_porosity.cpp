#include <doctest.h>

#include <cmath>
#include <random>

#include "otlab/cantor.hpp"
#include "otlab/errors.hpp"
#include "otlab/porosity.hpp"
#include "otlab/rates.hpp"
#include "otlab/transport.hpp"

using namespace otlab;

namespace {

// Independent endpoint-scan oracle for the farthest in-ball point of A.
double brute_farthest(const IntervalSet& A, double x, double s) {
    double d = 0.0;
    for (const auto& [a, b] : A.intervals()) {
        if (b <= x - s || a >= x + s) continue;
        double lo = std::max(a, x - s), hi = std::min(b, x + s);
        d = std::max(d, std::max(x - lo, hi - x));
    }
    return d;
}

} // namespace

TEST_CASE("porosity index basics") {
    IntervalSet origin = IntervalSet::points({0.0});
    CHECK(porosity_index(origin, 0.0, 0.5) == 0.0);
    CHECK(porosity_index(origin, 0.0, 1e-3) == 0.0);

    IntervalSet unit({{0.0, 1.0}});
    CHECK(porosity_index(unit, 0.5, 0.1) == 1.0);

    // triadic C^3 around the left endpoint: the ball of radius 1/9 reaches the
    // far edge of the second interval, so no tau < 1 works
    CantorSpec t = CantorSpec::constant(1.0 / 3.0);
    IntervalSet c3 = t.generation(3);
    CHECK(porosity_index(c3, 0.0, 1.0 / 9.0) == doctest::Approx(1.0).epsilon(1e-13));
    // a ball ending inside the first gap sees only [0, 1/27]
    CHECK(porosity_index(c3, 0.0, 2.0 / 27.0) == doctest::Approx(0.5).epsilon(1e-13));

    CHECK_THROWS_AS(porosity_index(c3, 0.5, 0.1), InputError);   // x not in A
    CHECK_THROWS_AS(porosity_index(c3, 0.0, 0.0), InputError);   // s must be positive
}

TEST_CASE("porosity index against the sampling oracle") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> upos(-2.0, 2.0);
    std::uniform_real_distribution<double> ulen(0.0, 0.7);
    std::uniform_real_distribution<double> us(0.05, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<IntervalSet::Interval> ivs;
        for (int i = 0; i < 4; ++i) {
            double a = upos(rng);
            ivs.emplace_back(a, a + ulen(rng));
        }
        IntervalSet A(ivs);
        const auto& iv = A.intervals()[static_cast<std::size_t>(trial) % A.size()];
        double x = 0.5 * (iv.first + iv.second);
        double s = us(rng);
        double idx = porosity_index(A, x, s);
        CHECK(idx * s == doctest::Approx(std::min(brute_farthest(A, x, s), s)).epsilon(1e-12));
        // random in-ball samples can only be closer
        std::uniform_real_distribution<double> uy(x - s, x + s);
        for (int k = 0; k < 1000; ++k) {
            double y = uy(rng);
            if (A.contains(y) && std::abs(y - x) < s)
                CHECK(std::abs(y - x) <= idx * s + 1e-12);
        }
    }
}

TEST_CASE("porosity profile") {
    IntervalSet pair = IntervalSet::points({0.0, 1.0});
    std::vector<double> scales{0.5, 0.1};
    auto prof = porosity_profile(pair, scales);
    REQUIRE(prof.size() == 2);
    CHECK(prof[0].tau == 0.0);
    CHECK(prof[1].tau == 0.0);

    IntervalSet unit({{0.0, 1.0}});
    for (const auto& row : porosity_profile(unit, scales)) CHECK(row.tau == 1.0);

    // matched scales on the triadic construction stay bounded away from zero
    CantorSpec t = CantorSpec::constant(1.0 / 3.0);
    IntervalSet c5 = t.generation(5);
    std::vector<double> matched;
    for (int m = 1; m < 5; ++m) matched.push_back(t.delta(m) * (1.0 + t.alpha(m)) / 2.0);
    for (const auto& row : porosity_profile(c5, matched)) {
        CHECK(row.tau >= 1.0 / 3.0 - 1e-9);
    }

    // scale below the minimum separation of a finite set forces tau = 0
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> upos(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> pts;
        for (int i = 0; i < 5; ++i) pts.push_back(upos(rng));
        IntervalSet A = IntervalSet::points(pts);
        double sep = A.min_separation();
        std::vector<double> ss{sep * 0.999, sep * 0.5};
        for (const auto& row : porosity_profile(A, ss)) CHECK(row.tau == 0.0);
    }

    std::vector<double> bad{0.1, 0.5};
    CHECK_THROWS_AS(porosity_profile(pair, bad), InputError); // not decreasing
}

TEST_CASE("class A diagnostic") {
    auto profile_of = [](std::vector<double> taus) {
        std::vector<PorosityPoint> p;
        double s = 1.0;
        for (double t : taus) {
            p.push_back({s, t});
            s *= 0.5;
        }
        return p;
    };
    CHECK(class_a_diagnostic(profile_of({0.0}), 0.5) == ClassAVerdict::ConsistentWithPorous);
    CHECK(class_a_diagnostic(profile_of({0.4, 0.3, 0.2, 0.1}), 0.5) ==
          ClassAVerdict::ConsistentWithPorous);
    CHECK(class_a_diagnostic(profile_of({1.0, 1.0, 1.0}), 0.5) == ClassAVerdict::Inconsistent);
    CHECK(class_a_diagnostic(profile_of({0.1, 0.3, 0.05, 0.2}), 0.5) ==
          ClassAVerdict::Inconclusive);

    // triadic generation at matched scales: inconsistent with the porous class
    CantorSpec t = CantorSpec::constant(1.0 / 3.0);
    IntervalSet c8 = t.generation(8);
    std::vector<double> matched;
    for (int m = 1; m < 8; ++m) matched.push_back(t.delta(m) * (1.0 + t.alpha(m)) / 2.0);
    auto prof = porosity_profile(c8, matched);
    CHECK(class_a_diagnostic(prof, 0.2) == ClassAVerdict::Inconsistent);
}

TEST_CASE("distance potential") {
    PiecewiseLinear d0 = distance_potential(IntervalSet::points({0.0}));
    for (double x : {-1.5, -0.3, 0.0, 0.2, 2.0})
        CHECK(d0(x) == doctest::Approx(std::abs(x)).epsilon(1e-15));

    PiecewiseLinear du = distance_potential(IntervalSet({{0.0, 1.0}}));
    CHECK(du(0.5) == 0.0);
    CHECK(du(-0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(du(1.75) == doctest::Approx(0.75).epsilon(1e-15));

    PiecewiseLinear dp = distance_potential(IntervalSet::points({0.0, 1.0}));
    CHECK(dp(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dp.is_lipschitz(1.0));

    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> upos(-2.0, 2.0);
    std::uniform_real_distribution<double> ulen(0.0, 0.5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<IntervalSet::Interval> ivs;
        for (int i = 0; i < 4; ++i) {
            double a = upos(rng);
            ivs.emplace_back(a, a + ulen(rng));
        }
        IntervalSet A(ivs);
        PiecewiseLinear psi = distance_potential(A);
        CHECK(psi.is_lipschitz(1.0));
        for (int k = 0; k < 50; ++k) {
            double x = upos(rng) * 1.5;
            CHECK(psi(x) == doctest::Approx(A.distance_to(x)).epsilon(1e-12));
        }
        for (const auto& [a, b] : A.intervals()) {
            CHECK(psi(a) == 0.0);
            CHECK(psi(b) == 0.0);
        }
    }
}

TEST_CASE("porous lower-bound machinery on midpoint discretizations") {
    // A = midpoints of the triadic generation m, mu = uniform atoms on A.
    // With tau = tau(s) from the profile and h = s(1+tau)/2, the dual bound
    // must reach mu(A)(1-tau)/(1+tau) - epsilon (here epsilon = 0).
    CantorSpec t = CantorSpec::constant(1.0 / 3.0);
    for (int m : {4, 5}) {
        std::vector<double> mids;
        for (const auto& [a, b] : t.generation(m).intervals()) mids.push_back(0.5 * (a + b));
        IntervalSet A = IntervalSet::points(mids);
        std::vector<Atom> atoms;
        for (double x : mids) atoms.push_back({x, std::ldexp(1.0, -m)});
        Measure1D mu(atoms, {});

        double s = 3.0 * t.delta(m); // reaches exactly the sibling midpoint
        auto prof = porosity_profile(A, std::vector<double>{s});
        double tau = prof[0].tau;
        CHECK(tau == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

        double h = s * (1.0 + tau) / 2.0;
        PiecewiseLinear psi = distance_potential(A);
        double bound = dual_lower_bound_w1(mu, shift_superpose(mu, h), psi) / h;
        double target = mu.total_mass() * (1.0 - tau) / (1.0 + tau);
        CHECK(bound >= target - 1e-9);
        CHECK(bound <= 1.0 + 1e-12);
    }
}
