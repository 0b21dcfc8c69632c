#include <doctest.h>

#include <cmath>
#include <random>

#include "otlab/cantor.hpp"
#include "otlab/errors.hpp"
#include "otlab/rates.hpp"
#include "otlab/transport.hpp"
#include "test_support.hpp"

using namespace otlab;

TEST_CASE("shift_superpose") {
    Measure1D d0 = Measure1D::dirac(0.0);
    Measure1D s = shift_superpose(d0, 0.25);
    REQUIRE(s.atoms().size() == 2);
    CHECK(s.atoms()[0].pos == -0.25);
    CHECK(s.atoms()[1].pos == 0.25);
    CHECK(s.atoms()[0].mass == 0.5);

    Measure1D two({{0.0, 0.5}, {1.0, 0.5}}, {});
    Measure1D merged = shift_superpose(two, 0.5);
    REQUIRE(merged.atoms().size() == 3);
    CHECK(merged.atoms()[0].pos == -0.5);
    CHECK(merged.atoms()[1].pos == 0.5);
    CHECK(merged.atoms()[1].mass == 0.5); // the two shifted copies meet at 0.5
    CHECK(merged.atoms()[2].pos == 1.5);

    CHECK(shift_superpose(two, 0.0).approx_equal(two));
    CHECK_THROWS_AS(shift_superpose(two, -1.0), InputError);

    // mass preservation and commutation with translations
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Measure1D m = testsupport::random_measure(rng);
        double h = 0.05 + 0.2 * std::abs(uc(rng));
        double cshift = uc(rng);
        Measure1D a = shift_superpose(m.pushforward_affine(1.0, cshift), h);
        Measure1D b = shift_superpose(m, h).pushforward_affine(1.0, cshift);
        CHECK(a.approx_equal(b, 1e-12));
        CHECK(shift_superpose(m, h).total_mass() ==
              doctest::Approx(m.total_mass()).epsilon(1e-14));
    }
}

TEST_CASE("rate_quotient examples") {
    Measure1D d0 = Measure1D::dirac(0.0);
    for (double p : {1.0, 2.0, 3.0}) {
        for (double h : {0.25, 1e-3}) {
            RateSample s = rate_quotient(d0, h, p);
            CHECK(s.quotient == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    Measure1D u = Measure1D::uniform(0.0, 1.0);
    CHECK(rate_quotient(u, 0.1, 1.0).quotient == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rate_quotient(u, 0.01, 1.0).quotient == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_THROWS_AS(rate_quotient(u, 0.0, 1.0), InputError);
}

TEST_CASE("rate_scan") {
    Measure1D d0 = Measure1D::dirac(0.0);
    auto rows = rate_scan(d0, default_h_grid(), 1.0);
    CHECK(rows.size() == 17);
    for (const auto& r : rows) CHECK(r.quotient == doctest::Approx(1.0).epsilon(1e-12));

    Measure1D u = Measure1D::uniform(0.0, 1.0);
    std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
    for (const auto& r : rate_scan(u, hs, 1.0)) {
        CHECK(r.quotient == doctest::Approx(r.h).epsilon(1e-12)); // h^2 law below 1/2
    }

    // triadic approximant at the failure probes stays above 2^-7
    CantorSpec spec = CantorSpec::constant(1.0 / 3.0);
    Measure1D mu = spec.measure(12);
    auto probes = spec.failure_probes(2, 8);
    for (const auto& r : rate_scan(mu, probes, 1.0, spec.delta(12))) {
        CHECK(r.quotient >= std::ldexp(1.0, -7));
        CHECK(r.truncation_error_bound == doctest::Approx(2.0 * spec.delta(12) / r.h));
    }
}

TEST_CASE("quotient never exceeds one") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uh(1e-4, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        Measure1D m = testsupport::random_measure(rng);
        RateSample s = rate_quotient(m, uh(rng), (trial % 2) ? 1.0 : 2.0);
        CHECK(s.quotient <= 1.0 + 1e-9);
        CHECK(s.quotient >= 0.0);
    }
}

TEST_CASE("p-ordering sandwich") {
    std::vector<double> ps{1.0, 1.5, 2.0, 3.0};

    Measure1D d0 = Measure1D::dirac(0.0);
    POrderingReport rep = p_ordering_check(d0, 0.1, ps);
    CHECK(rep.ok);
    for (const auto& row : rep.rows) CHECK(row.quotient == doctest::Approx(1.0).epsilon(1e-12));

    Measure1D u = Measure1D::uniform(0.0, 1.0);
    POrderingReport repu = p_ordering_check(u, 0.1, ps);
    CHECK(repu.ok);
    CHECK(repu.w1_quotient == doctest::Approx(0.1).epsilon(1e-12));
    // boundary integration gives W_2 = sqrt(2 h^3 / 3) for the uniform
    double w2_expected = std::sqrt(2.0 * 0.001 / 3.0);
    CHECK(repu.rows[2].quotient == doctest::Approx(w2_expected / 0.1).epsilon(1e-10));
    CHECK(repu.rows[2].quotient <= std::sqrt(0.1) + 1e-9);

    Measure1D two({{0.0, 0.5}, {1.0, 0.5}}, {});
    POrderingReport rept = p_ordering_check(two, 0.1, ps);
    CHECK(rept.ok);
    for (const auto& row : rept.rows) CHECK(row.quotient == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        Measure1D m = testsupport::random_measure(rng);
        for (double h : {1e-1, 1e-3}) {
            POrderingReport r = p_ordering_check(m, h, ps);
            CAPTURE(trial);
            CHECK(r.ok);
        }
    }
}

TEST_CASE("truncation bound controls depth refinement") {
    // treat mu^10 as the refined truth and mu^6 as its approximant:
    // |q_10(h) - q_6(h)| <= 2 delta_6 / h
    CantorSpec spec = CantorSpec::constant(1.0 / 3.0);
    Measure1D fine = spec.measure(10);
    Measure1D coarse = spec.measure(6);
    CHECK(wasserstein(fine, coarse, 1.0) <= spec.delta(6));
    for (double h : spec.failure_probes(2, 4)) {
        double qf = rate_quotient(fine, h, 1.0).quotient;
        double qc = rate_quotient(coarse, h, 1.0).quotient;
        CHECK(std::abs(qf - qc) <= 2.0 * spec.delta(6) / h + 1e-12);
    }
}
