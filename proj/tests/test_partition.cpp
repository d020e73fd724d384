#include <doctest.h>

#include <cmath>

#include "lcgf/partition.hpp"
#include "lcgf/wick.hpp"

using namespace lcgf;

TEST_CASE("estimate validation") {
    EstimateConfig cfg;
    cfg.samples = 10;
    CHECK_THROWS_AS(estimate_exp_potential(cfg), std::invalid_argument);

    // focusing quartic without a truncation is rejected
    cfg.samples = 200;
    cfg.spec = LatticeSpec::make(2, 4);
    cfg.potential = PotentialSpec{PotentialKind::WickPower, 1.0, 4, 0.0, 0.0};
    CHECK_THROWS_AS(estimate_exp_potential(cfg), std::invalid_argument);
    cfg.truncation = 10.0;
    CHECK_NOTHROW(estimate_exp_potential(cfg));
    // defocusing needs none
    cfg.truncation.reset();
    cfg.potential.coupling = -1.0;
    CHECK_NOTHROW(estimate_exp_potential(cfg));
}

TEST_CASE("estimates are bit-identical across worker counts and seeds reproduce") {
    EstimateConfig cfg;
    cfg.law = GaussLaw::log_correlated();
    cfg.spec = LatticeSpec::make(2, 8);
    cfg.potential = PotentialSpec{PotentialKind::WickPower, -1.0, 4, 0.0, 0.0};
    cfg.samples = 500;
    cfg.seed = 31;
    cfg.workers = 1;
    EstimateReport a = estimate_exp_potential(cfg);
    cfg.workers = 2;
    EstimateReport b = estimate_exp_potential(cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.ci_low == b.ci_low);

    cfg.seed = 32;
    EstimateReport c = estimate_exp_potential(cfg);
    CHECK(c.mean != a.mean);

    // confidence interval convention
    CHECK(a.ci_low == doctest::Approx(a.mean - 2.576 * a.stderr_).epsilon(1e-12));
    CHECK(a.ci_high == doctest::Approx(a.mean + 2.576 * a.stderr_).epsilon(1e-12));
    CHECK(a.samples >= 100);
}

TEST_CASE("monotone in the truncation on a fixed sample set") {
    EstimateConfig cfg;
    cfg.law = GaussLaw::log_correlated();
    cfg.spec = LatticeSpec::make(2, 8);
    cfg.potential = PotentialSpec{PotentialKind::WickPower, 1.0, 4, 0.0, 0.0};
    cfg.cutoff = CutoffSpec{CutoffMode::Absolute, 1.0};
    cfg.samples = 400;
    cfg.seed = 77;
    double prev = 0.0;
    bool first = true;
    for (double L : {0.5, 1.0, 2.0, 4.0}) {
        cfg.truncation = L;
        EstimateReport r = estimate_exp_potential(cfg);
        if (!first) CHECK(r.mean >= prev);
        prev = r.mean;
        first = false;
    }
}

TEST_CASE("tail flag reports the ceiling fraction") {
    EstimateConfig cfg;
    cfg.law = GaussLaw::log_correlated();
    cfg.spec = LatticeSpec::make(2, 4);
    cfg.potential = PotentialSpec{PotentialKind::WickPower, 1.0, 4, 0.0, 0.0};
    cfg.truncation = -30.0;  // below the potential's range: every sample clips
    cfg.samples = 300;
    EstimateReport r = estimate_exp_potential(cfg);
    CHECK(r.tail_flag == 1.0);
    CHECK(r.lower_bound_only());
    CHECK(r.mean == doctest::Approx(std::exp(-30.0)).epsilon(1e-12));

    cfg.truncation = 1e9;  // never clips
    EstimateReport r2 = estimate_exp_potential(cfg);
    CHECK(r2.tail_flag == 0.0);
}

TEST_CASE("signed and absolute cutoffs differ as sets") {
    EstimateConfig cfg;
    cfg.law = GaussLaw::log_correlated();
    cfg.spec = LatticeSpec::make(2, 6);
    cfg.potential = PotentialSpec{PotentialKind::WickPower, -1.0, 4, 0.0, 0.0};
    cfg.samples = 2000;
    cfg.seed = 5;
    cfg.cutoff = CutoffSpec{CutoffMode::Signed, 0.0};
    EstimateReport s = estimate_exp_potential(cfg);
    cfg.cutoff = CutoffSpec{CutoffMode::Absolute, 0.0};
    EstimateReport a = estimate_exp_potential(cfg);
    // signed admits the whole lower half, absolute almost nothing
    CHECK(s.mean > a.mean);
}

TEST_CASE("coupled Cauchy diagnostic: identical truncations vanish exactly") {
    GaussLaw law = GaussLaw::log_correlated();
    LatticePtr lat = make_lattice(2, 8);
    WickContext ctx = WickContext::for_law(law, *lat);
    RngKey key = derive_key(123, 0);
    SpectralField u = sample(law, lat, key, 0);
    double p1 = wick_potential(u, 1.0, 4, ctx);
    double p2 = wick_potential(u, 1.0, 4, ctx);
    CHECK(p1 == p2);
}

TEST_CASE("Cauchy diagnostic: exact Wick-mass tail and quartic decrease") {
    GaussLaw law = GaussLaw::log_correlated();
    SUBCASE("k = 2 against the exact pairing value") {
        auto rows = potential_cauchy_scan(law, 2, {4, 8, 16}, 2, 2.0, 4000, 17, 2);
        REQUIRE(rows.size() == 2);
        for (const auto& r : rows) {
            double tail = 2.0 * (ball_weight_sum(2, r.N_hi, -4.0) - ball_weight_sum(2, r.N_lo, -4.0));
            double expect = std::sqrt(tail);  // (sigma/2) = 1
            CHECK(std::abs(r.l2_diff - expect) <= 4.0 * r.stderr_ + 0.02 * expect);
        }
    }
    SUBCASE("k = 4 differences decrease in N") {
        auto rows = potential_cauchy_scan(law, 2, {8, 16, 32, 64}, 4, 1.0, 800, 19, 2);
        REQUIRE(rows.size() == 3);
        CHECK(rows[1].l2_diff < rows[0].l2_diff);
        CHECK(rows[2].l2_diff < rows[1].l2_diff);
    }
    CHECK_THROWS_AS(potential_cauchy_scan(law, 2, {8}, 2, 1.0, 500, 0), std::invalid_argument);
    CHECK_THROWS_AS(potential_cauchy_scan(law, 2, {8, 8}, 2, 1.0, 500, 0), std::invalid_argument);
}

TEST_CASE("chaos moment diagnostics") {
    RngKey key = derive_key(211, 0);
    const std::size_t S = 200000;

    SUBCASE("Gaussian scalar: ratio near 3^(1/4), bound not violated") {
        std::vector<double> x(S);
        for (std::size_t i = 0; i < S; ++i) x[i] = normal_pair(key, i, 0).z0;
        ChaosMomentReport r = chaos_moment_check(x, 1);
        CHECK(r.bound == doctest::Approx(std::sqrt(3.0)));
        CHECK(r.ratio == doctest::Approx(std::pow(3.0, 0.25)).epsilon(0.02));
        CHECK(!r.violated);
    }
    SUBCASE("Wick mass: chaos order 2 obeys (p-1)^{k/2} at p = 4") {
        GaussLaw law = GaussLaw::log_correlated();
        LatticePtr lat = make_lattice(2, 8);
        WickContext ctx = WickContext::for_law(law, *lat);
        const std::size_t n = 20000;
        std::vector<double> m(n);
        parallel_for(n, 2, [&](std::size_t s) {
            m[s] = wick_mass(sample(law, lat, key, std::uint32_t(s)), ctx);
        });
        ChaosMomentReport r = chaos_moment_check(m, 2);
        CHECK(r.bound == doctest::Approx(3.0));
        CHECK(!r.violated);
        CHECK(r.ratio < 3.0 + 3.0 * r.ratio_se);
    }
}
