#include <doctest.h>

#include <cmath>

#include "lcgf/field.hpp"
#include "lcgf/stats.hpp"
#include "lcgf/wick.hpp"
#include "lcgf/zakharov.hpp"

using namespace lcgf;

TEST_CASE("hermite closed forms") {
    CHECK(hermite(0, 3.0, 2.0) == 1.0);
    CHECK(hermite(1, 3.0, 2.0) == 3.0);
    CHECK(hermite(2, 2.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(hermite(3, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(hermite(4, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(hermite(9, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(hermite(2, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("hermite recursion extends the closed forms") {
    // recursion H_{k+1} = x H_k - k sigma H_{k-1} against explicit polynomials
    for (double x : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
        for (double s : {0.5, 1.0, 2.5}) {
            double h5 = x * hermite(4, x, s) - 4.0 * s * hermite(3, x, s);
            CHECK(hermite(5, x, s) == doctest::Approx(h5).epsilon(1e-12));
            double explicit5 = std::pow(x, 5) - 10.0 * s * std::pow(x, 3) + 15.0 * s * s * x;
            CHECK(hermite(5, x, s) == doctest::Approx(explicit5).epsilon(1e-12));
            double explicit6 = std::pow(x, 6) - 15.0 * s * std::pow(x, 4) + 45.0 * s * s * x * x -
                               15.0 * s * s * s;
            CHECK(hermite(6, x, s) == doctest::Approx(explicit6).epsilon(1e-12));
        }
    }
}

TEST_CASE("wick context picks up the law variance") {
    LatticePtr lat = make_lattice(2, 4);
    WickContext c1 = WickContext::for_law(GaussLaw::log_correlated(), *lat);
    CHECK(c1.sigma == doctest::Approx(point_variance(lat->spec())).epsilon(1e-14));
    WickContext c2 = WickContext::for_law(GaussLaw::log_correlated(true), *lat);
    CHECK(c2.sigma == doctest::Approx(ball_weight_sum(2, 4, -2.0)).epsilon(1e-14));
    CHECK(c2.complex_valued);
}

TEST_CASE("wick powers of a constant field") {
    LatticePtr lat = make_lattice(2, 2);
    const double sigma = 1.3;
    WickContext ctx{sigma, false};
    SpectralField u = SpectralField::zero(lat, false);
    const double c = 0.8;
    u.set_coeff(Mode{0, 0, 0}, cplx{c, 0.0});

    GridArray g = to_grid(u);
    auto p4 = wick_power(g, 4, ctx);
    double expect = c * c * c * c - 6.0 * sigma * c * c + 3.0 * sigma * sigma;
    CHECK(p4.front() == doctest::Approx(expect).epsilon(1e-13));
    CHECK(average(p4) == doctest::Approx(expect).epsilon(1e-13));

    // the renormalized potential at the zero field is (coupling/4) 3 sigma^2
    SpectralField z = SpectralField::zero(lat, false);
    CHECK(wick_potential(z, 2.0, 4, ctx) ==
          doctest::Approx(0.5 * 3.0 * sigma * sigma).epsilon(1e-13));

    // tamed cubic at a constant: (coupling/3)(c^3 - 3 sigma c) - A (c^2 - sigma)^2
    double A = 0.7, coupling = 3.0;
    double mass = c * c - sigma;
    double expect3 = coupling / 3.0 * (c * c * c - 3.0 * sigma * c) - A * mass * mass;
    CHECK(tamed_cubic_potential(u, coupling, A, ctx) == doctest::Approx(expect3).epsilon(1e-12));
}

TEST_CASE("complex wick powers") {
    LatticePtr lat = make_lattice(2, 2);
    const double sigma = 0.9;
    WickContext ctx{sigma, true};
    SpectralField u = SpectralField::zero(lat, true);
    u.set_coeff(Mode{0, 0, 0}, cplx{0.3, -0.4});
    GridArray g = to_grid(u);

    auto sq = complex_wick_square(g, ctx);
    CHECK(sq.front() == doctest::Approx(0.25 - sigma).epsilon(1e-13));

    SpectralField z = SpectralField::zero(lat, true);
    GridArray gz = to_grid(z);
    auto q = complex_wick_quartic(gz, ctx);
    CHECK(q.front() == doctest::Approx(2.0 * sigma * sigma).epsilon(1e-13));

    // Laguerre form: :|u|^4: = 2 sigma^2 L_2(|u|^2 / sigma), L_2(x) = (x^2-4x+2)/2
    auto lag = [&](cplx v) {
        double x = std::norm(v) / sigma;
        return 2.0 * sigma * sigma * 0.5 * (x * x - 4.0 * x + 2.0);
    };
    SpectralField r = sample(GaussLaw::log_correlated(true), lat, derive_key(1, 1), 0);
    GridArray gr = to_grid(r);
    auto qr = complex_wick_quartic(gr, ctx);
    for (std::size_t i = 0; i < gr.size(); i += 7)
        CHECK(qr[i] == doctest::Approx(lag(gr[i])).epsilon(1e-10));

    CHECK_THROWS_AS(complex_wick_square(g, WickContext{sigma, false}), std::invalid_argument);
    CHECK_THROWS_AS(wick_power(g, 2, ctx), std::invalid_argument);
}

TEST_CASE("wick mass: spectral route equals grid route and is centered") {
    LatticePtr lat = make_lattice(2, 6);
    GaussLaw law = GaussLaw::log_correlated();
    WickContext ctx = WickContext::for_law(law, *lat);
    RngKey key = derive_key(77, 0);

    SpectralField u = sample(law, lat, key, 0);
    GridArray g = to_grid(u);
    double grid_route = average(wick_power(g, 2, ctx));
    CHECK(grid_route == doctest::Approx(wick_mass(u, ctx)).epsilon(1e-10));

    const std::size_t S = 20000;
    std::vector<double> masses(S);
    parallel_for(S, 2, [&](std::size_t s) {
        masses[s] = wick_mass(sample(law, lat, key, std::uint32_t(s)), ctx);
    });
    Summary sm = summarize(masses);
    CHECK(std::abs(sm.mean) <= 3.0 * sm.stderr_);

    // Gaussian pairing: Var(int :u^2:) = 2 sum <n>^{-2d}
    std::vector<double> sq(S);
    for (std::size_t i = 0; i < S; ++i) sq[i] = masses[i] * masses[i];
    Summary s2 = summarize(sq);
    double exact = 2.0 * ball_weight_sum(2, 6, -4.0);
    CHECK(std::abs(s2.mean - exact) <= kZ99 * s2.stderr_);
}

TEST_CASE("complex smooth law: second moment of the off-diagonal square") {
    // d=2, N=1 under the alpha=1 complex law: E ||pi_{!=0}|u|^2||_{L^2}^2 = 7
    CHECK(second_moment_exact(1) == doctest::Approx(7.0).epsilon(1e-14));

    LatticePtr lat = make_lattice(2, 1);
    GaussLaw law = GaussLaw::log_correlated(true);
    WickContext ctx = WickContext::for_law(law, *lat);
    RngKey key = derive_key(99, 0);
    const std::size_t S = 40000;
    std::vector<double> v(S);
    parallel_for(S, 2, [&](std::size_t s) {
        SpectralField u = sample(law, lat, key, std::uint32_t(s));
        v[s] = zak_sample_stats(u, ctx).offdiag_sq;
    });
    Summary sm = summarize(v);
    CHECK(std::abs(sm.mean - 7.0) <= kZ99 * sm.stderr_);
}

TEST_CASE("centered complex wick means") {
    LatticePtr lat = make_lattice(2, 4);
    GaussLaw law = GaussLaw::log_correlated(true);
    WickContext ctx = WickContext::for_law(law, *lat);
    RngKey key = derive_key(101, 0);
    const std::size_t S = 20000;
    std::vector<double> m2(S), m4(S);
    parallel_for(S, 2, [&](std::size_t s) {
        SpectralField u = sample(law, lat, key, std::uint32_t(s));
        GridArray g = to_grid(u);
        m2[s] = average(complex_wick_square(g, ctx));
        m4[s] = average(complex_wick_quartic(g, ctx));
    });
    Summary s2 = summarize(m2), s4 = summarize(m4);
    CHECK(std::abs(s2.mean) <= 3.0 * s2.stderr_);
    CHECK(std::abs(s4.mean) <= 3.0 * s4.stderr_);
}

TEST_CASE("shift expansion: degenerate and random cases") {
    LatticePtr lat = make_lattice(1, 4);
    GaussLaw law = GaussLaw::log_correlated();
    WickContext ctx = WickContext::for_law(law, *lat);

    SpectralField y = sample(law, lat, derive_key(55, 0), 0);
    SpectralField zero = SpectralField::zero(lat, false);
    GridArray yg = to_grid(y), zg = to_grid(zero);

    SUBCASE("zero shift reduces to the plain potential") {
        ShiftExpansion ex = shifted_wick_expansion(yg, zg, 4, ctx.sigma);
        for (int l = 0; l < 4; ++l) CHECK(ex.terms[std::size_t(l)] == 0.0);
        double pot = wick_potential(y, 4.0, 4, ctx);  // coupling/k = 1
        CHECK(ex.total() == doctest::Approx(pot).epsilon(1e-12));
    }
    SUBCASE("zero base reduces to shifted Hermite moments") {
        SpectralField th = project(sample(law, lat, derive_key(55, 1), 0), 2);
        GridArray tg = to_grid(th);
        GridArray zy = to_grid(zero);
        ShiftExpansion ex = shifted_wick_expansion(zy, tg, 4, ctx.sigma);
        double direct = shifted_wick_direct(zy, tg, 4, ctx.sigma);
        CHECK(ex.total() == doctest::Approx(direct).epsilon(1e-12));
    }
    SUBCASE("random shift matches direct evaluation to 1e-10") {
        for (std::uint32_t s = 0; s < 8; ++s) {
            SpectralField ys = sample(law, lat, derive_key(55, 2), s);
            SpectralField ts = project(sample(law, lat, derive_key(55, 3), s), 3);
            GridArray a = to_grid(ys), b = to_grid(ts);
            for (int k : {3, 4}) {
                ShiftExpansion ex = shifted_wick_expansion(a, b, k, ctx.sigma);
                double direct = shifted_wick_direct(a, b, k, ctx.sigma);
                CHECK(ex.total() ==
                      doctest::Approx(direct).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("smooth quartic potential") {
    LatticePtr lat = make_lattice(1, 4);
    SpectralField u = SpectralField::zero(lat, false);
    const double c = 1.1;
    u.set_coeff(Mode{0, 0, 0}, cplx{c, 0.0});
    // gamma from alpha = d: (4a-d)/(2a-d) = 3
    double gamma = (4.0 * 1.0 - 1.0) / (2.0 * 1.0 - 1.0);
    CHECK(gamma == doctest::Approx(3.0));
    double A = 0.4;
    // coupling 4 gives the plain quartic normalization
    double expect = c * c * c * c - A * std::pow(c * c, gamma);
    CHECK(smooth_quartic_potential(u, 4.0, A, gamma) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(smooth_quartic_potential(u, 4.0, A, 0.0), std::invalid_argument);
}

TEST_CASE("zero taming reduces the cubic potential exactly") {
    LatticePtr lat = make_lattice(2, 6);
    GaussLaw law = GaussLaw::log_correlated();
    WickContext ctx = WickContext::for_law(law, *lat);
    for (std::uint32_t s = 0; s < 5; ++s) {
        SpectralField u = sample(law, lat, derive_key(303, 0), s);
        CHECK(tamed_cubic_potential(u, 3.0, 0.0, ctx) == wick_potential(u, 3.0, 3, ctx));
    }
}

TEST_CASE("potential rejects unsupported powers") {
    LatticePtr lat = make_lattice(1, 2);
    WickContext ctx{1.0, false};
    SpectralField u = SpectralField::zero(lat, false);
    CHECK_THROWS_AS(wick_potential(u, 1.0, 5, ctx), std::invalid_argument);
    SpectralField v = SpectralField::zero(lat, true);
    CHECK_THROWS_AS(wick_potential(v, 1.0, 3, WickContext{1.0, true}), std::invalid_argument);
}
