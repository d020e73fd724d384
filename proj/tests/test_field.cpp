#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lcgf/field.hpp"
#include "lcgf/stats.hpp"

using namespace lcgf;

namespace {

// Brute-force quadruple convolution sum: integral of u1 u2 u3 u4 over the
// normalized torus equals the sum of coefficient products over
// n1+n2+n3+n4 = 0.  Small d=1 instances only.
double quartic_convolution_oracle(const SpectralField& u1, const SpectralField& u2,
                                  const SpectralField& u3, const SpectralField& u4) {
    const auto& lat = *u1.lattice;
    cplx acc{0, 0};
    for (std::size_t a = 0; a < lat.size(); ++a)
        for (std::size_t b = 0; b < lat.size(); ++b)
            for (std::size_t c = 0; c < lat.size(); ++c) {
                Mode s{-(lat.point(a)[0] + lat.point(b)[0] + lat.point(c)[0]), 0, 0};
                if (std::abs(s[0]) > lat.spec().N) continue;
                acc += u1.coeffs[a] * u2.coeffs[b] * u3.coeffs[c] * u4.coeff(s);
            }
    return acc.real();
}

}  // namespace

TEST_CASE("law validation") {
    CHECK_THROWS_AS(sample(GaussLaw::smooth(0.5), make_lattice(1, 2), derive_key(0, 0), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample(GaussLaw::smooth(1.0), make_lattice(2, 2), derive_key(0, 0), 0),
                    std::invalid_argument);
    CHECK_NOTHROW(sample(GaussLaw::smooth(1.01), make_lattice(2, 2), derive_key(0, 0), 0));
}

TEST_CASE("reality constraint holds exactly by construction") {
    LatticePtr lat = make_lattice(2, 6);
    SpectralField u = sample(GaussLaw::log_correlated(), lat, derive_key(11, 0), 42);
    CHECK(!u.complex_valued);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
        worst = std::max(worst, std::abs(u.coeffs[i] - std::conj(u.coeffs[lat->index_of_negation(i)])));
    CHECK(worst == 0.0);
    CHECK(u.coeff(Mode{0, 0, 0}).imag() == 0.0);
}

TEST_CASE("sampling is reproducible and coupled across cutoffs") {
    RngKey key = derive_key(5, 9);
    GaussLaw law = GaussLaw::log_correlated();
    SpectralField a = sample(law, make_lattice(2, 8), key, 3);
    SpectralField b = sample(law, make_lattice(2, 8), key, 3);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) CHECK(a.coeffs[i] == b.coeffs[i]);

    // nested truncation shares realizations mode by mode
    SpectralField big = sample(law, make_lattice(2, 16), key, 3);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        CHECK(big.coeff(a.lattice->point(i)) == a.coeffs[i]);

    SpectralField other = sample(law, make_lattice(2, 8), key, 4);
    bool all_same = true;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        all_same = all_same && a.coeffs[i] == other.coeffs[i];
    CHECK(!all_same);
}

TEST_CASE("empirical field variance matches sigma_N") {
    LatticePtr lat = make_lattice(2, 8);
    GaussLaw law = GaussLaw::log_correlated();
    RngKey key = derive_key(17, 0);
    const std::size_t S = 20000;
    std::array<double, 3> x{1.234, 0.567, 0.0};
    std::vector<double> v(S);
    parallel_for(S, 2, [&](std::size_t s) {
        SpectralField u = sample(law, lat, key, std::uint32_t(s));
        cplx val = evaluate(u, std::span<const std::array<double, 3>>(&x, 1))[0];
        v[s] = val.real() * val.real();
    });
    Summary sm = summarize(v);
    double sigma = point_variance(lat->spec());
    CHECK(std::abs(sm.mean - sigma) <= 3.0 * sm.stderr_);

    // mean-zero law
    std::vector<double> m(S);
    parallel_for(S, 2, [&](std::size_t s) {
        SpectralField u = sample(law, lat, key, std::uint32_t(s));
        m[s] = evaluate(u, std::span<const std::array<double, 3>>(&x, 1))[0].real();
    });
    Summary mm = summarize(m);
    CHECK(std::abs(mm.mean) <= 3.0 * mm.stderr_);
}

TEST_CASE("white noise total coefficient mass counts modes") {
    // d=2, N=1: five modes of unit variance
    LatticePtr lat = make_lattice(2, 1);
    GaussLaw law = GaussLaw::white_noise();
    RngKey key = derive_key(23, 0);
    const std::size_t S = 20000;
    std::vector<double> v(S);
    parallel_for(S, 2, [&](std::size_t s) {
        v[s] = sample(law, lat, key, std::uint32_t(s)).l2_norm_sq();
    });
    Summary sm = summarize(v);
    CHECK(std::abs(sm.mean - 5.0) <= kZ99 * sm.stderr_);
}

TEST_CASE("grid synthesis of elementary fields") {
    LatticePtr lat = make_lattice(1, 1);
    SUBCASE("zero mode only gives a constant") {
        SpectralField u = SpectralField::zero(lat, false);
        u.set_coeff(Mode{0, 0, 0}, cplx{2.5, 0.0});
        GridArray g = to_grid(u);
        for (const auto& v : g.values()) {
            CHECK(v.real() == doctest::Approx(2.5).epsilon(1e-14));
            CHECK(std::abs(v.imag()) < 1e-14);
        }
        CHECK(grid::integrate_real(g) == doctest::Approx(2.5).epsilon(1e-14));
    }
    SUBCASE("conjugate pair gives cos(x)") {
        SpectralField u = SpectralField::zero(lat, false);
        u.set_coeff(Mode{1, 0, 0}, cplx{0.5, 0.0});
        u.set_coeff(Mode{-1, 0, 0}, cplx{0.5, 0.0});
        GridArray g = to_grid(u);
        const int G = lat->spec().G;
        for (int j = 0; j < G; ++j) {
            double x = 2.0 * M_PI * j / G;
            CHECK(g[std::size_t(j)].real() == doctest::Approx(std::cos(x)).epsilon(1e-12));
        }
        CHECK(std::abs(grid::integrate_real(g)) < 1e-14);
        // cos^2 averages to 1/2
        GridArray sq(g);
        for (auto& v : sq.values()) v = v * v;
        CHECK(grid::integrate_real(sq) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("transform round trip reproduces coefficients") {
    LatticePtr lat = make_lattice(2, 5);
    SpectralField u = sample(GaussLaw::log_correlated(), lat, derive_key(2, 2), 7);
    GridArray g = to_grid(u);
    SpectralField back = from_grid(g, lat, false);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
        worst = std::max(worst, std::abs(u.coeffs[i] - back.coeffs[i]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("Parseval on the grid") {
    LatticePtr lat = make_lattice(2, 6);
    SpectralField u = sample(GaussLaw::log_correlated(), lat, derive_key(4, 4), 1);
    GridArray g = to_grid(u);
    KahanSum acc;
    for (const auto& v : g.values()) acc.add(std::norm(v));
    double grid_mass = acc.value() / double(g.size());
    CHECK(grid_mass == doctest::Approx(u.l2_norm_sq()).epsilon(1e-10));
}

TEST_CASE("quadrature is exact for quartic products (convolution oracle)") {
    LatticePtr lat = make_lattice(1, 3);
    GaussLaw law = GaussLaw::log_correlated();
    for (std::uint32_t s = 0; s < 5; ++s) {
        SpectralField u1 = sample(law, lat, derive_key(31, 0), s);
        SpectralField u2 = sample(law, lat, derive_key(31, 1), s);
        SpectralField u3 = sample(law, lat, derive_key(31, 2), s);
        SpectralField u4 = sample(law, lat, derive_key(31, 3), s);
        GridArray g1 = to_grid(u1), g2 = to_grid(u2), g3 = to_grid(u3), g4 = to_grid(u4);
        GridArray prod(g1);
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = g1[i] * g2[i] * g3[i] * g4[i];
        double viaGrid = grid::integrate_real(prod);
        double oracle = quartic_convolution_oracle(u1, u2, u3, u4);
        CHECK(viaGrid == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("two-point covariance against the truncated Green's function") {
    LatticePtr lat = make_lattice(2, 8);
    GaussLaw law = GaussLaw::log_correlated();
    RngKey key = derive_key(29, 0);
    const std::size_t S = 20000;
    std::array<std::array<double, 3>, 2> pts{{{0.3, 1.5, 0.0}, {2.1, 0.2, 0.0}}};
    std::vector<double> v(S);
    parallel_for(S, 2, [&](std::size_t s) {
        SpectralField u = sample(law, lat, key, std::uint32_t(s));
        auto vals = evaluate(u, pts);
        v[s] = vals[0].real() * vals[1].real();
    });
    Summary sm = summarize(v);
    std::vector<double> diff{pts[0][0] - pts[1][0], pts[0][1] - pts[1][1]};
    double expect = green_truncated(lat->spec(), diff);
    CHECK(std::abs(sm.mean - expect) <= kZ99 * sm.stderr_);
}

TEST_CASE("ensemble container round trip") {
    LatticePtr lat = make_lattice(2, 3);
    GaussLaw law = GaussLaw::log_correlated(true);
    std::vector<SpectralField> fields;
    for (std::uint32_t s = 0; s < 4; ++s) fields.push_back(sample(law, lat, derive_key(7, 7), s));

    EnsembleHeader h;
    h.d = 2;
    h.N = 3;
    h.G = lat->spec().G;
    h.complex_valued = true;
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    write_ensemble(ss, h, fields);

    EnsembleHeader h2;
    auto copy = read_ensemble(ss, h2);
    CHECK(h2.d == 2);
    CHECK(h2.N == 3);
    CHECK(h2.complex_valued);
    REQUIRE(copy.size() == fields.size());
    for (std::size_t f = 0; f < copy.size(); ++f)
        for (std::size_t i = 0; i < fields[f].coeffs.size(); ++i)
            CHECK(copy[f].coeffs[i] == fields[f].coeffs[i]);

    std::stringstream bad("nope", std::ios::in | std::ios::binary);
    EnsembleHeader hb;
    CHECK_THROWS_AS(read_ensemble(bad, hb), std::runtime_error);
}
