#include <doctest.h>

#include <cmath>

#include "lcgf/field.hpp"
#include "lcgf/lattice.hpp"
#include "lcgf/stats.hpp"

using namespace lcgf;

TEST_CASE("bracket values") {
    CHECK(bracket(Mode{0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bracket(Mode{1, 0, 0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(bracket(Mode{3, 4, 0}) == doctest::Approx(std::sqrt(26.0)).epsilon(1e-15));
    CHECK(bracket(Mode{0, 0, 0}) >= 1.0);
}

TEST_CASE("lattice spec validation and defaults") {
    CHECK(LatticeSpec::default_grid(1) == 8);
    CHECK(LatticeSpec::default_grid(31) == 128);
    CHECK(LatticeSpec::default_grid(32) == 256);  // 4*32+1 = 129
    CHECK_THROWS_AS(LatticeSpec::make(4, 8), std::invalid_argument);
    CHECK_THROWS_AS(LatticeSpec::make(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeSpec::make(2, 8, 32), std::invalid_argument);  // G < 4N+1
    CHECK_NOTHROW(LatticeSpec::make(2, 8, 33));
}

TEST_CASE("ball enumeration is the Euclidean ball") {
    Lattice lat(LatticeSpec::make(2, 2));
    // d=2, N=2: 1 + 4 + 4 + 4 = 13 points (radii 0, 1, sqrt2, 2)
    CHECK(lat.size() == 13);
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const Mode& n = lat.point(i);
        CHECK(n[0] * n[0] + n[1] * n[1] <= 4);
        CHECK(n[2] == 0);
    }
    CHECK(lat.index_of_negation(lat.index_of(Mode{1, -1, 0})) == lat.index_of(Mode{-1, 1, 0}));
    CHECK_THROWS_AS(lat.index_of(Mode{3, 0, 0}), std::out_of_range);
}

TEST_CASE("point variance exact small sums") {
    // d=1, N=1: 1 + 2/sqrt(2) = 1 + sqrt(2)
    CHECK(point_variance(LatticeSpec::make(1, 1)) ==
          doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
    // d=2, N=1: 1 + 4 * 1/2 = 3
    CHECK(point_variance(LatticeSpec::make(2, 1)) == doctest::Approx(3.0).epsilon(1e-14));
    // d=3, N=1: 1 + 6 * 2^{-3/2}
    CHECK(point_variance(LatticeSpec::make(3, 1)) ==
          doctest::Approx(1.0 + 6.0 * std::pow(2.0, -1.5)).epsilon(1e-14));
}

TEST_CASE("sigma_N strictly increasing in N") {
    for (int d = 1; d <= 3; ++d) {
        double prev = 0.0;
        for (int N = 1; N <= 24; ++N) {
            double cur = point_variance(LatticeSpec::make(d, N));
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("sigma_N grows like log N") {
    // slow-growth windows; d=3 capped at N=256 to keep the suite quick
    const double lo[4] = {0, 1.8, 5.6, 11.0};
    const double hi[4] = {0, 3.2, 8.4, 17.5};
    for (int d = 1; d <= 3; ++d) {
        for (int N : {16, 64, 256, 512}) {
            if (d == 3 && N > 256) continue;
            double r = point_variance(LatticeSpec::make(d, N)) / std::log(double(N));
            CHECK(r >= lo[d]);
            CHECK(r <= hi[d]);
        }
    }
}

TEST_CASE("green_truncated at the origin equals sigma_N") {
    for (int d = 1; d <= 3; ++d) {
        LatticeSpec spec = LatticeSpec::make(d, d == 3 ? 12 : 40);
        std::vector<double> x(std::size_t(d), 0.0);
        double g = green_truncated(spec, x);
        double s = point_variance(spec);
        CHECK(g == doctest::Approx(s).epsilon(1e-13));
    }
}

TEST_CASE("green_truncated d=1 exact value") {
    LatticeSpec spec = LatticeSpec::make(1, 1);
    std::vector<double> x{M_PI};
    CHECK(green_truncated(spec, x) == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("green_truncated short-distance log asymptotics, d=2") {
    // Values stabilize in N and fit -c log|x| + const with c > 0.
    std::vector<double> lx, g128, g192;
    for (double r = 2.0 * M_PI / 64.0; r <= 2.0 * M_PI / 8.0 * 1.0001; r *= 1.3459) {
        std::vector<double> x{r, 0.0};
        lx.push_back(std::log(r));
        g128.push_back(green_truncated(LatticeSpec::make(2, 128), x));
        g192.push_back(green_truncated(LatticeSpec::make(2, 192), x));
    }
    for (std::size_t i = 0; i < lx.size(); ++i) CHECK(std::abs(g192[i] - g128[i]) < 0.06);
    LinearFit f = linear_fit(lx, g128);
    CHECK(f.slope < 0.0);
    // the log model explains nearly all variation over the window
    double ssr = 0.0, sst = 0.0, mean = 0.0;
    for (double y : g128) mean += y;
    mean /= double(g128.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double r1 = g128[i] - f.intercept - f.slope * lx[i];
        double r2 = g128[i] - mean;
        ssr += r1 * r1;
        sst += r2 * r2;
    }
    CHECK(1.0 - ssr / sst >= 0.99);
}

TEST_CASE("projection: idempotence, nesting, support") {
    LatticePtr lat = make_lattice(1, 4);
    GaussLaw law = GaussLaw::log_correlated();
    SpectralField u = sample(law, lat, derive_key(3, 1), 0);

    SpectralField p3 = project(u, 3);
    SpectralField p33 = project(p3, 3);
    for (std::size_t i = 0; i < u.coeffs.size(); ++i) CHECK(p3.coeffs[i] == p33.coeffs[i]);

    SpectralField a = project(project(u, 3), 2);
    SpectralField b = project(u, 2);
    for (std::size_t i = 0; i < u.coeffs.size(); ++i) CHECK(a.coeffs[i] == b.coeffs[i]);

    // single mode just above the projection cutoff vanishes
    SpectralField one = SpectralField::zero(lat, false);
    one.set_coeff(Mode{4, 0, 0}, cplx{0.5, 0.0});
    one.set_coeff(Mode{-4, 0, 0}, cplx{0.5, 0.0});
    SpectralField z = project(one, 3);
    CHECK(z.l2_norm_sq() == 0.0);

    // contraction in the coefficient norm
    CHECK(project(u, 2).l2_norm_sq() <= u.l2_norm_sq());
    CHECK_THROWS_AS(project(u, 5), std::invalid_argument);
}
