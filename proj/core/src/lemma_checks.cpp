#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lcgf/cli.hpp"
#include "lcgf/field.hpp"
#include "lcgf/partition.hpp"
#include "lcgf/stats.hpp"
#include "lcgf/variational.hpp"
#include "lcgf/wick.hpp"
#include "lcgf/zakharov.hpp"

namespace lcgf::cli {

namespace {

struct Table {
    std::vector<LemmaCheck> rows;
    void add(std::string name, double observed, std::string criterion, bool pass) {
        rows.push_back(LemmaCheck{std::move(name), observed, std::move(criterion), pass});
    }
};

// Growth window of sigma_N / log N over N in [16, 512]; the ratio approaches
// the surface measure of the unit sphere, entering from above/below by the
// bounded lattice remainder.
void sigma_ratio_interval(int d, double& lo, double& hi) {
    switch (d) {
        case 1: lo = 1.8, hi = 3.2; return;
        case 2: lo = 5.6, hi = 8.4; return;
        default: lo = 11.0, hi = 17.5; return;
    }
}

std::string between(double lo, double hi) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "in [%g, %g]", lo, hi);
    return buf;
}

}  // namespace

std::vector<LemmaCheck> run_lemma_checks(const LemmaCheckConfig& cfg) {
    Table t;
    const int d = cfg.d;
    const std::uint64_t seed = cfg.seed;
    const std::size_t S = std::size_t(std::max<std::int64_t>(cfg.samples, 1000));
    const int workers = std::max(cfg.workers, 1);

    // --- lattice sums ---------------------------------------------------
    {
        bool inc = true;
        double prev = point_variance(LatticeSpec::make(d, 1));
        double last_gap = 0.0;
        for (int N = 2; N <= 16; ++N) {
            double cur = point_variance(LatticeSpec::make(d, N));
            last_gap = cur - prev;
            inc = inc && last_gap > 0.0;
            prev = cur;
        }
        t.add("sigma_monotone", last_gap, "increments > 0 for N <= 16", inc);
    }
    {
        double lo, hi;
        sigma_ratio_interval(d, lo, hi);
        bool ok = true;
        double worst = 0.0;
        for (int N : {16, 64, d < 3 ? 256 : 128}) {
            double r = point_variance(LatticeSpec::make(d, N)) / std::log(double(N));
            worst = r;
            ok = ok && r >= lo && r <= hi;
        }
        t.add("sigma_log_ratio", worst, between(lo, hi), ok);
    }
    {
        LatticeSpec spec = LatticeSpec::make(d, 24);
        std::vector<double> origin(std::size_t(d), 0.0);
        double g0 = green_truncated(spec, origin);
        double sig = point_variance(spec);
        double rel = std::abs(g0 - sig) / sig;
        t.add("green_at_zero", rel, "relative error <= 1e-12", rel <= 1e-12);
    }
    {
        // Short-distance log fit of the truncated Green's function.
        LatticeSpec spec = LatticeSpec::make(d, 128);
        std::vector<double> xs, ys;
        for (double r = 2.0 * M_PI / 64.0; r <= 2.0 * M_PI / 8.0 * 1.0001; r *= std::pow(8.0, 1.0 / 7.0)) {
            std::vector<double> x(std::size_t(d), 0.0);
            x[0] = r;
            xs.push_back(std::log(r));
            ys.push_back(green_truncated(spec, x));
        }
        LinearFit f = linear_fit(xs, ys);
        t.add("green_log_slope", f.slope, "negative slope vs log|x|", f.slope < 0.0);
    }

    // --- sampling -------------------------------------------------------
    const GaussLaw law = GaussLaw::log_correlated();
    LatticePtr lat32 = make_lattice(d, d == 3 ? 8 : 32);
    const RngKey key = derive_key(seed, 0x6C656DULL);
    {
        SpectralField u = sample(law, lat32, key, 0);
        GridArray g = to_grid(u);
        KahanSum acc;
        for (const auto& v : g.values()) acc.add(std::norm(v));
        double grid_mass = acc.value() / double(g.size());
        double rel = std::abs(grid_mass - u.l2_norm_sq()) / u.l2_norm_sq();
        t.add("parseval_roundtrip", rel, "relative error <= 1e-10", rel <= 1e-10);

        double imag_residue = 0.0;
        for (const auto& v : g.values()) imag_residue = std::max(imag_residue, std::abs(v.imag()));
        t.add("real_grid_residue", imag_residue, "max |Im u(x)| <= 1e-12", imag_residue <= 1e-12);

        double sym = 0.0;
        for (std::size_t i = 0; i < u.coeffs.size(); ++i)
            sym = std::max(sym, std::abs(u.coeffs[i] - std::conj(u.coeffs[u.lattice->index_of_negation(i)])));
        t.add("reality_exact", sym, "max |c(-n) - conj c(n)| == 0", sym == 0.0);
    }
    {
        // E[u(x)^2] = sigma_N at a fixed off-grid point, within 3 SE.
        std::array<double, 3> x{0.73, 1.31, 2.19};
        std::vector<double> vals(S);
        parallel_for(S, workers, [&](std::size_t s) {
            SpectralField u = sample(law, lat32, key, std::uint32_t(s));
            cplx v = evaluate(u, std::span<const std::array<double, 3>>(&x, 1))[0];
            vals[s] = v.real() * v.real();
        });
        Summary sm = summarize(vals);
        double sig = point_variance(lat32->spec());
        double dev = std::abs(sm.mean - sig) / sm.stderr_;
        t.add("point_variance_mc", dev, "|mean - sigma_N| <= 3 SE", dev <= 3.0);
    }
    {
        // Coefficient covariance spot check on 20 mode pairs, 4 SE.
        LatticePtr lat4 = make_lattice(d, 4);
        std::size_t nm = lat4->size();
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < 20; ++i) pairs.push_back({(7 * i + 1) % nm, (11 * i + 3) % nm});
        std::vector<std::vector<double>> re(pairs.size(), std::vector<double>(S));
        parallel_for(S, workers, [&](std::size_t s) {
            SpectralField u = sample(law, lat4, key, std::uint32_t(s));
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                cplx v = u.coeffs[pairs[p].first] * std::conj(u.coeffs[pairs[p].second]);
                re[p][s] = v.real();
            }
        });
        bool ok = true;
        double worst = 0.0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            Summary sm = summarize(re[p]);
            double expect = 0.0;
            if (pairs[p].first == pairs[p].second) {
                double w = law.weight(lat4->bracket_at(pairs[p].first), d);
                expect = w * w;
            } else if (lat4->index_of_negation(pairs[p].first) == pairs[p].second) {
                continue;  // conjugate pair carries a deterministic relation, not a covariance
            }
            double dev = sm.stderr_ > 0 ? std::abs(sm.mean - expect) / sm.stderr_ : 0.0;
            worst = std::max(worst, dev);
            ok = ok && dev <= 4.0;
        }
        t.add("coefficient_covariance", worst, "spot pairs within 4 SE", ok);
    }
    {
        // Sampled two-point covariance against the truncated Green's function.
        std::array<double, 3> x{0.4, 2.0, 1.1}, y{1.9, 0.6, 2.5};
        std::vector<double> vals(S);
        parallel_for(S, workers, [&](std::size_t s) {
            SpectralField u = sample(law, lat32, key, std::uint32_t(s));
            std::array<std::array<double, 3>, 2> pts{x, y};
            auto v = evaluate(u, pts);
            vals[s] = v[0].real() * v[1].real();
        });
        Summary sm = summarize(vals);
        std::vector<double> diff(static_cast<std::size_t>(d), 0.0);
        for (int c = 0; c < d; ++c) diff[std::size_t(c)] = x[std::size_t(c)] - y[std::size_t(c)];
        double expect = green_truncated(lat32->spec(), diff);
        double dev = std::abs(sm.mean - expect) / sm.stderr_;
        t.add("two_point_green", dev, "|cov - G_N(x-y)| <= 3 SE", dev <= 3.0);
    }

    // --- Wick calculus ---------------------------------------------------
    {
        const double sigma = 1.7;
        const RngKey hk = derive_key(seed, 0x686572ULL);
        std::size_t n = 200000;
        std::vector<std::vector<double>> prod(10, std::vector<double>(n));
        parallel_for(n, workers, [&](std::size_t i) {
            NormalPair z = normal_pair(hk, i, 0);
            double x = z.z0 * std::sqrt(sigma);
            std::size_t slot = 0;
            for (int a = 1; a <= 4; ++a)
                for (int b = a; b <= 4; ++b) prod[slot++][i] = hermite(a, x, sigma) * hermite(b, x, sigma);
        });
        bool ok = true;
        double worst = 0.0;
        std::size_t slot = 0;
        for (int a = 1; a <= 4; ++a)
            for (int b = a; b <= 4; ++b) {
                Summary sm = summarize(prod[slot++]);
                double expect = 0.0;
                if (a == b) {
                    expect = std::pow(sigma, a);
                    for (int j = 2; j <= a; ++j) expect *= j;
                }
                double dev = std::abs(sm.mean - expect) / sm.stderr_;
                worst = std::max(worst, dev);
                ok = ok && dev <= 4.0;
            }
        t.add("hermite_orthogonality", worst, "E[H_a H_b] = delta k! sigma^k, 4 SE", ok);
    }
    LatticePtr lat8 = make_lattice(d, 8);
    std::vector<double> mass_samples(S);
    {
        const WickContext ctx = WickContext::for_law(law, *lat8);
        parallel_for(S, workers, [&](std::size_t s) {
            SpectralField u = sample(law, lat8, key, std::uint32_t(s));
            mass_samples[s] = wick_mass(u, ctx);
        });
        std::vector<double> sq(mass_samples.size());
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = mass_samples[i] * mass_samples[i];
        Summary sm = summarize(sq);
        double exact = 2.0 * ball_weight_sum(d, 8, -2.0 * d);
        double dev = std::abs(sm.mean - exact) / sm.stderr_;
        t.add("wick_mass_variance", dev, "Var int :u^2: = 2 sum <n>^-2d, 4 SE", dev <= 4.0);

        ChaosMomentReport cm = chaos_moment_check(mass_samples, 2);
        t.add("chaos_ratio_mass", cm.ratio, "L4/L2 <= 3 + 2.576 SE", !cm.violated);
    }
    {
        // Binomial shift split against direct evaluation, and translation
        // invariance under an exact grid shift.
        LatticePtr lat4 = make_lattice(1, 4);
        const GaussLaw law1 = GaussLaw::log_correlated();
        const WickContext ctx{point_variance(law1, *lat4), false};
        bool ok_split = true, ok_shift = true;
        double worst = 0.0;
        for (std::uint32_t s = 0; s < 10; ++s) {
            SpectralField yf = sample(law1, lat4, derive_key(seed, 0x736673ULL), s);
            SpectralField tf = project(sample(law1, lat4, derive_key(seed, 0x736674ULL), s), 2);
            GridArray yg = to_grid(yf), tg = to_grid(tf);
            for (int k : {3, 4}) {
                ShiftExpansion ex = shifted_wick_expansion(yg, tg, k, ctx.sigma);
                double direct = shifted_wick_direct(yg, tg, k, ctx.sigma);
                double err = std::abs(ex.total() - direct) / std::max(1.0, std::abs(direct));
                worst = std::max(worst, err);
                ok_split = ok_split && err <= 1e-10;
            }
            // phase twist by one grid cell = circular shift of grid values
            SpectralField shifted = yf;
            const int G = lat4->spec().G;
            for (std::size_t i = 0; i < shifted.coeffs.size(); ++i) {
                double ph = 2.0 * M_PI * double(lat4->point(i)[0]) / double(G);
                shifted.coeffs[i] *= cplx{std::cos(ph), std::sin(ph)};
            }
            double p0 = wick_potential(yf, 1.0, 4, ctx);
            double p1 = wick_potential(shifted, 1.0, 4, ctx);
            ok_shift = ok_shift && std::abs(p0 - p1) <= 1e-10 * std::max(1.0, std::abs(p0));
        }
        t.add("shift_expansion_identity", worst, "split = direct to 1e-10", ok_split);
        t.add("translation_invariance", 0.0, "potential invariant under shift to 1e-10", ok_shift);
    }

    // --- variational layer ------------------------------------------------
    {
        BumpProfile prof = BumpProfile::standard(d);
        double norm_err = std::abs(prof.l2_check(2500) - 1.0);
        t.add("bump_normalization", norm_err, "|c^2 int psi^2 - 1| <= 1e-8", norm_err <= 1e-8);

        double prev = 2.0;
        bool dec = true;
        double last = 0.0;
        for (int M : {8, 16, 32}) {
            LatticePtr latM = make_lattice(d, M);
            SpectralField f = bump_field(M, prof, latM);
            last = std::abs(f.l2_norm_sq() - 1.0);
            dec = dec && last < prev;
            prev = last;
        }
        t.add("bump_mass_converges", last, "|int f_M^2 - 1| decreasing, M in {8,16,32}", dec);
    }
    {
        OuMoments m = ou_moments(Mode{0, 0, 0}, 1, d);
        double e1 = std::abs(m.var_x - (1.0 - std::exp(-2.0)) / 2.0);
        double e2 = std::abs(m.cov_yx - (1.0 - std::exp(-1.0)));
        t.add("ou_closed_form", std::max(e1, e2), "lambda = 1 values to 1e-12", e1 <= 1e-12 && e2 <= 1e-12);
    }
    {
        VariationalContext ctx(d, 8, 16);
        const RngKey pk = derive_key(seed, 0x706174ULL);
        const double sigma_n = point_variance(ctx.lattice()->spec());
        const int J = 256;
        const std::size_t paths = 400;
        std::vector<double> yv(paths), xv(paths), cam(paths, 0.0), pr2(paths, 0.0);
        parallel_for(paths, workers, [&](std::size_t s) {
            DriftEnsemble e = ctx.simulate_drift_paths(J, pk, std::uint32_t(s));
            std::size_t i0 = ctx.lattice()->index_of(Mode{0, 0, 0});
            yv[s] = e.y.coeffs[i0].real();
            xv[s] = e.y.coeffs[i0].real() - e.z.coeffs[i0].real();
            cam[s] = e.theta.sobolev_norm_sq(0.5 * d) - e.drift_cost;
            double combo = ctx.wick_mass_combo(e.y, e.theta, sigma_n);
            // Residual form: int :(Y-Z)^2: + 2 sqrt(gain) int (Y-Z) f.
            KahanSum resid;
            const auto& latc = *ctx.lattice();
            for (std::size_t i = 0; i < latc.size(); ++i) {
                cplx x = e.y.coeffs[i] - e.z.coeffs[i];
                bool shell = latc.bracket_at(i) * latc.bracket_at(i) <= 1.0 + 64.0;
                double v = shell ? ou_moments_from_bracket(latc.bracket_at(i), 8, d).var_x
                                 : std::pow(latc.bracket_at(i), -double(d));
                resid.add(std::norm(x) - v);
                resid.add(2.0 * std::sqrt(ctx.drift_gain()) * (x * std::conj(ctx.bump().coeffs[i])).real());
            }
            pr2[s] = std::abs(combo - resid.value());
        });
        Summary ys = summarize(yv), xs = summarize(xv);
        OuMoments m0 = ou_moments(Mode{0, 0, 0}, 8, d);
        std::vector<double> ysq(paths), xsq(paths);
        for (std::size_t i = 0; i < paths; ++i) {
            ysq[i] = yv[i] * yv[i];
            xsq[i] = xv[i] * xv[i];
        }
        Summary ys2 = summarize(ysq), xs2 = summarize(xsq);
        double dev_y = std::abs(ys2.mean - m0.var_y) / ys2.stderr_;
        double dev_x = std::abs(xs2.mean - m0.var_x) / (xs2.stderr_ + 0.03 * m0.var_x);
        t.add("ou_terminal_var_y", dev_y, "Var Y(1) matches, 4 SE", dev_y <= 4.0);
        t.add("ou_terminal_var_x", dev_x, "Var X(1) matches, 4 SE + O(1/J)", dev_x <= 4.0);

        double cam_worst = *std::max_element(cam.begin(), cam.end());
        double cam_tol = 0.05 * ctx.expected_drift_cost();
        t.add("cameron_martin", cam_worst, "||Theta||_{H^{d/2}}^2 <= cost + tol, all paths",
              cam_worst <= cam_tol);

        double pr2_worst = *std::max_element(pr2.begin(), pr2.end());
        t.add("mass_combo_identity", pr2_worst, "residual identity to 1e-10", pr2_worst <= 1e-10);
    }
    {
        bool ok = true;
        double last = 0.0;
        for (int M : {8, 32}) {
            VariationalContext ctx(d, M, M);
            last = ctx.drift_gain() / std::log(double(M));
            ok = ok && ctx.drift_gain() > 0.0;
        }
        t.add("drift_gain_positive", last, "gain > 0, gain/log M recorded", ok);
    }

    return t.rows;
}

}  // namespace lcgf::cli
