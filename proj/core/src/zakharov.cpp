#include "lcgf/zakharov.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lcgf/stats.hpp"

namespace lcgf {

double wave_marginal_log(const SpectralField& u, const WickContext& ctx) {
    if (!u.complex_valued) throw std::invalid_argument("wave_marginal_log: complex fields only");
    GridArray g = to_grid(u);
    std::vector<double> w = complex_wick_square(g, ctx);
    KahanSum acc;
    for (double v : w) acc.add(v * v);
    return 0.25 * acc.value() / double(w.size());
}

namespace {

// E[exp(-a X)] for X ~ N(0,1), trapezoid centered on the shifted maximum.
// Dumb on purpose: this backs the quadrature oracle, not the fast path.
double gaussian_exp_moment(double a, int points) {
    const double lo = std::min(0.0, -a) - 10.0;
    const double hi = std::max(0.0, -a) + 10.0;
    const double h = (hi - lo) / double(points);
    const double inv_sqrt2pi = 0.3989422804014326779;
    KahanSum acc;
    for (int i = 0; i <= points; ++i) {
        double x = lo + h * double(i);
        double w = (i == 0 || i == points) ? 0.5 : 1.0;
        acc.add(w * std::exp(-a * x - 0.5 * x * x));
    }
    return acc.value() * h * inv_sqrt2pi;
}

}  // namespace

double wave_marginal_log_quadrature(const SpectralField& u, const WickContext& ctx, int quad_points) {
    if (!u.complex_valued) throw std::invalid_argument("wave_marginal_log_quadrature: complex fields only");
    // Fourier coefficients of w = :|u|^2: live on |n| <= 2N; the field grid
    // (G >= 4N+1) represents them alias-free.
    const LatticeSpec& s = u.spec();
    GridArray g = to_grid(u);
    std::vector<double> wv = complex_wick_square(g, ctx);
    GridArray wg(s.d, s.G);
    for (std::size_t i = 0; i < wg.size(); ++i) wg[i] = cplx{wv[i], 0.0};
    grid::analyze(wg);
    auto w_coeff = [&](const Mode& n) {
        std::int64_t idx = 0;
        for (int c = 0; c < s.d; ++c) {
            int k = n[c] % s.G;
            if (k < 0) k += s.G;
            idx = idx * s.G + k;
        }
        return wg[std::size_t(idx)];
    };

    // Independent wave modes: the zero mode pairs with a real standard
    // normal, each conjugate pair {n,-n} with one standard complex normal
    // whose real and imaginary parts carry variance 1/2.
    const int W = 2 * s.N;
    const std::int64_t r2 = std::int64_t(W) * W;
    const int lo1 = s.d >= 2 ? -W : 0, hi1 = s.d >= 2 ? W : 0;
    const int lo2 = s.d >= 3 ? -W : 0, hi2 = s.d >= 3 ? W : 0;
    KahanSum log_total;
    for (int a = -W; a <= W; ++a)
        for (int b = lo1; b <= hi1; ++b)
            for (int c = lo2; c <= hi2; ++c) {
                Mode n{a, b, c};
                std::int64_t sq = std::int64_t(a) * a + std::int64_t(b) * b + std::int64_t(c) * c;
                if (sq > r2 || !Lattice::is_representative(n)) continue;
                cplx wc = w_coeff(n);
                if (n == Mode{0, 0, 0}) {
                    log_total.add(std::log(gaussian_exp_moment(wc.real() * M_SQRT1_2, quad_points)));
                } else {
                    // exp(-sqrt2 (Re w Re g + Im w Im g)), Re g = x/sqrt2, x std normal.
                    log_total.add(std::log(gaussian_exp_moment(wc.real(), quad_points)));
                    log_total.add(std::log(gaussian_exp_moment(wc.imag(), quad_points)));
                }
            }
    return log_total.value();
}

double change_of_variables_truncation(int N) {
    double S = ball_weight_sum(2, N, -2.0);
    double T = ball_weight_sum(2, N, -4.0);
    return 0.4 * S * std::sqrt(T);
}

double second_moment_exact(int N) {
    double S = ball_weight_sum(2, N, -2.0);
    double T = ball_weight_sum(2, N, -4.0);
    return S * S - T;
}

ZakSample zak_sample_stats(const SpectralField& u, const WickContext& ctx) {
    ZakSample out;
    GridArray g = to_grid(u);
    const std::size_t n = g.size();
    KahanSum s_w, s_w2, s_q;
    const double sigma = ctx.sigma;
    for (std::size_t i = 0; i < n; ++i) {
        double m = std::norm(g[i]);
        double w = m - sigma;
        s_w.add(w);
        s_w2.add(w * w);
        s_q.add(m * m - 4.0 * sigma * m + 2.0 * sigma * sigma);
    }
    const double inv = 1.0 / double(n);
    out.mass = s_w.value() * inv;
    double w2 = s_w2.value() * inv;
    out.marginal_log = 0.25 * w2;
    out.offdiag_sq = w2 - out.mass * out.mass;
    out.quartic = 0.25 * s_q.value() * inv;
    return out;
}

std::vector<ScanRow> zakharov_scan(const ZakScanConfig& cfg) {
    std::vector<ScanRow> rows;
    const GaussLaw law = zakharov_law();
    for (int N : cfg.N_values) {
        LatticePtr lat = make_lattice(2, N);
        const WickContext ctx = WickContext::for_law(law, *lat);
        const double L = cfg.L_factor * 0.25 * second_moment_exact(N);
        RngKey key = derive_key(cfg.seed, 0x7A616BULL ^ (std::uint64_t(N) << 24));

        const std::size_t S = std::size_t(cfg.samples);
        std::vector<double> cut(S);
        std::vector<std::vector<double>> over(cfg.thresholds.size(), std::vector<double>(S));
        const double L4 = change_of_variables_truncation(N);
        std::vector<ExpSample> part(S), cov(S);
        parallel_for(S, cfg.workers, [&](std::size_t s) {
            SpectralField u = sample(law, lat, key, std::uint32_t(s));
            ZakSample z = zak_sample_stats(u, ctx);
            bool active = std::abs(z.mass) <= cfg.K;
            cut[s] = active ? 1.0 : 0.0;
            double q = std::sqrt(std::max(0.0, z.offdiag_sq));
            for (std::size_t t = 0; t < cfg.thresholds.size(); ++t)
                over[t][s] = q > cfg.thresholds[t] ? 1.0 : 0.0;
            part[s] = ExpSample{active, std::min(z.marginal_log, L)};
            cov[s] = ExpSample{active, std::min(z.quartic, L4)};
        });

        auto push = [&](const std::string& tag, const Summary& sm) {
            ScanRow r;
            r.M = 0;
            r.N = N;
            r.K = cfg.K;
            r.L = L;
            r.samples = sm.n;
            r.mean = sm.mean;
            r.stderr_ = sm.stderr_;
            r.ci_low = sm.ci_low;
            r.ci_high = sm.ci_high;
            r.tag = tag;
            rows.push_back(std::move(r));
        };
        for (std::size_t t = 0; t < cfg.thresholds.size(); ++t) {
            char tag[64];
            std::snprintf(tag, sizeof(tag), "threshold_prob_%g", cfg.thresholds[t]);
            push(tag, summarize(over[t]));
        }
        push("cutoff_prob", summarize(cut));
        push("zak_partition", summarize_exp(part));
        push("zak_cov_partition", summarize_exp(cov));
    }
    return rows;
}

EstimateReport change_of_variables_check(int N, double K, double L, std::int64_t samples,
                                         std::uint64_t seed, int workers) {
    EstimateConfig cfg;
    cfg.law = zakharov_law();
    cfg.spec = LatticeSpec::make(2, N);
    cfg.potential = PotentialSpec{PotentialKind::WickPower, 1.0, 4, 0.0, 0.0};
    cfg.truncation = L;
    cfg.cutoff = CutoffSpec{CutoffMode::Absolute, K};
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.workers = workers;
    EstimateReport r = estimate_exp_potential(cfg);
    r.quantity = "zak_change_of_variables";
    return r;
}

}  // namespace lcgf
