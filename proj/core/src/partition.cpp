#include "lcgf/partition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lcgf/wick.hpp"
#include "lcgf/zakharov.hpp"

namespace lcgf {

EstimateReport EstimateReport::from_summary(const Summary& s) {
    EstimateReport r;
    r.samples = s.n;
    r.mean = s.mean;
    r.stderr_ = s.stderr_;
    r.ci_low = s.ci_low;
    r.ci_high = s.ci_high;
    return r;
}

std::string PotentialSpec::name() const {
    switch (kind) {
        case PotentialKind::WickPower: return "wick_power";
        case PotentialKind::CubicTamed: return "cubic_tamed";
        case PotentialKind::SmoothTamed: return "smooth_tamed";
        case PotentialKind::ZakharovMarginal: return "zakharov";
    }
    return "unknown";
}

EstimateReport estimate_exp_potential(const EstimateConfig& cfg) {
    if (cfg.samples < 100) throw std::invalid_argument("estimate_exp_potential: need >= 100 samples");
    cfg.spec.validate();
    cfg.law.validate(cfg.spec.d);

    const bool focusing_power = cfg.potential.kind == PotentialKind::WickPower &&
                                (cfg.potential.coupling > 0.0 || cfg.potential.k % 2 == 1);
    if (focusing_power && !cfg.truncation)
        throw std::invalid_argument("estimate_exp_potential: focusing runs require a truncation L");

    LatticePtr lat = make_lattice(cfg.spec);
    const WickContext ctx = WickContext::for_law(cfg.law, *lat);
    const double L = cfg.truncation.value_or(std::numeric_limits<double>::infinity());
    RngKey key = derive_key(cfg.seed, 0x657870ULL ^ (std::uint64_t(cfg.spec.N) << 20));

    const std::size_t S = std::size_t(cfg.samples);
    std::vector<ExpSample> vals(S);
    std::vector<double> clipped(S, 0.0);
    parallel_for(S, cfg.workers, [&](std::size_t s) {
        SpectralField u = sample(cfg.law, lat, key, std::uint32_t(s));
        double p = 0.0;
        switch (cfg.potential.kind) {
            case PotentialKind::WickPower:
                p = wick_potential(u, cfg.potential.coupling, cfg.potential.k, ctx);
                break;
            case PotentialKind::CubicTamed:
                p = tamed_cubic_potential(u, cfg.potential.coupling, cfg.potential.A, ctx);
                break;
            case PotentialKind::SmoothTamed:
                p = smooth_quartic_potential(u, cfg.potential.coupling, cfg.potential.A,
                                             cfg.potential.gamma);
                break;
            case PotentialKind::ZakharovMarginal:
                p = wave_marginal_log(u, ctx);
                break;
        }
        bool active = true;
        if (cfg.cutoff.mode != CutoffMode::None) {
            double mass = wick_mass(u, ctx);
            active = cfg.cutoff.mode == CutoffMode::Signed ? mass <= cfg.cutoff.K
                                                           : std::abs(mass) <= cfg.cutoff.K;
        }
        if (active && p >= L) clipped[s] = 1.0;
        vals[s] = ExpSample{active, std::min(p, L)};
    });

    EstimateReport r = EstimateReport::from_summary(summarize_exp(vals));
    std::int64_t active_count = 0;
    for (const auto& v : vals) active_count += v.active ? 1 : 0;
    double clip_count = pairwise_sum(clipped);
    r.tail_flag = active_count > 0 ? clip_count / double(active_count) : 0.0;
    r.quantity = "exp_potential";
    r.d = cfg.spec.d;
    r.N = cfg.spec.N;
    r.law = cfg.law.name();
    r.potential = cfg.potential.name();
    r.seed = cfg.seed;
    r.params["coupling"] = cfg.potential.coupling;
    r.params["k"] = cfg.potential.k;
    if (cfg.potential.kind == PotentialKind::CubicTamed || cfg.potential.kind == PotentialKind::SmoothTamed)
        r.params["A"] = cfg.potential.A;
    if (cfg.potential.kind == PotentialKind::SmoothTamed) r.params["gamma"] = cfg.potential.gamma;
    if (cfg.law.kind == LawKind::SmoothAlpha) r.params["alpha"] = cfg.law.alpha;
    if (cfg.truncation) r.params["L"] = *cfg.truncation;
    if (cfg.cutoff.mode != CutoffMode::None) r.params["K"] = cfg.cutoff.K;
    return r;
}

std::vector<CauchyRow> potential_cauchy_scan(const GaussLaw& law, int d,
                                             const std::vector<int>& N_values, int k, double coupling,
                                             std::int64_t samples, std::uint64_t seed, int workers) {
    if (N_values.size() < 2) throw std::invalid_argument("potential_cauchy_scan: need >= 2 cutoffs");
    for (std::size_t i = 1; i < N_values.size(); ++i)
        if (N_values[i] <= N_values[i - 1])
            throw std::invalid_argument("potential_cauchy_scan: N list must increase");

    const int N_max = N_values.back();
    LatticePtr lat = make_lattice(d, N_max);
    RngKey key = derive_key(seed, 0x636175ULL);

    // One potential value per (sample, cutoff), sharing coefficients: the
    // mode-keyed substreams make project(u, N) and a fresh N-sample coincide.
    const std::size_t S = std::size_t(samples);
    std::vector<std::vector<double>> pot(N_values.size(), std::vector<double>(S));
    std::vector<LatticePtr> lats;
    std::vector<WickContext> ctxs;
    for (int N : N_values) {
        lats.push_back(make_lattice(LatticeSpec::make(d, N)));
        ctxs.push_back(WickContext::for_law(law, *lats.back()));
    }
    parallel_for(S, workers, [&](std::size_t s) {
        SpectralField u = sample(law, lat, key, std::uint32_t(s));
        for (std::size_t j = 0; j < N_values.size(); ++j) {
            SpectralField uN = project(u, N_values[j]);
            // Re-home on the smaller lattice so grids stay as small as allowed.
            SpectralField v = SpectralField::zero(lats[j], u.complex_valued);
            for (std::size_t i = 0; i < v.coeffs.size(); ++i)
                v.coeffs[i] = uN.coeffs[u.lattice->index_of(lats[j]->point(i))];
            if (k == 2) {
                pot[j][s] = coupling / 2.0 * wick_mass(v, ctxs[j]);
            } else {
                pot[j][s] = wick_potential(v, coupling, k, ctxs[j]);
            }
        }
    });

    std::vector<CauchyRow> rows;
    for (std::size_t j = 1; j < N_values.size(); ++j) {
        std::vector<double> sq(S);
        for (std::size_t s = 0; s < S; ++s) {
            double diff = pot[j][s] - pot[j - 1][s];
            sq[s] = diff * diff;
        }
        Summary sm = summarize(sq);
        CauchyRow r;
        r.N_lo = N_values[j - 1];
        r.N_hi = N_values[j];
        r.l2_diff = std::sqrt(std::max(0.0, sm.mean));
        r.stderr_ = sm.mean > 0.0 ? 0.5 * sm.stderr_ / std::sqrt(sm.mean) : 0.0;
        rows.push_back(r);
    }
    return rows;
}

ChaosMomentReport chaos_moment_check(std::span<const double> x, int order) {
    if (x.size() < 100) throw std::invalid_argument("chaos_moment_check: need >= 100 samples");
    const std::size_t n = x.size();
    std::vector<double> m2v(n), m4v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i] * x[i];
        m2v[i] = s;
        m4v[i] = s * s;
    }
    double m2 = pairwise_sum(m2v) / double(n);
    double m4 = pairwise_sum(m4v) / double(n);

    ChaosMomentReport r;
    r.order = order;
    r.bound = std::pow(3.0, 0.5 * order);  // (p-1)^{k/2} at p = 4
    r.ratio = std::pow(m4, 0.25) / std::sqrt(m2);

    // Delta method on (m2, m4); sample covariances from 4th/8th moments.
    std::vector<double> c22(n), c44(n), c24(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = m2v[i] - m2, d4 = m4v[i] - m4;
        c22[i] = d2 * d2;
        c44[i] = d4 * d4;
        c24[i] = d2 * d4;
    }
    double v22 = pairwise_sum(c22) / double(n);
    double v44 = pairwise_sum(c44) / double(n);
    double v24 = pairwise_sum(c24) / double(n);
    double g2 = -0.5 * r.ratio / m2;
    double g4 = 0.25 * r.ratio / m4;
    double var = (g2 * g2 * v22 + g4 * g4 * v44 + 2.0 * g2 * g4 * v24) / double(n);
    r.ratio_se = std::sqrt(std::max(0.0, var));
    r.violated = r.ratio > r.bound + kZ99 * r.ratio_se;
    return r;
}

}  // namespace lcgf
