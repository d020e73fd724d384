#include "lcgf/variational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lcgf/stats.hpp"

namespace lcgf {

namespace {

// Width-scaled standard bump: beta = 1/16 keeps the profile resolvable by
// the coarsest shells (M = 8) while preserving smoothness, the (1/2, 1]
// support and the all-orders vanishing at both endpoints.
double psi_shape(double r) {
    if (r <= 0.5 || r >= 1.0) return 0.0;
    return std::exp(-0.0625 / ((r - 0.5) * (1.0 - r)));
}

double sphere_area(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        case 3: return 4.0 * M_PI;
    }
    throw std::invalid_argument("sphere_area: d must be 1, 2 or 3");
}

// Trapezoid over (1/2, 1); the integrand vanishes to all orders at both
// endpoints, so the rule converges superpolynomially.
double shell_quadrature(int d, int points, double extra_power) {
    double h = 0.5 / double(points);
    KahanSum acc;
    for (int i = 1; i < points; ++i) {
        double r = 0.5 + h * double(i);
        double p = psi_shape(r);
        acc.add(p * p * std::pow(r, d - 1 + extra_power));
    }
    return sphere_area(d) * acc.value() * h;
}

}  // namespace

BumpProfile BumpProfile::standard(int d) {
    double integral = shell_quadrature(d, 4000, 0.0);
    return BumpProfile(d, 1.0 / std::sqrt(integral));
}

double BumpProfile::shape(double r) const { return psi_shape(r); }

double BumpProfile::fourier_amplitude(double r) const { return c_ * psi_shape(r); }

double BumpProfile::l2_check(int quad_points) const {
    return c_ * c_ * shell_quadrature(d_, quad_points, 0.0);
}

SpectralField bump_field(int M, const BumpProfile& profile, LatticePtr lat) {
    if (M < 4) throw std::invalid_argument("bump_field: M >= 4 required");
    if (lat->spec().N < M) throw std::invalid_argument("bump_field: lattice cutoff below M");
    if (profile.dimension() != lat->spec().d)
        throw std::invalid_argument("bump_field: profile dimension mismatch");
    SpectralField f = SpectralField::zero(lat, false);
    const double scale = std::pow(double(M), -0.5 * lat->spec().d);
    const std::int64_t m2 = std::int64_t(M) * M;
    for (std::size_t i = 0; i < lat->size(); ++i) {
        const Mode& n = lat->point(i);
        std::int64_t s = std::int64_t(n[0]) * n[0] + std::int64_t(n[1]) * n[1] + std::int64_t(n[2]) * n[2];
        if (4 * s <= m2 || s > m2) continue;  // keep M/2 < |n| <= M
        f.coeffs[i] = cplx{scale * profile.fourier_amplitude(std::sqrt(double(s)) / double(M)), 0.0};
    }
    return f;
}

OuMoments ou_moments(const Mode& n, int M, int d) {
    std::int64_t s = std::int64_t(n[0]) * n[0] + std::int64_t(n[1]) * n[1] + std::int64_t(n[2]) * n[2];
    if (s > std::int64_t(M) * M) throw std::invalid_argument("ou_moments: |n| > M");
    return ou_moments_from_bracket(bracket(n), M, d);
}

OuMoments ou_moments_from_bracket(double b, int M, int d) {
    const double var_y = std::pow(b, -double(d));
    const double lambda = std::pow(double(M) / b, 0.5 * d);
    OuMoments m;
    m.var_y = var_y;
    m.var_x = var_y * (1.0 - std::exp(-2.0 * lambda)) / (2.0 * lambda);
    m.cov_yx = var_y * (1.0 - std::exp(-lambda)) / lambda;
    return m;
}

VariationalContext::VariationalContext(int d, int M, int N)
    : VariationalContext(make_lattice(d, N), M) {}

VariationalContext::VariationalContext(LatticePtr lat, int M)
    : lat_(std::move(lat)), M_(M), profile_(BumpProfile::standard(lat_->spec().d)) {
    if (lat_->spec().N < M_) throw std::invalid_argument("VariationalContext: N >= M required");
    bump_ = bump_field(M_, profile_, lat_);
    bump_mass_ = bump_.l2_norm_sq();

    const int d = lat_->spec().d;
    const std::int64_t m2 = std::int64_t(M_) * M_;
    lambda_.assign(lat_->size(), 0.0);
    in_shell_.assign(lat_->size(), 0);
    KahanSum numer;
    for (std::size_t i = 0; i < lat_->size(); ++i) {
        const Mode& n = lat_->point(i);
        std::int64_t s = std::int64_t(n[0]) * n[0] + std::int64_t(n[1]) * n[1] + std::int64_t(n[2]) * n[2];
        if (s > m2) continue;
        in_shell_[i] = 1;
        OuMoments m = ou_moments_from_bracket(lat_->bracket_at(i), M_, d);
        lambda_[i] = std::pow(double(M_) / lat_->bracket_at(i), 0.5 * d);
        numer.add(m.var_y - m.var_x);
    }
    gain_numerator_ = numer.value();
    if (!(gain_numerator_ > 0.0))
        throw std::runtime_error("VariationalContext: nonpositive cancellation numerator");
    gain_ = gain_numerator_ / bump_mass_;
}

double VariationalContext::expected_drift_cost() const {
    const int d = lat_->spec().d;
    KahanSum acc;
    for (std::size_t i = 0; i < lat_->size(); ++i) {
        if (!in_shell_[i]) continue;
        double lam = lambda_[i];
        // <n>^d lam^2 int_0^1 E|X(t)|^2 dt = lam/2 - (1 - e^{-2 lam})/4.
        acc.add(0.5 * lam - 0.25 * (1.0 - std::exp(-2.0 * lam)));
        double fc = bump_.coeffs[i].real();
        acc.add(gain_ * std::pow(lat_->bracket_at(i), double(d)) * fc * fc);
    }
    return acc.value();
}

double VariationalContext::residual_mass_second_moment() const {
    const int d = lat_->spec().d;
    KahanSum acc;
    for (std::size_t i = 0; i < lat_->size(); ++i) {
        double b = lat_->bracket_at(i);
        double v = in_shell_[i] ? ou_moments_from_bracket(b, M_, d).var_x : std::pow(b, -double(d));
        acc.add(v * v);
    }
    return 2.0 * acc.value();
}

double VariationalContext::z_point_variance() const {
    const int d = lat_->spec().d;
    KahanSum acc;
    for (std::size_t i = 0; i < lat_->size(); ++i) {
        if (!in_shell_[i]) continue;
        OuMoments m = ou_moments_from_bracket(lat_->bracket_at(i), M_, d);
        acc.add(m.var_y - 2.0 * m.cov_yx + m.var_x);
    }
    return acc.value();
}

DriftEnsemble VariationalContext::simulate_drift_paths(int J, RngKey key, std::uint32_t sample) const {
    if (J < 64) throw std::invalid_argument("simulate_drift_paths: J >= 64 required");
    const int d = lat_->spec().d;
    DriftEnsemble e;
    e.M = M_;
    e.N = lat_->spec().N;
    e.J = J;
    e.y = SpectralField::zero(lat_, false);
    e.z = SpectralField::zero(lat_, false);

    const double dt = 1.0 / double(J);
    const double sqrt_gain = std::sqrt(gain_);
    KahanSum cost;

    for (std::size_t i = 0; i < lat_->size(); ++i) {
        const Mode& n = lat_->point(i);
        if (!Lattice::is_representative(n)) continue;
        const bool zero_mode = (n == Mode{0, 0, 0});
        const double wy = std::pow(lat_->bracket_at(i), -0.5 * d);
        const std::uint64_t mk = Lattice::mode_key(n);

        if (!in_shell_[i]) {
            // Only the terminal value matters above the relaxation cutoff.
            NormalPair g = normal_pair(key, pack_sample_step(sample, 0), mk);
            if (zero_mode) {
                e.y.coeffs[i] = cplx{wy * g.z0, 0.0};
            } else {
                cplx h{g.z0 * M_SQRT1_2, g.z1 * M_SQRT1_2};
                e.y.coeffs[i] = wy * h;
                e.y.coeffs[lat_->index_of_negation(i)] = wy * std::conj(h);
            }
            continue;
        }

        const double lam = lambda_[i];
        const double decay = std::exp(-lam * dt);
        const double pull = 1.0 - decay;
        const double bd = std::pow(lat_->bracket_at(i), double(d));
        const double fc = bump_.coeffs[i].real();
        const double pair_weight = zero_mode ? 1.0 : 2.0;
        const double inc_scale = zero_mode ? std::sqrt(dt) : std::sqrt(0.5 * dt);

        cplx y{0.0, 0.0}, z{0.0, 0.0};
        KahanSum mode_cost;
        for (int j = 0; j < J; ++j) {
            // Left-endpoint drift value, then advance both processes.
            cplx theta_mode = -lam * (y - z) + sqrt_gain * fc;
            mode_cost.add(std::norm(theta_mode));
            NormalPair g = normal_pair(key, pack_sample_step(sample, std::uint32_t(j + 1)), mk);
            cplx db = zero_mode ? cplx{g.z0 * inc_scale, 0.0} : cplx{g.z0 * inc_scale, g.z1 * inc_scale};
            z = decay * z + pull * y;
            y += wy * db;
        }
        cost.add(pair_weight * bd * dt * mode_cost.value());

        e.y.coeffs[i] = y;
        e.z.coeffs[i] = z;
        if (!zero_mode) {
            e.y.coeffs[lat_->index_of_negation(i)] = std::conj(y);
            e.z.coeffs[lat_->index_of_negation(i)] = std::conj(z);
        }
    }
    e.drift_cost = cost.value();
    e.theta = drift_shift(e.z);
    return e;
}

DriftEnsemble VariationalContext::sample_terminals(RngKey key, std::uint32_t sample) const {
    const int d = lat_->spec().d;
    DriftEnsemble e;
    e.M = M_;
    e.N = lat_->spec().N;
    e.J = 0;
    e.y = SpectralField::zero(lat_, false);
    e.z = SpectralField::zero(lat_, false);
    e.drift_cost = std::numeric_limits<double>::quiet_NaN();

    for (std::size_t i = 0; i < lat_->size(); ++i) {
        const Mode& n = lat_->point(i);
        if (!Lattice::is_representative(n)) continue;
        const bool zero_mode = (n == Mode{0, 0, 0});
        const std::uint64_t mk = Lattice::mode_key(n);
        const double wy = std::pow(lat_->bracket_at(i), -0.5 * d);

        NormalPair g0 = normal_pair(key, pack_sample_step(sample, 0), mk);
        if (!in_shell_[i]) {
            if (zero_mode) {
                e.y.coeffs[i] = cplx{wy * g0.z0, 0.0};
            } else {
                cplx h{g0.z0 * M_SQRT1_2, g0.z1 * M_SQRT1_2};
                e.y.coeffs[i] = wy * h;
                e.y.coeffs[lat_->index_of_negation(i)] = wy * std::conj(h);
            }
            continue;
        }

        OuMoments m = ou_moments_from_bracket(lat_->bracket_at(i), M_, d);
        const double a = std::sqrt(m.var_y);
        const double bcoef = m.cov_yx / a;
        const double resid = std::sqrt(std::max(0.0, m.var_x - bcoef * bcoef));

        if (zero_mode) {
            double y = a * g0.z0;
            double x = bcoef * g0.z0 + resid * g0.z1;
            e.y.coeffs[i] = cplx{y, 0.0};
            e.z.coeffs[i] = cplx{y - x, 0.0};
        } else {
            NormalPair g1 = normal_pair(key, pack_sample_step(sample, 1), mk);
            cplx h1{g0.z0 * M_SQRT1_2, g0.z1 * M_SQRT1_2};
            cplx h2{g1.z0 * M_SQRT1_2, g1.z1 * M_SQRT1_2};
            cplx y = a * h1;
            cplx x = bcoef * h1 + resid * h2;
            e.y.coeffs[i] = y;
            e.z.coeffs[i] = y - x;
            e.y.coeffs[lat_->index_of_negation(i)] = std::conj(y);
            e.z.coeffs[lat_->index_of_negation(i)] = std::conj(y - x);
        }
    }
    e.theta = drift_shift(e.z);
    return e;
}

SpectralField VariationalContext::drift_shift(const SpectralField& z) const {
    SpectralField t = SpectralField::zero(lat_, false);
    const double s = std::sqrt(gain_);
    for (std::size_t i = 0; i < lat_->size(); ++i) t.coeffs[i] = -z.coeffs[i] + s * bump_.coeffs[i];
    return t;
}

double VariationalContext::wick_mass_combo(const SpectralField& y, const SpectralField& theta,
                                           double sigma_n) const {
    KahanSum acc;
    for (std::size_t i = 0; i < lat_->size(); ++i) {
        cplx yc = y.coeffs[i], tc = theta.coeffs[i];
        acc.add(std::norm(yc) + 2.0 * (yc * std::conj(tc)).real() + std::norm(tc));
    }
    return acc.value() - sigma_n;
}

double quartic_energy(const SpectralField& u) {
    if (u.complex_valued) throw std::invalid_argument("quartic_energy: real fields only");
    std::vector<double> g = to_real_grid(u);
    KahanSum acc;
    for (double v : g) {
        double v2 = v * v;
        acc.add(v2 * v2);
    }
    return 0.25 * acc.value() / double(g.size());
}

QuarticObjective objective_quartic(const VariationalContext& ctx, const DriftEnsemble& e,
                                   double drift_cost, double coupling, double L, double K,
                                   double sigma_n) {
    std::vector<double> yg = to_real_grid(e.y);
    std::vector<double> tg = to_real_grid(e.theta);
    ShiftExpansion ex = shifted_wick_expansion(yg, tg, 4, sigma_n);

    QuarticObjective out;
    out.shifted_potential = coupling / 4.0 * ex.total();
    out.base_potential = coupling / 4.0 * ex.terms[4];
    out.mass_combo = ctx.wick_mass_combo(e.y, e.theta, sigma_n);
    out.cutoff_active = std::abs(out.mass_combo) <= K;
    out.value = -(out.cutoff_active ? std::min(out.shifted_potential, L) : 0.0) + 0.5 * drift_cost;
    return out;
}

double objective_cubic(const VariationalContext& ctx, const SpectralField& y,
                       const SpectralField& theta, double drift_cost, double coupling, double A,
                       double sigma_n) {
    std::vector<double> yg = to_real_grid(y);
    std::vector<double> tg = to_real_grid(theta);
    ShiftExpansion ex = shifted_wick_expansion(yg, tg, 3, sigma_n);
    double combo = ctx.wick_mass_combo(y, theta, sigma_n);
    double tamed = coupling / 3.0 * ex.total() - A * combo * combo;
    return -tamed + 0.5 * drift_cost;
}

std::vector<ScanRow> divergence_scan(const DivergenceScanConfig& cfg) {
    std::vector<ScanRow> rows;
    // One key for the whole scan: common random numbers across M (mode-keyed
    // draws make nested truncations share realizations).
    RngKey key = derive_key(cfg.seed, 0x64697673ULL);
    for (int M : cfg.M_values) {
        const int N = 2 * M;
        VariationalContext ctx(cfg.d, M, N);
        const double sigma_n = point_variance(ctx.lattice()->spec());
        const double qf = quartic_energy(ctx.bump());
        const double L = cfg.L_fixed ? *cfg.L_fixed
                                     : cfg.L_factor * cfg.coupling * ctx.drift_gain() * ctx.drift_gain() * qf;
        const double expected_cost = ctx.expected_drift_cost();

        const std::size_t S = std::size_t(cfg.samples);
        std::vector<double> shifted(S), base(S), base_mass(S), combo(S), combo_sq(S);
        parallel_for(S, cfg.workers, [&](std::size_t s) {
            DriftEnsemble e = ctx.sample_terminals(key, std::uint32_t(s));
            QuarticObjective q = objective_quartic(ctx, e, expected_cost, cfg.coupling, L,
                                                   std::numeric_limits<double>::infinity(), sigma_n);
            shifted[s] = std::min(q.shifted_potential, L);
            base[s] = std::min(q.base_potential, L);
            base_mass[s] = e.y.l2_norm_sq() - sigma_n;
            combo[s] = q.mass_combo;
            combo_sq[s] = q.mass_combo * q.mass_combo;
        });

        auto push = [&](const char* tag, double K, const Summary& sm) {
            ScanRow r;
            r.M = M;
            r.N = N;
            r.K = K;
            r.L = L;
            r.samples = sm.n;
            r.mean = sm.mean;
            r.stderr_ = sm.stderr_;
            r.ci_low = sm.ci_low;
            r.ci_high = sm.ci_high;
            r.tag = tag;
            rows.push_back(std::move(r));
        };

        for (double K : cfg.K_values) {
            std::vector<double> obj(S), indicator(S);
            std::vector<ExpSample> direct(S);
            for (std::size_t s = 0; s < S; ++s) {
                bool active = std::abs(combo[s]) <= K;
                indicator[s] = active ? 1.0 : 0.0;
                obj[s] = -(active ? shifted[s] : 0.0) + 0.5 * expected_cost;
                // the direct estimator cuts on the base field's Wick mass
                direct[s] = ExpSample{std::abs(base_mass[s]) <= K, base[s]};
            }
            Summary obj_summary = summarize(obj);
            push("bd_objective", K, obj_summary);
            {
                // The estimate of record for E[1 e^{min(R_N,L)}]: the
                // variational lower bound exp(-objective) - 1, in log scale.
                double x = -obj_summary.mean;
                double logv = x >= 30.0 ? x : std::log(std::max(std::expm1(x), 1e-300));
                ScanRow r;
                r.M = M;
                r.N = N;
                r.K = K;
                r.L = L;
                r.samples = obj_summary.n;
                r.mean = logv;
                r.stderr_ = obj_summary.stderr_;
                r.ci_low = logv - kZ99 * obj_summary.stderr_;
                r.ci_high = logv + kZ99 * obj_summary.stderr_;
                r.tag = "partition_certified_log";
                rows.push_back(std::move(r));
            }
            push("partition_direct_mc", K, summarize_exp(direct));
            push("cutoff_prob", K, summarize(indicator));
        }
        push("combo_second_moment_mc", 0.0, summarize(combo_sq));
        {
            // Exact Ito-isometry value of E|combo|^2 alongside the sampled one.
            const auto& lat = *ctx.lattice();
            KahanSum acc;
            for (std::size_t i = 0; i < lat.size(); ++i) {
                double fc = ctx.bump().coeffs[i].real();
                if (fc == 0.0) continue;
                OuMoments m = ou_moments_from_bracket(lat.bracket_at(i), M, cfg.d);
                acc.add(fc * fc * m.var_x);
            }
            double fm_term = 4.0 * ctx.drift_gain() * acc.value();
            ScanRow r;
            r.M = M;
            r.N = N;
            r.K = 0.0;
            r.L = L;
            r.samples = cfg.samples;
            r.mean = ctx.residual_mass_second_moment() + fm_term;
            r.stderr_ = 0.0;
            r.ci_low = r.mean;
            r.ci_high = r.mean;
            r.tag = "combo_second_moment_exact";
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

}  // namespace lcgf
