#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcgf/field.hpp"
#include "lcgf/grid.hpp"
#include "lcgf/lattice.hpp"
#include "lcgf/rng.hpp"
#include "lcgf/wick.hpp"

namespace lcgf {

/// Radial profile of the frequency-shell bump: a smooth function on
/// (1/2, 1), vanishing to all orders at both endpoints, normalized so the
/// bump has unit L^2 mass on R^d.
class BumpProfile {
  public:
    /// psi(r) = exp(-1 / ((r - 1/2)(1 - r))) on (1/2, 1), zero outside.
    static BumpProfile standard(int d);

    int dimension() const { return d_; }
    double shape(double r) const;                 // unnormalized psi
    double fourier_amplitude(double r) const;     // c * psi(r)
    double normalization() const { return c_; }

    /// Quadrature of c^2 * integral psi(|xi|)^2 dxi over R^d; equals 1 by
    /// construction, recomputed at the given resolution for verification.
    double l2_check(int quad_points) const;

  private:
    BumpProfile(int d, double c) : d_(d), c_(c) {}
    int d_ = 2;
    double c_ = 1.0;
};

/// Real-valued bump field: coefficients M^{-d/2} c psi(|n|/M) on the shell
/// M/2 < |n| <= M, zero elsewhere.  Requires M >= 4 and lattice cutoff >= M.
SpectralField bump_field(int M, const BumpProfile& profile, LatticePtr lat);

/// Exact second moments of the coupled pair (Y(1), X(1)) for one mode,
/// where X = Y - Z solves the mode-wise relaxation dX = -lambda X dt + dB
/// with lambda = <n>^{-d/2} M^{d/2}:
///   var_y  = <n>^{-d}
///   var_x  = <n>^{-d} (1 - e^{-2 lambda}) / (2 lambda)
///   cov_yx = <n>^{-d} (1 - e^{-lambda}) / lambda .
struct OuMoments {
    double var_y = 0.0;
    double var_x = 0.0;
    double cov_yx = 0.0;
};
OuMoments ou_moments(const Mode& n, int M, int d);
OuMoments ou_moments_from_bracket(double bracket_value, int M, int d);

/// One joint realization of the base field, its low-pass relaxation
/// approximation, the explicit drift shift, and the drift cost.
struct DriftEnsemble {
    int M = 0;
    int N = 0;
    int J = 0;                 // 0 when produced by the exact terminal sampler
    SpectralField y;           // Y_N(1)
    SpectralField z;           // Z_M(1), supported on |n| <= M
    SpectralField theta;       // -Z_M(1) + sqrt(gain) f_M
    double drift_cost = 0.0;   // int_0^1 ||theta(t)||_{L^2}^2 dt (J > 0 only)
};

/// Precomputed geometry shared by every sample of a variational run.
class VariationalContext {
  public:
    VariationalContext(int d, int M, int N);
    VariationalContext(LatticePtr lat, int M);

    const LatticePtr& lattice() const { return lat_; }
    int d() const { return lat_->spec().d; }
    int M() const { return M_; }
    int N() const { return lat_->spec().N; }
    const SpectralField& bump() const { return bump_; }
    const BumpProfile& profile() const { return profile_; }

    /// Ratio of the exact mass-cancellation numerator
    /// sum_{|n|<=M} (var_y - var_x) to integral f_M^2 dx; positive, ~ log M.
    double drift_gain() const { return gain_; }
    double gain_numerator() const { return gain_numerator_; }
    double bump_mass() const { return bump_mass_; }

    /// Exact E int_0^1 ||theta^0(t)||^2 dt (Ito isometry, no discretization).
    double expected_drift_cost() const;

    /// Exact E | int :(Y_N - Z_M)^2: dx |^2 for this (M, N).
    double residual_mass_second_moment() const;

    /// Exact E |Z_M(x)|^2 (independent of x).
    double z_point_variance() const;

    /// Exponential-integrator path simulation with J time steps sharing one
    /// Brownian family; fills terminals, the drift shift and the drift cost.
    DriftEnsemble simulate_drift_paths(int J, RngKey key, std::uint32_t sample) const;

    /// Exact-covariance terminal sampler (reference law, no time stepping);
    /// drift_cost is not defined on this route and is set to NaN.
    DriftEnsemble sample_terminals(RngKey key, std::uint32_t sample) const;

    /// theta = -z + sqrt(drift_gain) f_M.
    SpectralField drift_shift(const SpectralField& z) const;

    /// int (:Y^2: + 2 Y theta + theta^2) dx, computed spectrally.
    double wick_mass_combo(const SpectralField& y, const SpectralField& theta, double sigma_n) const;

  private:
    LatticePtr lat_;
    int M_ = 0;
    BumpProfile profile_;
    SpectralField bump_;
    double bump_mass_ = 0.0;
    double gain_numerator_ = 0.0;
    double gain_ = 0.0;
    std::vector<double> lambda_;   // per mode, |n| <= M only (else 0)
    std::vector<char> in_shell_;   // |n| <= M
};

/// Quartic energy (1/4) integral u^4 dx.
double quartic_energy(const SpectralField& u);

struct QuarticObjective {
    double value = 0.0;
    bool cutoff_active = false;
    double shifted_potential = 0.0;  // (coupling/4) int H_4(Y + theta)
    double base_potential = 0.0;     // (coupling/4) int H_4(Y)
    double mass_combo = 0.0;
};

/// One-sample integrand of the variational upper bound for the focusing
/// quartic potential: -min(R_N(Y+theta), L) * 1{|mass combo| <= K}
/// + drift_cost / 2.
QuarticObjective objective_quartic(const VariationalContext& ctx, const DriftEnsemble& e,
                                   double drift_cost, double coupling, double L, double K,
                                   double sigma_n);

/// One-sample integrand for the tamed cubic potential:
/// -[ (coupling/3) int H_3(Y+theta) - A (mass combo)^2 ] + drift_cost / 2.
double objective_cubic(const VariationalContext& ctx, const SpectralField& y,
                       const SpectralField& theta, double drift_cost, double coupling, double A,
                       double sigma_n);

struct ScanRow {
    double M = 0, N = 0, K = 0, L = 0;
    std::int64_t samples = 0;
    double mean = 0, stderr_ = 0, ci_low = 0, ci_high = 0;
    std::string tag;
};

struct DivergenceScanConfig {
    int d = 2;
    std::vector<int> M_values{8, 16, 32, 64};
    std::vector<double> K_values{1.0};  // evaluated in one pass per M
    double coupling = 1.0;              // focusing: > 0
    std::int64_t samples = 20000;
    std::uint64_t seed = 0;
    int workers = 1;
    double L_factor = 10.0;         // L = L_factor * coupling * gain^2 * Q(f_M)
    std::optional<double> L_fixed;  // overrides the schedule when set
};

/// Scan over M with N = 2M: reports, per M, the estimated variational upper
/// bound of -log E[exp(min(R_N,L)) 1{...}], the directly estimated truncated
/// partition function, the cutoff probability, and the exact second moment
/// of the cutoff argument.
std::vector<ScanRow> divergence_scan(const DivergenceScanConfig& cfg);

}  // namespace lcgf
