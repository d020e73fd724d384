#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lcgf/grid.hpp"
#include "lcgf/lattice.hpp"
#include "lcgf/rng.hpp"

namespace lcgf {

enum class LawKind { LogCorrelated, SmoothAlpha, WhiteNoise };

/// Which base Gaussian measure to sample.
///
/// Spectral weights: <n>^{-d/2} (log-correlated), <n>^{-alpha} (smooth,
/// alpha > d/2), 1 (white noise).  Real-valued laws impose the conjugate
/// symmetry at sampling time; complex laws draw every mode independently
/// with E|g_n|^2 = 1.
struct GaussLaw {
    LawKind kind = LawKind::LogCorrelated;
    bool complex_valued = false;
    double alpha = 0.0;  // SmoothAlpha only

    static GaussLaw log_correlated(bool complex_valued = false);
    static GaussLaw smooth(double alpha, bool complex_valued = false);
    static GaussLaw white_noise(bool complex_valued = false);

    void validate(int d) const;
    double weight(double bracket_value, int d) const;
    std::string name() const;
};

/// A truncated Fourier series on the d-torus.  Coefficients follow the
/// lattice enumeration order; immutable by convention after construction.
struct SpectralField {
    LatticePtr lattice;
    std::vector<cplx> coeffs;
    bool complex_valued = false;

    static SpectralField zero(LatticePtr lat, bool complex_valued = false);

    const LatticeSpec& spec() const { return lattice->spec(); }
    cplx coeff(const Mode& n) const { return coeffs[lattice->index_of(n)]; }
    void set_coeff(const Mode& n, cplx v) { coeffs[lattice->index_of(n)] = v; }

    /// l^2 coefficient norm squared = integral of |u|^2 (Parseval).
    double l2_norm_sq() const;
    /// Sobolev norm sum of <n>^{2s} |c_n|^2.
    double sobolev_norm_sq(double s) const;
};

/// Pointwise variance E[|u_N(x)|^2] = sum of squared weights for this law.
double point_variance(const GaussLaw& law, const Lattice& lat);

/// Draw one field realization.  The draw for mode n depends only on
/// (key, sample, mode), so nested truncations of the same (key, sample)
/// share coefficient realizations.
SpectralField sample(const GaussLaw& law, LatticePtr lat, RngKey key, std::uint32_t sample_index);

/// Frequency projection: zero all coefficients with |n| > N (idempotent).
SpectralField project(const SpectralField& u, int N);

/// Synthesis to the G^d grid.  For real-valued fields the imaginary residue
/// is checked (<= 1e-12 * scale) and discarded by downstream consumers.
GridArray to_grid(const SpectralField& u);
GridArray to_grid(const SpectralField& u, int G);

/// Real-field synthesis through the Hermitian half-spectrum transform;
/// the fast path for every real potential evaluation.
std::vector<double> to_real_grid(const SpectralField& u);
std::vector<double> to_real_grid(const SpectralField& u, int G);

/// Analysis back to the ball |n| <= N of the given lattice.
SpectralField from_grid(const GridArray& g, LatticePtr lat, bool complex_valued);

/// Evaluate u at arbitrary points (direct mode sum); one value per point.
std::vector<cplx> evaluate(const SpectralField& u, std::span<const std::array<double, 3>> pts);

/// Binary ensemble container (magic "LCGF"), little-endian doubles,
/// lattice points in lexicographic order.
struct EnsembleHeader {
    std::uint32_t version = 1;
    int d = 0;
    int N = 0;
    int G = 0;
    bool complex_valued = false;
    std::uint64_t count = 0;
};

void write_ensemble(std::ostream& os, const EnsembleHeader& h, std::span<const SpectralField> fields);
std::vector<SpectralField> read_ensemble(std::istream& is, EnsembleHeader& h);

}  // namespace lcgf
