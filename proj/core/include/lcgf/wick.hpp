#pragma once

#include <array>
#include <vector>

#include "lcgf/field.hpp"
#include "lcgf/grid.hpp"

namespace lcgf {

/// Hermite polynomial H_k(x; sigma) with variance parameter sigma:
/// H_0 = 1, H_1 = x, H_{k+1} = x H_k - k sigma H_{k-1}.  k <= 8.
double hermite(int k, double x, double sigma);

/// Variance parameter carried alongside a field when forming Wick powers.
/// Callers are responsible for passing the variance of the law the field was
/// actually sampled from; it is not inferred.
struct WickContext {
    double sigma = 0.0;
    bool complex_valued = false;

    static WickContext for_law(const GaussLaw& law, const Lattice& lat);
};

/// Pointwise :u^k:(x_j) = H_k(u(x_j); sigma) for a real-valued field grid.
std::vector<double> wick_power(const GridArray& g, int k, const WickContext& ctx);

/// :|u|^2: = |u|^2 - sigma for a complex-valued field grid.
std::vector<double> complex_wick_square(const GridArray& g, const WickContext& ctx);

/// :|u|^4: = |u|^4 - 4 sigma |u|^2 + 2 sigma^2 for a complex-valued field grid.
std::vector<double> complex_wick_quartic(const GridArray& g, const WickContext& ctx);

double average(const std::vector<double>& grid_values);

/// Renormalized potential (coupling/k) * integral of :u^k: .  k in {3,4};
/// complex fields require even k and use the complex Wick powers.
double wick_potential(const SpectralField& u, double coupling, int k, const WickContext& ctx);

/// (coupling/3) * integral :u^3: - A * (integral :u^2:)^2, real fields.
double tamed_cubic_potential(const SpectralField& u, double coupling, double A, const WickContext& ctx);

/// (coupling/4) * integral u^4 - A * (integral u^2)^gamma for smooth laws
/// (no renormalization; fields are bounded).
double smooth_quartic_potential(const SpectralField& u, double coupling, double A, double gamma);

/// Wick-ordered mass integral :u^2: dx computed spectrally:
/// sum |c_n|^2 - sigma (real), or sum |c_n|^2 - sigma for complex |u|^2.
double wick_mass(const SpectralField& u, const WickContext& ctx);

/// Average of H_k(u(x); sigma) over a real-valued grid.
double wick_integral(std::span<const double> grid_values, int k, double sigma);

/// Binomial split of H_k(Y + T; sigma):
///   term[l] = C(k,l) * integral T^{k-l} H_l(Y; sigma) dx ,
/// so that total() = integral H_k(Y+T; sigma) dx exactly.
struct ShiftExpansion {
    int k = 0;
    std::array<double, 9> terms{};
    double total() const;
};

/// Expansion over grids of matching geometry (the grid of Y must satisfy
/// the alias-free bound for degree k*N products).
ShiftExpansion shifted_wick_expansion(std::span<const double> y, std::span<const double> shift,
                                      int k, double sigma);
ShiftExpansion shifted_wick_expansion(const GridArray& y, const GridArray& shift, int k, double sigma);

/// Same evaluated without the split, for cross-checks: integral H_k(Y+T; sigma).
double shifted_wick_direct(std::span<const double> y, std::span<const double> shift, int k, double sigma);
double shifted_wick_direct(const GridArray& y, const GridArray& shift, int k, double sigma);

}  // namespace lcgf
