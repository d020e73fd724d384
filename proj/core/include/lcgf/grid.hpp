#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lcgf/lattice.hpp"

namespace lcgf {

using cplx = std::complex<double>;

/// Values of a field on the uniform G^d grid, x_j = 2*pi*j/G per component.
/// Backed by FFT-aligned storage so transforms can run in place.
class GridArray {
  public:
    GridArray() = default;
    GridArray(int d, int G);
    GridArray(const GridArray&);
    GridArray(GridArray&&) noexcept;
    GridArray& operator=(GridArray);
    ~GridArray();

    int d() const { return d_; }
    int G() const { return G_; }
    std::size_t size() const { return size_; }
    cplx* data() { return data_; }
    const cplx* data() const { return data_; }
    cplx& operator[](std::size_t i) { return data_[i]; }
    const cplx& operator[](std::size_t i) const { return data_[i]; }
    std::span<cplx> values() { return {data_, size_}; }
    std::span<const cplx> values() const { return {data_, size_}; }

    void fill_zero();

  private:
    int d_ = 0;
    int G_ = 0;
    std::size_t size_ = 0;
    cplx* data_ = nullptr;
};

/// Complex-to-complex transforms between spectral coefficients and grid
/// values, with e^{+i n.x} synthesis and 1/G^d normalized analysis.
/// Plans are cached per (d, G); execution is thread-safe.
namespace grid {

/// In-place synthesis u(x_j) = sum_k c_k e^{+2 pi i j.k / G}.
void synthesize(GridArray& a);
/// In-place analysis c_k = G^{-d} sum_j u(x_j) e^{-2 pi i j.k / G}.
void analyze(GridArray& a);

/// Normalized-measure integral: the plain average of grid values.
cplx integrate(const GridArray& a);
double integrate_real(const GridArray& a);

/// Average of the pointwise product of two grids (first conjugated if asked).
cplx inner(const GridArray& a, const GridArray& b);

/// Sup norm of the <grad>^{-eps}-smoothed field: spectral multiplier
/// <n>^{-eps} applied over the aliased wavenumbers, then max |u(x_j)|.
/// The wavenumber of bin k is the centered representative in [-G/2, G/2).
double smoothed_sup_norm(const GridArray& a, double eps);

/// Hermitian-to-real synthesis (e^{+i n.x}).  The half spectrum holds bins
/// with last wavenumber component in [0, G/2], row-major over the other
/// components; it is destroyed by the transform.
void synthesize_real(int d, int G, cplx* half_spectrum, double* out);
std::size_t half_spectrum_size(int d, int G);

double average(std::span<const double> values);

}  // namespace grid

}  // namespace lcgf
