#include "lcgf/field.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lcgf {

GaussLaw GaussLaw::log_correlated(bool complex_valued) {
    return GaussLaw{LawKind::LogCorrelated, complex_valued, 0.0};
}

GaussLaw GaussLaw::smooth(double alpha, bool complex_valued) {
    return GaussLaw{LawKind::SmoothAlpha, complex_valued, alpha};
}

GaussLaw GaussLaw::white_noise(bool complex_valued) {
    return GaussLaw{LawKind::WhiteNoise, complex_valued, 0.0};
}

void GaussLaw::validate(int d) const {
    if (kind == LawKind::SmoothAlpha && !(alpha > 0.5 * d))
        throw std::invalid_argument("GaussLaw: smooth law requires alpha > d/2");
}

double GaussLaw::weight(double b, int d) const {
    switch (kind) {
        case LawKind::LogCorrelated: return std::pow(b, -0.5 * d);
        case LawKind::SmoothAlpha: return std::pow(b, -alpha);
        case LawKind::WhiteNoise: return 1.0;
    }
    return 1.0;
}

std::string GaussLaw::name() const {
    std::string base;
    switch (kind) {
        case LawKind::LogCorrelated: base = "log_correlated"; break;
        case LawKind::SmoothAlpha: base = "smooth_alpha"; break;
        case LawKind::WhiteNoise: base = "white_noise"; break;
    }
    return base + (complex_valued ? "_complex" : "_real");
}

SpectralField SpectralField::zero(LatticePtr lat, bool complex_valued) {
    SpectralField f;
    f.lattice = std::move(lat);
    f.coeffs.assign(f.lattice->size(), cplx{0.0, 0.0});
    f.complex_valued = complex_valued;
    return f;
}

double SpectralField::l2_norm_sq() const {
    KahanSum s;
    for (const auto& c : coeffs) s.add(std::norm(c));
    return s.value();
}

double SpectralField::sobolev_norm_sq(double s) const {
    KahanSum acc;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        acc.add(std::pow(lattice->bracket_at(i), 2.0 * s) * std::norm(coeffs[i]));
    return acc.value();
}

double point_variance(const GaussLaw& law, const Lattice& lat) {
    law.validate(lat.spec().d);
    KahanSum s;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        double w = law.weight(lat.bracket_at(i), lat.spec().d);
        s.add(w * w);
    }
    return s.value();
}

SpectralField sample(const GaussLaw& law, LatticePtr lat, RngKey key, std::uint32_t sample_index) {
    const int d = lat->spec().d;
    law.validate(d);
    SpectralField f = SpectralField::zero(lat, law.complex_valued);
    const std::uint64_t c01 = pack_sample_step(sample_index, 0);
    const std::size_t n_modes = lat->size();

    if (law.complex_valued) {
        for (std::size_t i = 0; i < n_modes; ++i) {
            NormalPair z = normal_pair(key, c01, Lattice::mode_key(lat->point(i)));
            double w = law.weight(lat->bracket_at(i), d);
            // E|g|^2 = 1: real and imaginary parts have variance 1/2.
            f.coeffs[i] = w * cplx{z.z0 * M_SQRT1_2, z.z1 * M_SQRT1_2};
        }
        return f;
    }

    for (std::size_t i = 0; i < n_modes; ++i) {
        const Mode& n = lat->point(i);
        if (!Lattice::is_representative(n)) continue;
        NormalPair z = normal_pair(key, c01, Lattice::mode_key(n));
        double w = law.weight(lat->bracket_at(i), d);
        if (n == Mode{0, 0, 0}) {
            f.coeffs[i] = cplx{w * z.z0, 0.0};
        } else {
            cplx g{z.z0 * M_SQRT1_2, z.z1 * M_SQRT1_2};
            f.coeffs[i] = w * g;
            f.coeffs[lat->index_of_negation(i)] = w * std::conj(g);
        }
    }
    return f;
}

SpectralField project(const SpectralField& u, int N) {
    if (N > u.spec().N) throw std::invalid_argument("project: N exceeds the field cutoff");
    SpectralField out = u;
    const std::int64_t r2 = std::int64_t(N) * N;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        const Mode& n = u.lattice->point(i);
        std::int64_t s = std::int64_t(n[0]) * n[0] + std::int64_t(n[1]) * n[1] + std::int64_t(n[2]) * n[2];
        if (s > r2) out.coeffs[i] = cplx{0.0, 0.0};
    }
    return out;
}

GridArray to_grid(const SpectralField& u) { return to_grid(u, u.spec().G); }

GridArray to_grid(const SpectralField& u, int G) {
    const LatticeSpec& s = u.spec();
    if (G < 2 * s.N + 1) throw std::invalid_argument("to_grid: grid too small for the cutoff");
    GridArray g(s.d, G);
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
        g[std::size_t(u.lattice->grid_index(i, G))] += u.coeffs[i];
    grid::synthesize(g);
    return g;
}

std::vector<double> to_real_grid(const SpectralField& u) { return to_real_grid(u, u.spec().G); }

std::vector<double> to_real_grid(const SpectralField& u, int G) {
    if (u.complex_valued) throw std::invalid_argument("to_real_grid: real fields only");
    const LatticeSpec& s = u.spec();
    if (G < 2 * s.N + 1) throw std::invalid_argument("to_real_grid: grid too small for the cutoff");
    const int d = s.d;
    const std::size_t nh = grid::half_spectrum_size(d, G);
    std::size_t nr = 1;
    for (int i = 0; i < d; ++i) nr *= std::size_t(G);

    struct FftwBuf {
        void* p;
        explicit FftwBuf(std::size_t bytes) : p(fftw_malloc(bytes)) {
            if (!p) throw std::bad_alloc();
        }
        ~FftwBuf() { fftw_free(p); }
    };
    FftwBuf half_buf(nh * sizeof(cplx)), real_buf(nr * sizeof(double));
    cplx* half = static_cast<cplx*>(half_buf.p);
    double* out = static_cast<double*>(real_buf.p);
    std::fill(half, half + nh, cplx{0.0, 0.0});

    const int last = d - 1;
    const std::size_t stride_last = std::size_t(G) / 2 + 1;
    for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
        const Mode& n = u.lattice->point(i);
        if (n[last] < 0) continue;  // conjugate bin carries it
        std::size_t idx = 0;
        for (int c = 0; c < last; ++c) {
            int w = n[c] % G;
            if (w < 0) w += G;
            idx = idx * std::size_t(G) + std::size_t(w);
        }
        idx = idx * stride_last + std::size_t(n[last]);
        half[idx] += u.coeffs[i];
    }
    grid::synthesize_real(d, G, half, out);
    return std::vector<double>(out, out + nr);
}

SpectralField from_grid(const GridArray& g, LatticePtr lat, bool complex_valued) {
    GridArray work(g);
    grid::analyze(work);
    SpectralField f = SpectralField::zero(std::move(lat), complex_valued);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        f.coeffs[i] = work[std::size_t(f.lattice->grid_index(i, g.G()))];
    return f;
}

std::vector<cplx> evaluate(const SpectralField& u, std::span<const std::array<double, 3>> pts) {
    std::vector<cplx> out(pts.size(), cplx{0, 0});
    const int d = u.spec().d;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        KahanSum re, im;
        for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
            const Mode& n = u.lattice->point(i);
            double phase = 0.0;
            for (int c = 0; c < d; ++c) phase += n[c] * pts[p][c];
            cplx v = u.coeffs[i] * cplx{std::cos(phase), std::sin(phase)};
            re.add(v.real());
            im.add(v.imag());
        }
        out[p] = cplx{re.value(), im.value()};
    }
    return out;
}

namespace {

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    static_assert(std::endian::native == std::endian::little, "little-endian container");
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void write_ensemble(std::ostream& os, const EnsembleHeader& h, std::span<const SpectralField> fields) {
    os.write("LCGF", 4);
    write_pod(os, h.version);
    write_pod(os, std::int32_t(h.d));
    write_pod(os, std::int32_t(h.N));
    write_pod(os, std::int32_t(h.G));
    write_pod(os, std::uint32_t(h.complex_valued ? 1 : 0));
    write_pod(os, std::uint64_t(fields.size()));
    for (const auto& f : fields)
        os.write(reinterpret_cast<const char*>(f.coeffs.data()),
                 std::streamsize(f.coeffs.size() * sizeof(cplx)));
}

std::vector<SpectralField> read_ensemble(std::istream& is, EnsembleHeader& h) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LCGF", 4) != 0)
        throw std::runtime_error("read_ensemble: bad magic");
    std::int32_t d = 0, N = 0, G = 0;
    std::uint32_t cflag = 0;
    read_pod(is, h.version);
    read_pod(is, d);
    read_pod(is, N);
    read_pod(is, G);
    read_pod(is, cflag);
    read_pod(is, h.count);
    h.d = d;
    h.N = N;
    h.G = G;
    h.complex_valued = cflag != 0;
    LatticePtr lat = make_lattice(LatticeSpec::make(d, N, G));
    std::vector<SpectralField> out;
    out.reserve(h.count);
    for (std::uint64_t s = 0; s < h.count; ++s) {
        SpectralField f = SpectralField::zero(lat, h.complex_valued);
        is.read(reinterpret_cast<char*>(f.coeffs.data()), std::streamsize(f.coeffs.size() * sizeof(cplx)));
        if (!is) throw std::runtime_error("read_ensemble: truncated payload");
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace lcgf
