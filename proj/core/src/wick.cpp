#include "lcgf/wick.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lcgf {

double hermite(int k, double x, double sigma) {
    if (k < 0) throw std::invalid_argument("hermite: negative order");
    if (k > 8) throw std::invalid_argument("hermite: order above 8 not supported");
    if (sigma < 0.0) throw std::invalid_argument("hermite: negative variance parameter");
    switch (k) {
        case 0: return 1.0;
        case 1: return x;
        case 2: return x * x - sigma;
        case 3: return x * (x * x - 3.0 * sigma);
        case 4: {
            double x2 = x * x;
            return x2 * x2 - 6.0 * sigma * x2 + 3.0 * sigma * sigma;
        }
        default: break;
    }
    double hm = hermite(3, x, sigma);
    double h = hermite(4, x, sigma);
    for (int j = 4; j < k; ++j) {
        double next = x * h - double(j) * sigma * hm;
        hm = h;
        h = next;
    }
    return h;
}

WickContext WickContext::for_law(const GaussLaw& law, const Lattice& lat) {
    return WickContext{point_variance(law, lat), law.complex_valued};
}

static void require_real(const WickContext& ctx, const char* who) {
    if (ctx.complex_valued) throw std::invalid_argument(std::string(who) + ": complex field, use the complex Wick powers");
}

static void require_complex(const WickContext& ctx, const char* who) {
    if (!ctx.complex_valued) throw std::invalid_argument(std::string(who) + ": real field rejected");
}

std::vector<double> wick_power(const GridArray& g, int k, const WickContext& ctx) {
    require_real(ctx, "wick_power");
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = hermite(k, g[i].real(), ctx.sigma);
    return out;
}

std::vector<double> complex_wick_square(const GridArray& g, const WickContext& ctx) {
    require_complex(ctx, "complex_wick_square");
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::norm(g[i]) - ctx.sigma;
    return out;
}

std::vector<double> complex_wick_quartic(const GridArray& g, const WickContext& ctx) {
    require_complex(ctx, "complex_wick_quartic");
    std::vector<double> out(g.size());
    const double s = ctx.sigma;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double m = std::norm(g[i]);
        out[i] = m * m - 4.0 * s * m + 2.0 * s * s;
    }
    return out;
}

double average(const std::vector<double>& v) {
    KahanSum s;
    for (double x : v) s.add(x);
    return s.value() / double(v.size());
}

double wick_integral(std::span<const double> grid_values, int k, double sigma) {
    KahanSum acc;
    for (double x : grid_values) acc.add(hermite(k, x, sigma));
    return acc.value() / double(grid_values.size());
}

double wick_potential(const SpectralField& u, double coupling, int k, const WickContext& ctx) {
    if (k != 3 && k != 4) throw std::invalid_argument("wick_potential: k must be 3 or 4");
    if (u.complex_valued && (k % 2)) throw std::invalid_argument("wick_potential: odd power of a complex field");
    if (u.complex_valued) {
        GridArray g = to_grid(u);
        return coupling / double(k) * average(complex_wick_quartic(g, ctx));
    }
    return coupling / double(k) * wick_integral(to_real_grid(u), k, ctx.sigma);
}

double tamed_cubic_potential(const SpectralField& u, double coupling, double A, const WickContext& ctx) {
    if (u.complex_valued) throw std::invalid_argument("tamed_cubic_potential: real fields only");
    double cubic = wick_integral(to_real_grid(u), 3, ctx.sigma);
    double mass = wick_mass(u, ctx);
    return coupling / 3.0 * cubic - A * mass * mass;
}

double smooth_quartic_potential(const SpectralField& u, double coupling, double A, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("smooth_quartic_potential: gamma must be positive");
    KahanSum q2, q4;
    std::size_t count = 0;
    if (u.complex_valued) {
        GridArray g = to_grid(u);
        count = g.size();
        for (std::size_t i = 0; i < g.size(); ++i) {
            double m = std::norm(g[i]);
            q2.add(m);
            q4.add(m * m);
        }
    } else {
        std::vector<double> g = to_real_grid(u);
        count = g.size();
        for (double v : g) {
            double m = v * v;
            q2.add(m);
            q4.add(m * m);
        }
    }
    const double inv = 1.0 / double(count);
    double mass = q2.value() * inv;
    double quartic = q4.value() * inv;
    return coupling / 4.0 * quartic - A * std::pow(mass, gamma);
}

double wick_mass(const SpectralField& u, const WickContext& ctx) {
    return u.l2_norm_sq() - ctx.sigma;
}

double ShiftExpansion::total() const {
    KahanSum s;
    for (int l = 0; l <= k; ++l) s.add(terms[std::size_t(l)]);
    return s.value();
}

static double binomial(int k, int l) {
    double b = 1.0;
    for (int j = 1; j <= l; ++j) b = b * double(k - l + j) / double(j);
    return b;
}

ShiftExpansion shifted_wick_expansion(std::span<const double> y, std::span<const double> shift,
                                      int k, double sigma) {
    if (k < 0 || k > 8) throw std::invalid_argument("shifted_wick_expansion: k out of range");
    if (y.size() != shift.size())
        throw std::invalid_argument("shifted_wick_expansion: grid geometry mismatch");
    ShiftExpansion ex;
    ex.k = k;
    const std::size_t n = y.size();
    std::array<KahanSum, 9> acc{};
    std::array<double, 9> h{}, tp{};
    for (std::size_t i = 0; i < n; ++i) {
        const double yv = y[i];
        const double t = shift[i];
        h[0] = 1.0;
        if (k >= 1) h[1] = yv;
        for (int l = 2; l <= k; ++l) h[std::size_t(l)] = yv * h[std::size_t(l - 1)] - double(l - 1) * sigma * h[std::size_t(l - 2)];
        tp[0] = 1.0;
        for (int j = 1; j <= k; ++j) tp[std::size_t(j)] = t * tp[std::size_t(j - 1)];
        for (int l = 0; l <= k; ++l) acc[std::size_t(l)].add(tp[std::size_t(k - l)] * h[std::size_t(l)]);
    }
    for (int l = 0; l <= k; ++l) ex.terms[std::size_t(l)] = binomial(k, l) * acc[std::size_t(l)].value() / double(n);
    return ex;
}

namespace {

std::vector<double> real_parts(const GridArray& g) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = g[i].real();
    return v;
}

}  // namespace

ShiftExpansion shifted_wick_expansion(const GridArray& y, const GridArray& shift, int k, double sigma) {
    if (y.G() != shift.G()) throw std::invalid_argument("shifted_wick_expansion: grid geometry mismatch");
    return shifted_wick_expansion(real_parts(y), real_parts(shift), k, sigma);
}

double shifted_wick_direct(std::span<const double> y, std::span<const double> shift, int k, double sigma) {
    if (y.size() != shift.size()) throw std::invalid_argument("shifted_wick_direct: grid geometry mismatch");
    KahanSum acc;
    for (std::size_t i = 0; i < y.size(); ++i) acc.add(hermite(k, y[i] + shift[i], sigma));
    return acc.value() / double(y.size());
}

double shifted_wick_direct(const GridArray& y, const GridArray& shift, int k, double sigma) {
    return shifted_wick_direct(real_parts(y), real_parts(shift), k, sigma);
}

}  // namespace lcgf
