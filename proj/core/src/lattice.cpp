#include "lcgf/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace lcgf {

double bracket(const Mode& n) {
    double s = 0.0;
    for (int c : n) s += double(c) * double(c);
    return std::sqrt(1.0 + s);
}

double bracket_from_sq(double n_sq) { return std::sqrt(1.0 + n_sq); }

int LatticeSpec::default_grid(int N) {
    int need = 4 * N + 1;
    int g = 1;
    while (g < need) g *= 2;
    return g;
}

LatticeSpec LatticeSpec::make(int d, int N) {
    LatticeSpec s{d, N, default_grid(N)};
    s.validate();
    return s;
}

LatticeSpec LatticeSpec::make(int d, int N, int G) {
    LatticeSpec s{d, N, G};
    s.validate();
    return s;
}

void LatticeSpec::validate() const {
    if (d < 1 || d > 3) throw std::invalid_argument("LatticeSpec: d must be 1, 2 or 3");
    if (N < 1) throw std::invalid_argument("LatticeSpec: N must be positive");
    if (G < 4 * N + 1)
        throw std::invalid_argument("LatticeSpec: G >= 4N+1 required for alias-free quartic quadrature");
}

std::int64_t LatticeSpec::grid_points() const {
    std::int64_t p = 1;
    for (int i = 0; i < d; ++i) p *= G;
    return p;
}

Lattice::Lattice(LatticeSpec spec) : spec_(spec) {
    spec_.validate();
    const int N = spec_.N;
    const std::int64_t r2 = std::int64_t(N) * N;
    const int lo1 = spec_.d >= 2 ? -N : 0, hi1 = spec_.d >= 2 ? N : 0;
    const int lo2 = spec_.d >= 3 ? -N : 0, hi2 = spec_.d >= 3 ? N : 0;
    // Lexicographic over the used components; unused components stay zero.
    for (int a = -N; a <= N; ++a)
        for (int b = lo1; b <= hi1; ++b)
            for (int c = lo2; c <= hi2; ++c) {
                std::int64_t s = std::int64_t(a) * a + std::int64_t(b) * b + std::int64_t(c) * c;
                if (s <= r2) points_.push_back(Mode{a, b, c});
            }
    brackets_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) brackets_[i] = bracket(points_[i]);

    conj_index_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) conj_index_[i] = index_of(negate(points_[i]));
}

bool Lattice::is_representative(const Mode& n) {
    for (int c : n) {
        if (c > 0) return true;
        if (c < 0) return false;
    }
    return true;  // n == 0
}

Mode Lattice::negate(const Mode& n) { return Mode{-n[0], -n[1], -n[2]}; }

std::size_t Lattice::index_of(const Mode& n) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), n);
    if (it == points_.end() || *it != n) throw std::out_of_range("Lattice::index_of: mode outside ball");
    return std::size_t(it - points_.begin());
}

std::uint64_t Lattice::mode_key(const Mode& n) {
    // 21 bits per signed component, offset-encoded; |n| < 2^20 is ample.
    std::uint64_t k = 0;
    for (int i = 0; i < 3; ++i) k = (k << 21) | std::uint64_t(std::uint32_t(n[i] + (1 << 20)) & 0x1FFFFF);
    return k;
}

std::int64_t Lattice::grid_index(std::size_t i, int G) const {
    const Mode& n = points_[i];
    std::int64_t idx = 0;
    for (int c = 0; c < spec_.d; ++c) {
        int w = n[c] % G;
        if (w < 0) w += G;
        idx = idx * G + w;
    }
    return idx;
}

LatticePtr make_lattice(const LatticeSpec& spec) { return std::make_shared<Lattice>(spec); }
LatticePtr make_lattice(int d, int N) { return std::make_shared<Lattice>(LatticeSpec::make(d, N)); }

double ball_weight_sum(int d, int N, double power) {
    const std::int64_t r2 = std::int64_t(N) * N;
    KahanSum acc;
    const int lo1 = d >= 2 ? -N : 0, hi1 = d >= 2 ? N : 0;
    const int lo2 = d >= 3 ? -N : 0, hi2 = d >= 3 ? N : 0;
    for (int a = -N; a <= N; ++a)
        for (int b = lo1; b <= hi1; ++b)
            for (int c = lo2; c <= hi2; ++c) {
                std::int64_t s = std::int64_t(a) * a + std::int64_t(b) * b + std::int64_t(c) * c;
                if (s <= r2) acc.add(std::pow(1.0 + double(s), 0.5 * power));
            }
    return acc.value();
}

double point_variance(const LatticeSpec& spec) { return ball_weight_sum(spec.d, spec.N, -double(spec.d)); }

double green_truncated(const LatticeSpec& spec, std::span<const double> x) {
    if (int(x.size()) != spec.d) throw std::invalid_argument("green_truncated: point dimension mismatch");
    const int N = spec.N;
    const std::int64_t r2 = std::int64_t(N) * N;
    const int lo1 = spec.d >= 2 ? -N : 0, hi1 = spec.d >= 2 ? N : 0;
    const int lo2 = spec.d >= 3 ? -N : 0, hi2 = spec.d >= 3 ? N : 0;
    const double x0 = x[0], x1 = spec.d >= 2 ? x[1] : 0.0, x2 = spec.d >= 3 ? x[2] : 0.0;
    KahanSum acc;
    for (int a = -N; a <= N; ++a)
        for (int b = lo1; b <= hi1; ++b)
            for (int c = lo2; c <= hi2; ++c) {
                std::int64_t s = std::int64_t(a) * a + std::int64_t(b) * b + std::int64_t(c) * c;
                if (s > r2) continue;
                double w = std::pow(1.0 + double(s), -0.5 * spec.d);
                acc.add(w * std::cos(a * x0 + b * x1 + c * x2));
            }
    return acc.value();
}

}  // namespace lcgf
