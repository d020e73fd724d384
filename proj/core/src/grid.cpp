#include "lcgf/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lcgf {

GridArray::GridArray(int d, int G) : d_(d), G_(G) {
    size_ = 1;
    for (int i = 0; i < d; ++i) size_ *= std::size_t(G);
    data_ = reinterpret_cast<cplx*>(fftw_alloc_complex(size_));
    if (!data_) throw std::bad_alloc();
    fill_zero();
}

GridArray::GridArray(const GridArray& o) : d_(o.d_), G_(o.G_), size_(o.size_) {
    if (o.data_) {
        data_ = reinterpret_cast<cplx*>(fftw_alloc_complex(size_));
        if (!data_) throw std::bad_alloc();
        std::memcpy(data_, o.data_, size_ * sizeof(cplx));
    }
}

GridArray::GridArray(GridArray&& o) noexcept : d_(o.d_), G_(o.G_), size_(o.size_), data_(o.data_) {
    o.data_ = nullptr;
    o.size_ = 0;
}

GridArray& GridArray::operator=(GridArray o) {
    std::swap(d_, o.d_);
    std::swap(G_, o.G_);
    std::swap(size_, o.size_);
    std::swap(data_, o.data_);
    return *this;
}

GridArray::~GridArray() {
    if (data_) fftw_free(reinterpret_cast<fftw_complex*>(data_));
}

void GridArray::fill_zero() { std::fill(data_, data_ + size_, cplx{0.0, 0.0}); }

namespace grid {
namespace {

struct PlanPair {
    fftw_plan backward = nullptr;  // e^{+i}: synthesis
    fftw_plan forward = nullptr;   // e^{-i}: analysis
};

// Planner access is serialized; fftw_execute_dft on distinct arrays is
// thread-safe.  Plans are built once per (d, G) on fftw_malloc'ed storage so
// every GridArray satisfies the planned alignment.
PlanPair& plans_for(int d, int G) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.try_emplace({d, G});
    if (inserted) {
        std::size_t n = 1;
        for (int i = 0; i < d; ++i) n *= std::size_t(G);
        fftw_complex* buf = fftw_alloc_complex(n);
        if (!buf) throw std::bad_alloc();
        int dims[3] = {G, G, G};
        it->second.backward = fftw_plan_dft(d, dims, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        it->second.forward = fftw_plan_dft(d, dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_free(buf);
        if (!it->second.backward || !it->second.forward)
            throw std::runtime_error("FFTW plan creation failed");
    }
    return it->second;
}

}  // namespace

void synthesize(GridArray& a) {
    PlanPair& p = plans_for(a.d(), a.G());
    fftw_execute_dft(p.backward, reinterpret_cast<fftw_complex*>(a.data()),
                     reinterpret_cast<fftw_complex*>(a.data()));
}

void analyze(GridArray& a) {
    PlanPair& p = plans_for(a.d(), a.G());
    fftw_execute_dft(p.forward, reinterpret_cast<fftw_complex*>(a.data()),
                     reinterpret_cast<fftw_complex*>(a.data()));
    const double inv = 1.0 / double(a.size());
    for (auto& v : a.values()) v *= inv;
}

cplx integrate(const GridArray& a) {
    KahanSum re, im;
    for (const auto& v : a.values()) {
        re.add(v.real());
        im.add(v.imag());
    }
    const double inv = 1.0 / double(a.size());
    return cplx{re.value() * inv, im.value() * inv};
}

double integrate_real(const GridArray& a) { return integrate(a).real(); }

cplx inner(const GridArray& a, const GridArray& b) {
    if (a.size() != b.size()) throw std::invalid_argument("grid::inner: size mismatch");
    KahanSum re, im;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cplx v = std::conj(a[i]) * b[i];
        re.add(v.real());
        im.add(v.imag());
    }
    const double inv = 1.0 / double(a.size());
    return cplx{re.value() * inv, im.value() * inv};
}

namespace {

fftw_plan c2r_plan_for(int d, int G) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.try_emplace({d, G}, nullptr);
    if (inserted) {
        std::size_t nr = 1;
        for (int i = 0; i < d; ++i) nr *= std::size_t(G);
        std::size_t nh = half_spectrum_size(d, G);
        fftw_complex* in = fftw_alloc_complex(nh);
        double* out = fftw_alloc_real(nr);
        if (!in || !out) throw std::bad_alloc();
        int dims[3] = {G, G, G};
        it->second = fftw_plan_dft_c2r(d, dims, in, out, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        if (!it->second) throw std::runtime_error("FFTW c2r plan creation failed");
    }
    return it->second;
}

}  // namespace

std::size_t half_spectrum_size(int d, int G) {
    std::size_t n = std::size_t(G) / 2 + 1;
    for (int i = 0; i < d - 1; ++i) n *= std::size_t(G);
    return n;
}

void synthesize_real(int d, int G, cplx* half_spectrum, double* out) {
    fftw_plan p = c2r_plan_for(d, G);
    fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(half_spectrum), out);
}

double average(std::span<const double> values) {
    KahanSum s;
    for (double x : values) s.add(x);
    return s.value() / double(values.size());
}

double smoothed_sup_norm(const GridArray& a, double eps) {
    GridArray work(a);
    analyze(work);
    const int d = a.d(), G = a.G();
    const std::size_t total = work.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        double nsq = 0.0;
        for (int c = d - 1; c >= 0; --c) {
            int k = int(rem % std::size_t(G));
            rem /= std::size_t(G);
            if (k >= G / 2) k -= G;  // centered wavenumber
            nsq += double(k) * double(k);
        }
        work[idx] *= std::pow(1.0 + nsq, -0.5 * eps);
    }
    synthesize(work);
    double m = 0.0;
    for (const auto& v : work.values()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace grid
}  // namespace lcgf
