#include "lcgf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lcgf {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = std::int64_t(values.size());
    if (values.empty()) return s;
    s.mean = pairwise_sum(values) / double(values.size());
    if (values.size() > 1) {
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            double d = values[i] - s.mean;
            sq[i] = d * d;
        }
        double var = pairwise_sum(sq) / double(values.size() - 1);
        s.stderr_ = std::sqrt(var / double(values.size()));
    }
    s.ci_low = s.mean - kZ99 * s.stderr_;
    s.ci_high = s.mean + kZ99 * s.stderr_;
    return s;
}

Summary summarize_exp(std::span<const ExpSample> values) {
    Summary s;
    s.n = std::int64_t(values.size());
    if (values.empty()) return s;
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : values)
        if (v.active && v.exponent > m) m = v.exponent;
    if (!std::isfinite(m)) return s;  // no active samples: mean 0
    std::vector<double> w(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i].active) w[i] = std::exp(values[i].exponent - m);
    double s1 = pairwise_sum(w) / double(values.size());
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double d = w[i] - s1;
        sq[i] = d * d;
    }
    double var = values.size() > 1 ? pairwise_sum(sq) / double(values.size() - 1) : 0.0;
    double scale = std::exp(m);
    s.mean = scale * s1;
    s.stderr_ = scale * std::sqrt(var / double(values.size()));
    s.ci_low = s.mean - kZ99 * s.stderr_;
    s.ci_high = s.mean + kZ99 * s.stderr_;
    return s;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 points");
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    if (x.size() > 2) {
        double ss = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double r = y[i] - f.intercept - f.slope * x[i];
            ss += r * r;
        }
        double s2 = ss / double(x.size() - 2);
        f.slope_se = std::sqrt(s2 * n / denom);
    }
    return f;
}

LinearFit weighted_slope(std::span<const double> x, std::span<const double> y,
                         std::span<const double> sigma) {
    if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2)
        throw std::invalid_argument("weighted_slope: size mismatch");
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double w = 1.0 / (sigma[i] * sigma[i]);
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
        swxx += w * x[i] * x[i];
        swxy += w * x[i] * y[i];
    }
    double denom = sw * swxx - swx * swx;
    LinearFit f;
    f.slope = (sw * swxy - swx * swy) / denom;
    f.intercept = (swy - f.slope * swx) / sw;
    f.slope_se = std::sqrt(sw / denom);
    return f;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double F = cdf(samples[i]);
        d = std::max(d, std::abs(F - double(i) / n));
        d = std::max(d, std::abs(double(i + 1) / n - F));
    }
    return d;
}

double ks_critical(std::size_t n, double alpha) {
    double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(double(n));
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t w = std::min<std::size_t>(std::size_t(workers), count);
    std::vector<std::thread> pool;
    pool.reserve(w);
    std::exception_ptr error;
    std::mutex error_mu;
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            try {
                // Strided static partition: slot i is always computed the
                // same way; only wall-clock assignment varies with workers.
                for (std::size_t i = t; i < count; i += w) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double gauss_expectation(const std::function<double(double)>& f, int points, double cut) {
    // Trapezoid on [-cut, cut] against the standard normal density; the
    // Gaussian tail truncation error is far below 1e-12 at cut = 8.5.
    double h = 2.0 * cut / double(points);
    double acc = 0.0;
    const double inv_sqrt2pi = 0.3989422804014326779;
    for (int i = 0; i <= points; ++i) {
        double x = -cut + h * double(i);
        double w = (i == 0 || i == points) ? 0.5 : 1.0;
        acc += w * f(x) * inv_sqrt2pi * std::exp(-0.5 * x * x);
    }
    return acc * h;
}

}  // namespace lcgf
