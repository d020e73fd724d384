#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lcgf {

/// Fixed-order pairwise sum: bit-identical for a given input, regardless of
/// how the values were produced (worker-count independent reductions).
double pairwise_sum(std::span<const double> v);

/// z-score for the two-sided 99% confidence level used throughout.
inline constexpr double kZ99 = 2.576;

struct Summary {
    std::int64_t n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

Summary summarize(std::span<const double> values);

/// Summary of mean(active ? exp(x) : 0) computed in log space, so that large
/// exponents cannot overflow intermediate accumulations.
struct ExpSample {
    bool active = false;
    double exponent = 0.0;
};
Summary summarize_exp(std::span<const ExpSample> values);

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_se = 0.0;  // residual-based standard error
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Weighted least squares slope with known per-point standard deviations;
/// slope_se is the exact propagation of those sigmas.
LinearFit weighted_slope(std::span<const double> x, std::span<const double> y,
                         std::span<const double> sigma);

/// Two-sample-free Kolmogorov-Smirnov statistic against a reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Large-sample KS critical value at significance alpha (e.g. 0.01 -> 1.628/sqrt(n)).
double ks_critical(std::size_t n, double alpha);

/// Run fn(i) for i in [0, count) on `workers` threads.  Results must be
/// written to per-index slots; scheduling never affects any reduction.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Mean of f(X) for X ~ N(0,1) by Gauss-Hermite-style quadrature on a
/// truncated trapezoid grid; exact enough for smooth bounded f.
double gauss_expectation(const std::function<double(double)>& f, int points = 400, double cut = 8.5);

}  // namespace lcgf
