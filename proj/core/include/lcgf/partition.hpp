#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcgf/field.hpp"
#include "lcgf/stats.hpp"
#include "lcgf/variational.hpp"

namespace lcgf {

/// A Monte Carlo estimate with rigorous confidence reporting.  Confidence
/// intervals are two-sided 99% (mean +- 2.576 stderr); emitted reports carry
/// at least 100 samples.
struct EstimateReport {
    std::string quantity;
    int d = 0;
    int N = 0;
    std::string law;
    std::string potential;
    std::map<std::string, double> params;
    std::int64_t samples = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    /// Fraction of contributing samples clipped at the truncation ceiling L;
    /// above 1/2 the estimate certifies a lower bound only.
    double tail_flag = 0.0;
    std::uint64_t seed = 0;

    static EstimateReport from_summary(const Summary& s);
    bool lower_bound_only() const { return tail_flag > 0.5; }
};

enum class PotentialKind { WickPower, CubicTamed, SmoothTamed, ZakharovMarginal };

struct PotentialSpec {
    PotentialKind kind = PotentialKind::WickPower;
    double coupling = 1.0;
    int k = 4;           // WickPower only
    double A = 0.0;      // tamed variants
    double gamma = 0.0;  // SmoothTamed only
    std::string name() const;
};

enum class CutoffMode { None, Signed, Absolute };

struct CutoffSpec {
    CutoffMode mode = CutoffMode::None;
    double K = 0.0;
};

struct EstimateConfig {
    GaussLaw law;
    LatticeSpec spec;
    PotentialSpec potential;
    std::optional<double> truncation;  // L; mandatory for focusing WickPower runs
    CutoffSpec cutoff;
    std::int64_t samples = 10000;
    std::uint64_t seed = 0;
    int workers = 1;
};

/// mean of 1{cutoff} * exp(min(potential, L)) over independent field samples.
EstimateReport estimate_exp_potential(const EstimateConfig& cfg);

/// Coupled L^2 Cauchy diagnostic: || R_{N'} - R_N ||_{L^2(mu)} on common
/// coefficient realizations (nested truncations), for consecutive N.
struct CauchyRow {
    int N_lo = 0;
    int N_hi = 0;
    double l2_diff = 0.0;
    double stderr_ = 0.0;
};
std::vector<CauchyRow> potential_cauchy_scan(const GaussLaw& law, int d,
                                             const std::vector<int>& N_values, int k, double coupling,
                                             std::int64_t samples, std::uint64_t seed, int workers = 1);

/// Hypercontractive moment diagnostic: empirical L^4/L^2 norm ratio of a
/// chaos-order-k functional against the (p-1)^{k/2} bound at p = 4.
struct ChaosMomentReport {
    int order = 0;
    double ratio = 0.0;
    double ratio_se = 0.0;
    double bound = 0.0;
    bool violated = false;
};
ChaosMomentReport chaos_moment_check(std::span<const double> functional_samples, int order);

}  // namespace lcgf
