#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace lcgf {

/// A lattice point n in Z^d, stored with unused trailing components zero.
using Mode = std::array<int, 3>;

/// Japanese bracket <n> = (1 + |n|^2)^(1/2).
double bracket(const Mode& n);
double bracket_from_sq(double n_sq);

/// Geometry of a truncated Fourier series on the d-torus.
///
/// Frequencies live in the Euclidean ball |n| <= N.  The grid has G points
/// per dimension; G >= 4N+1 guarantees alias-free trapezoidal integration of
/// quartic products of degree-N trigonometric polynomials.
struct LatticeSpec {
    int d = 2;
    int N = 1;
    int G = 8;

    /// Smallest power of two >= 4N+1 (fast transforms, exact quartic quadrature).
    static int default_grid(int N);
    static LatticeSpec make(int d, int N);
    static LatticeSpec make(int d, int N, int G);

    void validate() const;
    std::int64_t grid_points() const;

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// Enumerated frequency ball with cached weights, in lexicographic order.
///
/// The ordering is part of the on-disk and RNG contract: coefficient arrays,
/// ensemble files and counter-based substreams all index modes through it.
class Lattice {
  public:
    explicit Lattice(LatticeSpec spec);

    const LatticeSpec& spec() const { return spec_; }
    std::size_t size() const { return points_.size(); }
    const Mode& point(std::size_t i) const { return points_[i]; }
    std::span<const Mode> points() const { return points_; }
    double bracket_at(std::size_t i) const { return brackets_[i]; }
    std::span<const double> brackets() const { return brackets_; }

    /// True if the mode is its conjugacy-class representative: n = 0 or the
    /// first nonzero component is positive.
    static bool is_representative(const Mode& n);
    static Mode negate(const Mode& n);

    /// Index of a point within the lexicographic enumeration; throws if outside.
    std::size_t index_of(const Mode& n) const;
    std::size_t index_of_negation(std::size_t i) const { return conj_index_[i]; }

    /// Stable 64-bit key identifying the mode independently of the cutoff,
    /// used to couple random draws across different truncations.
    static std::uint64_t mode_key(const Mode& n);

    /// Flattened index of the aliased grid bin n mod G (row-major).
    std::int64_t grid_index(std::size_t i, int G) const;

  private:
    LatticeSpec spec_;
    std::vector<Mode> points_;
    std::vector<double> brackets_;
    std::vector<std::size_t> conj_index_;
};

using LatticePtr = std::shared_ptr<const Lattice>;
LatticePtr make_lattice(const LatticeSpec& spec);
LatticePtr make_lattice(int d, int N);

/// Compensated (Kahan) accumulator for long lattice sums.
class KahanSum {
  public:
    void add(double x) {
        double y = x - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// sum over |n| <= N of <n>^p, streamed without materializing the ball.
double ball_weight_sum(int d, int N, double power);

/// Pointwise variance sigma_N = sum over |n| <= N of <n>^(-d).
double point_variance(const LatticeSpec& spec);

/// Truncated Green's function for (1-Delta)^(d/2):
/// sum over |n| <= N of <n>^(-d) cos(n.x), x in [0,2pi)^d.
double green_truncated(const LatticeSpec& spec, std::span<const double> x);

}  // namespace lcgf
