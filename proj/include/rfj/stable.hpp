#ifndef RFJ_STABLE_HPP
#define RFJ_STABLE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace rfj {

/// Index alpha in (0, 2] of a symmetric stable law.
class StableIndex {
public:
    /// Throws std::invalid_argument unless 0 < alpha <= 2.
    explicit StableIndex(double alpha);

    [[nodiscard]] double value() const { return alpha_; }
    [[nodiscard]] bool is_cauchy() const { return alpha_ == 1.0; }
    [[nodiscard]] bool is_gaussian() const { return alpha_ == 2.0; }

    friend bool operator==(const StableIndex&, const StableIndex&) = default;

private:
    double alpha_;
};

/// Uniform grid t_i = -1 + i * dt, i = 0..m, dt = 2 / m.
class GridSpec {
public:
    /// Throws std::invalid_argument for m == 0.
    explicit GridSpec(std::size_t m);

    [[nodiscard]] std::size_t intervals() const { return m_; }
    [[nodiscard]] double step() const { return 2.0 / static_cast<double>(m_); }
    [[nodiscard]] double node(std::size_t i) const {
        return -1.0 + static_cast<double>(i) * step();
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    std::size_t m_;
};

/// Where a random stream came from: the experiment's master seed and the trial
/// index it was derived for.
struct SeedInfo {
    std::uint64_t master_seed = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const SeedInfo&, const SeedInfo&) = default;
};

/// 64-bit Mersenne Twister with a stream derived deterministically from
/// (master seed, stream index). Uniforms are built from the raw bits so the
/// sequence does not depend on the standard library's distribution classes.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream);

    /// Uniform on the open interval (0, 1).
    double open_unit();

    [[nodiscard]] const SeedInfo& seed_info() const { return info_; }

private:
    SeedInfo info_;
    std::mt19937_64 engine_;
};

/// One draw from S(alpha, beta = 0, scale, 0), characteristic function
/// exp(-scale^alpha |u|^alpha). alpha = 2 gives N(0, 2 scale^2) and alpha = 1
/// the Cauchy law; both are sampled by their exact special cases.
double sample_sas(const StableIndex& alpha, double scale, RngStream& rng);

/// Independent increments of X(t, omega) over a uniform grid on [-1, 1].
struct StableIncrements {
    StableIndex alpha;
    GridSpec grid;
    std::vector<double> dx;
    SeedInfo seed_info;
};

/// grid.intervals() independent symmetric stable draws with scale dt^{1/alpha}.
StableIncrements sample_increments(const StableIndex& alpha, const GridSpec& grid,
                                   RngStream& rng);

/// CSV dump: header "t,dx", then one row (t_i, dx_i) per interval with t_i the
/// left node, numbers written with 17 significant digits.
void write_increments_csv(std::ostream& out, const StableIncrements& inc);

}  // namespace rfj

#endif  // RFJ_STABLE_HPP
