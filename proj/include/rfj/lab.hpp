#ifndef RFJ_LAB_HPP
#define RFJ_LAB_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "rfj/jacobi.hpp"
#include "rfj/series.hpp"
#include "rfj/stable.hpp"
#include "rfj/stochastic_integral.hpp"

namespace rfj {

constexpr std::uint64_t kDefaultSeed = 20240917;

/// A configuration that breaks an experiment's parameter gate or is malformed.
/// The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a bound is requested outside the index range it covers.
class UnsupportedRegime : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ExperimentConfig {
    double alpha = 1.5;
    JacobiParams jacobi{1.0, 1.0};
    WeightedSpaceParams weighted{0.0, 0.0};
    std::string function_id = "exp";
    std::vector<double> y_points{0.3};
    std::vector<std::size_t> n_schedule{2, 4, 8, 16};
    std::size_t n_ref_mult = 4;
    std::size_t grid = 4096;
    std::size_t trials = 2000;
    std::vector<double> epsilons{0.1};
    std::uint64_t seed = kDefaultSeed;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned workers = 0;

    /// Structural checks shared by every experiment. Throws ConfigError.
    void validate() const;
    /// n_ref_mult * max(n_schedule).
    [[nodiscard]] std::size_t n_ref() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// One estimate. n and y are absent for statistics that do not depend on them.
struct ReportRow {
    std::string statistic;
    std::optional<std::size_t> n;
    std::optional<double> y;
    std::optional<double> x;
    std::optional<double> eps;
    double estimate = 0.0;
    double se = 0.0;
    std::size_t trials = 0;
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ConvergenceReport {
    std::string experiment;
    ExperimentConfig config;
    std::size_t n_ref = 0;
    std::vector<ReportRow> rows;
    std::vector<Verdict> verdicts;
    /// Experiment-specific summaries (fitted slopes, bound values, gate notes).
    nlohmann::json extras = nlohmann::json::object();
    double wall_seconds = 0.0;

    [[nodiscard]] bool all_pass() const;
    /// Rows with the given statistic, y and eps, in insertion order.
    [[nodiscard]] std::vector<ReportRow> select(const std::string& statistic,
                                                std::optional<double> y = std::nullopt,
                                                std::optional<double> eps = std::nullopt) const;
};

unsigned resolve_workers(unsigned requested);

/// Runs body(rng, trial) for trial = 0..trials-1 on `workers` threads. Trial i
/// always draws from RngStream(seed, i) and its result lands in slot i, so the
/// output does not depend on the worker count.
template <class Result, class Body>
std::vector<Result> run_trials(std::size_t trials, unsigned workers, std::uint64_t seed,
                               Body body) {
    std::vector<Result> results(trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::size_t i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) {
                RngStream rng(seed, i);
                results[i] = body(rng, i);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(trials);
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(resolve_workers(workers),
                                                          static_cast<unsigned>(trials)));
    if (count == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(count);
        for (unsigned w = 0; w < count; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

/// kernel_partial(y, t, a truncated at n_ref) * rho(t) on the left grid nodes.
std::vector<double> reference_integrand(double y, const CoefficientSet& a, const GridSpec& grid,
                                        std::size_t n_ref);

/// The coupled stand-in for \int f(y, t) rho(t) dX(t, omega): the Stieltjes sum
/// of the kernel truncated at n_ref against the same increments.
/// Throws std::invalid_argument if a holds fewer than n_ref + 1 coefficients.
double reference_integral(double y, const CoefficientSet& a, const StableIncrements& inc,
                          std::size_t n_ref);

/// \int_{-1}^{1} |g(t)|^alpha dt by adaptive Gauss-Kronrod.
double abs_pow_integral(const ScalarFunction& g, double alpha);

struct LemmaBounds {
    double alpha = 0.0;
    /// \int |g|^alpha dt.
    double abs_pow_integral = 0.0;
    /// \int_{|u|>1} (1 - exp(-|u|^alpha I)) / u^2 du, truncated at |u| = u_cutoff.
    double u_integral = 0.0;
    double u_cutoff = 0.0;
    /// Upper bound on the truncated part of the u-integral (2 / u_cutoff).
    double u_tail_bound = 0.0;

    /// C 2^{alpha+1} / ((alpha+1) eps'^alpha) * I. The constant C is unspecified;
    /// C = 1 is a convention.
    [[nodiscard]] double lemma1_rhs(double eps, double eps_prime, double c = 1.0) const;
    /// 4 / (pi (alpha - 1)) I + (2 / pi) u_integral.
    /// Throws UnsupportedRegime for alpha <= 1.
    [[nodiscard]] double lemma2_rhs() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

LemmaBounds lemma_bounds(const ScalarFunction& g, double alpha);
/// g = f * rho for the catalog function f_id.
LemmaBounds lemma_bounds(const std::string& f_id, double alpha, const JacobiParams& p);

/// Ratio of eps' to eps used when reporting the first tail bound.
constexpr double kEpsPrimeRatio = 0.9;

/// E|reference - S_n(y)| over coupled trials for each n and y, with tail
/// probabilities P(|reference - S_n| > eps). Requires alpha in (1, 2] and
/// gamma, delta > 0.
ConvergenceReport mean_convergence_experiment(const ExperimentConfig& cfg);

struct WeakContinuityResult {
    double x = 0.0;
    double y = 0.0;
    double eps = 0.0;
    double probability = 0.0;
    double se = 0.0;
    std::size_t trials = 0;
    /// \int |(f(x, t) - f(y, t)) rho(t)|^alpha dt.
    double abs_pow_integral = 0.0;
    /// First tail bound with C = 1 and eps' = 0.9 eps.
    double lemma1_rhs = 0.0;
};

/// P(|I(x) - I(y)| > eps) for the sum function I at truncation cfg.n_ref().
WeakContinuityResult weak_continuity_experiment(const ExperimentConfig& cfg, double x, double y,
                                                double eps);

/// One weak_continuity_experiment per x (all sharing cfg.seed), with a verdict
/// that probabilities do not increase as |x - y| shrinks.
ConvergenceReport weak_continuity_sweep(const ExperimentConfig& cfg, double y,
                                        const std::vector<double>& xs, double eps);

/// P(|sigma'_n(y) - reference| > eps) per n, with the raw partial sum S_n as a
/// contrast column. Requires alpha = 1, the weighted-space parameter gate and
/// f in C^{(eta,tau)}.
ConvergenceReport cesaro_summability_experiment(const ExperimentConfig& cfg);

/// Tail probabilities of \int f rho dX over cfg.epsilons, the fitted log-log
/// slope, the fitted tail constant and both tail bounds.
/// Requires alpha in [1, 2].
ConvergenceReport tail_bound_experiment(const ExperimentConfig& cfg);

}  // namespace rfj

#endif  // RFJ_LAB_HPP
