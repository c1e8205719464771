#ifndef RFJ_JACOBI_HPP
#define RFJ_JACOBI_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace rfj {

/// Exponents of the Jacobi weight (1 - t)^gamma (1 + t)^delta.
///
/// The library accepts any gamma, delta > -1 (the weight is integrable).
/// Stricter regimes are checked by the experiments that need them via
/// theorem_regime() / lemma_regime().
struct JacobiParams {
    double gamma = 0.0;
    double delta = 0.0;

    /// Throws std::invalid_argument unless gamma > -1 and delta > -1.
    static JacobiParams make(double gamma, double delta);

    /// gamma > 0 and delta > 0: the weight is bounded and vanishes at both ends.
    [[nodiscard]] bool theorem_regime() const { return gamma > 0.0 && delta > 0.0; }
    /// gamma >= -1/2 and delta >= -1/2.
    [[nodiscard]] bool lemma_regime() const { return gamma >= -0.5 && delta >= -0.5; }

    friend bool operator==(const JacobiParams&, const JacobiParams&) = default;
};

/// Exponents (eta, tau) of the weighted sup norm on C^{(eta,tau)}(-1,1).
struct WeightedSpaceParams {
    double eta = 0.0;
    double tau = 0.0;

    /// Throws std::invalid_argument unless eta >= 0 and tau >= 0.
    static WeightedSpaceParams make(double eta, double tau);
};

using ScalarFunction = std::function<double(double)>;

/// (1 - t)^gamma (1 + t)^delta. Throws std::domain_error for |t| > 1.
double weight(double t, const JacobiParams& p);

/// Classical Jacobi polynomial P_n^{(gamma,delta)}(t) by three-term recurrence.
double jacobi_eval(std::size_t n, const JacobiParams& p, double t);

/// h_n = \int P_n^2 rho dt.
double norm_constant(std::size_t n, const JacobiParams& p);

/// p_n = P_n / sqrt(h_n), the orthonormal basis used throughout the library.
double orthonormal_eval(std::size_t n, const JacobiParams& p, double t);

/// p_0(t), ..., p_n(t) in one recurrence pass. Entry k is bitwise equal to
/// orthonormal_eval(k, p, t).
std::vector<double> orthonormal_upto(std::size_t n, const JacobiParams& p, double t);

/// As above, writing into a caller-provided span of length n + 1.
void orthonormal_upto(const JacobiParams& p, double t, std::span<double> out);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t order = 0;

    /// Sum of weights[i] * f(nodes[i]). The weight function is already folded
    /// into the weights.
    [[nodiscard]] double integrate(const ScalarFunction& f) const;
};

void to_json(nlohmann::json& j, const QuadratureRule& rule);
void from_json(const nlohmann::json& j, QuadratureRule& rule);

/// m-node Gauss-Jacobi rule from the eigen-decomposition of the symmetric
/// tridiagonal recurrence matrix (Golub-Welsch). Exact for polynomials of
/// degree <= 2m - 1 against rho^{(gamma,delta)}.
///
/// Throws std::invalid_argument for m == 0 and std::runtime_error if the
/// implicit QL iteration does not converge.
QuadratureRule gauss_jacobi(std::size_t m, const JacobiParams& p);

/// Node count used for coefficient quadrature of degree-n targets.
constexpr std::size_t default_quadrature_order(std::size_t n) {
    return 2 * n + 16 > 64 ? 2 * n + 16 : 64;
}

/// \int_{-1}^{1} rho^{(gamma,delta)}(t) dt.
double weight_integral(const JacobiParams& p);

constexpr std::size_t kDefaultSupSampling = 4097;

/// max |f(t) (1-t)^eta (1+t)^tau| over `sampling` Chebyshev points of the
/// first kind. The points cluster at the endpoints but never touch them, so f
/// only needs to be finite on the open interval.
///
/// Throws std::invalid_argument for sampling < 2 and std::domain_error if f
/// returns a non-finite value at a sample point.
double weighted_sup_norm(const ScalarFunction& f, const WeightedSpaceParams& w,
                         std::size_t sampling = kDefaultSupSampling);

struct GateReport {
    bool passed = false;
    std::vector<std::string> violations;

    [[nodiscard]] std::string describe() const;
};

/// gamma/2 - 1/4 < eta < gamma/2 + 3/4, delta/2 - 1/4 < tau < delta/2 + 3/4,
/// gamma, delta >= -1/2.
GateReport check_parameter_gate(const JacobiParams& p, const WeightedSpaceParams& w);

}  // namespace rfj

#endif  // RFJ_JACOBI_HPP
