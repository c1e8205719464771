#ifndef RFJ_STOCHASTIC_INTEGRAL_HPP
#define RFJ_STOCHASTIC_INTEGRAL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "rfj/jacobi.hpp"
#include "rfj/stable.hpp"

namespace rfj {

/// Left-endpoint Stieltjes sum  sum_i g(t_i) dx_i  of a deterministic integrand
/// against one realization of the increments.
/// Throws std::domain_error if g is not finite at a grid node.
double ito_stieltjes(const ScalarFunction& g, const StableIncrements& inc);

/// Same sum with the integrand already sampled at the left grid nodes.
/// Throws std::invalid_argument on a length mismatch.
double stieltjes_sum(std::span<const double> g_at_nodes, std::span<const double> dx);

/// g(t_0), ..., g(t_{m-1}) on the left nodes of the grid.
std::vector<double> sample_on_grid(const ScalarFunction& g, const GridSpec& grid);

/// A_n(omega) = \int p_n(t) rho(t) dX(t, omega), with p_n orthonormal.
double random_fj_coefficient(std::size_t n, const JacobiParams& p, const StableIncrements& inc);

/// p_k(t_i) rho(t_i) for k = 0..max_degree on the left nodes of a grid. Lets
/// many realizations share one evaluation of the basis.
class GridBasis {
public:
    GridBasis(std::size_t max_degree, const JacobiParams& p, const GridSpec& grid);

    [[nodiscard]] std::size_t max_degree() const { return max_degree_; }
    [[nodiscard]] const JacobiParams& params() const { return params_; }
    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    /// Row k: p_k rho at each left node.
    [[nodiscard]] std::span<const double> row(std::size_t k) const;

private:
    std::size_t max_degree_;
    JacobiParams params_;
    GridSpec grid_;
    std::vector<double> values_;
};

/// A_0..A_N from a single realization of the increments.
struct RandomCoefficientSet {
    std::vector<double> values;
    JacobiParams params;
    StableIndex alpha;
    GridSpec grid;
    SeedInfo seed_info;
};

RandomCoefficientSet coefficient_set(std::size_t max_degree, const JacobiParams& p,
                                     const StableIncrements& inc);

/// Uses a precomputed basis; the result is bitwise equal to the overload above.
/// Throws std::invalid_argument if the basis grid differs from inc.grid.
RandomCoefficientSet coefficient_set(const GridBasis& basis, const StableIncrements& inc);

/// {"alpha":..., "gamma":..., "delta":..., "grid":..., "seed":..., "stream":..., "A":[...]}
void to_json(nlohmann::json& j, const RandomCoefficientSet& set);

}  // namespace rfj

#endif  // RFJ_STOCHASTIC_INTEGRAL_HPP
