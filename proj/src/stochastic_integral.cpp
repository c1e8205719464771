#include "rfj/stochastic_integral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rfj {

std::vector<double> sample_on_grid(const ScalarFunction& g, const GridSpec& grid) {
    std::vector<double> values(grid.intervals());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double t = grid.node(i);
        values[i] = g(t);
        if (!std::isfinite(values[i])) {
            std::ostringstream msg;
            msg << "integrand is not finite at grid node t=" << t;
            throw std::domain_error(msg.str());
        }
    }
    return values;
}

double stieltjes_sum(std::span<const double> g_at_nodes, std::span<const double> dx) {
    if (g_at_nodes.size() != dx.size()) {
        throw std::invalid_argument("integrand samples and increments differ in length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        sum += g_at_nodes[i] * dx[i];
    }
    return sum;
}

double ito_stieltjes(const ScalarFunction& g, const StableIncrements& inc) {
    return stieltjes_sum(sample_on_grid(g, inc.grid), inc.dx);
}

double random_fj_coefficient(std::size_t n, const JacobiParams& p, const StableIncrements& inc) {
    return ito_stieltjes([&](double t) { return orthonormal_eval(n, p, t) * weight(t, p); }, inc);
}

GridBasis::GridBasis(std::size_t max_degree, const JacobiParams& p, const GridSpec& grid)
    : max_degree_(max_degree), params_(p), grid_(grid) {
    const std::size_t m = grid.intervals();
    values_.assign((max_degree + 1) * m, 0.0);
    std::vector<double> column(max_degree + 1);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = grid.node(i);
        orthonormal_upto(p, t, column);
        const double rho = weight(t, p);
        for (std::size_t k = 0; k <= max_degree; ++k) {
            values_[k * m + i] = column[k] * rho;
        }
    }
}

std::span<const double> GridBasis::row(std::size_t k) const {
    if (k > max_degree_) {
        throw std::out_of_range("basis row beyond the precomputed degree");
    }
    const std::size_t m = grid_.intervals();
    return std::span<const double>(values_).subspan(k * m, m);
}

RandomCoefficientSet coefficient_set(const GridBasis& basis, const StableIncrements& inc) {
    if (!(basis.grid() == inc.grid)) {
        throw std::invalid_argument("basis and increments live on different grids");
    }
    RandomCoefficientSet set{{}, basis.params(), inc.alpha, inc.grid, inc.seed_info};
    set.values.resize(basis.max_degree() + 1);
    for (std::size_t k = 0; k <= basis.max_degree(); ++k) {
        set.values[k] = stieltjes_sum(basis.row(k), inc.dx);
    }
    return set;
}

RandomCoefficientSet coefficient_set(std::size_t max_degree, const JacobiParams& p,
                                     const StableIncrements& inc) {
    return coefficient_set(GridBasis(max_degree, p, inc.grid), inc);
}

void to_json(nlohmann::json& j, const RandomCoefficientSet& set) {
    j = nlohmann::json{{"alpha", set.alpha.value()},
                       {"gamma", set.params.gamma},
                       {"delta", set.params.delta},
                       {"grid", set.grid.intervals()},
                       {"seed", set.seed_info.master_seed},
                       {"stream", set.seed_info.stream},
                       {"A", set.values}};
}

}  // namespace rfj
