#ifndef RFJ_CATALOG_HPP
#define RFJ_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include "rfj/jacobi.hpp"

namespace rfj {

/// A named test function for the experiments.
///
/// Ids: "zero", "pK" (orthonormal basis element K), "tD" (monomial t^D),
/// "exp", "abs", "jump" (sign(t - 0.3)), "runge" (1 / (1 + 25 t^2)),
/// "endpoint" ((1 - t)^{-1/4}).
struct CatalogFunction {
    std::string id;
    std::string description;
    ScalarFunction f;
    /// Continuous on the open interval (-1, 1).
    bool continuous = true;
    /// s > 0 when f behaves like (1 - t)^{-s} near t = 1.
    double right_singularity = 0.0;
    /// Set for polynomials.
    std::optional<std::size_t> degree;

    /// Membership in C^{(eta,tau)}: continuous on (-1, 1) with f rho^{(eta,tau)}
    /// vanishing at any end where the weight exponent is positive and f is
    /// unbounded.
    [[nodiscard]] bool member_of(const WeightedSpaceParams& w) const;
};

/// Throws std::invalid_argument for an unknown id.
CatalogFunction catalog_function(const std::string& id, const JacobiParams& p);

std::vector<std::string> catalog_ids();

}  // namespace rfj

#endif  // RFJ_CATALOG_HPP
