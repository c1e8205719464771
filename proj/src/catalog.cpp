#include "rfj/catalog.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rfj {

namespace {

std::optional<std::size_t> parse_suffix(const std::string& id, char prefix) {
    if (id.size() < 2 || id[0] != prefix) {
        return std::nullopt;
    }
    std::size_t value = 0;
    const char* begin = id.data() + 1;
    const char* end = id.data() + id.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

bool CatalogFunction::member_of(const WeightedSpaceParams& w) const {
    if (!continuous) {
        return false;
    }
    if (right_singularity > 0.0) {
        return w.eta > right_singularity;
    }
    return true;
}

CatalogFunction catalog_function(const std::string& id, const JacobiParams& p) {
    if (id == "zero") {
        return {id, "f = 0", [](double) { return 0.0; }, true, 0.0, 0};
    }
    if (auto k = parse_suffix(id, 'p')) {
        const std::size_t n = *k;
        return {id, "orthonormal Jacobi polynomial p_" + std::to_string(n),
                [n, p](double t) { return orthonormal_eval(n, p, t); }, true, 0.0, n};
    }
    if (auto d = parse_suffix(id, 't')) {
        const std::size_t n = *d;
        return {id, "t^" + std::to_string(n),
                [n](double t) { return std::pow(t, static_cast<double>(n)); }, true, 0.0, n};
    }
    if (id == "exp") {
        return {id, "exp(t)", [](double t) { return std::exp(t); }, true, 0.0, std::nullopt};
    }
    if (id == "abs") {
        return {id, "|t|", [](double t) { return std::abs(t); }, true, 0.0, std::nullopt};
    }
    if (id == "jump") {
        return {id, "sign(t - 0.3)",
                [](double t) { return t > 0.3 ? 1.0 : (t < 0.3 ? -1.0 : 0.0); }, false, 0.0,
                std::nullopt};
    }
    if (id == "runge") {
        return {id, "1 / (1 + 25 t^2)", [](double t) { return 1.0 / (1.0 + 25.0 * t * t); },
                true, 0.0, std::nullopt};
    }
    if (id == "endpoint") {
        return {id, "(1 - t)^(-1/4)", [](double t) { return std::pow(1.0 - t, -0.25); }, true,
                0.25, std::nullopt};
    }
    throw std::invalid_argument("unknown catalog function '" + id +
                                "' (expected zero, pK, tD, exp, abs, jump, runge, endpoint)");
}

std::vector<std::string> catalog_ids() {
    return {"zero", "pK", "tD", "exp", "abs", "jump", "runge", "endpoint"};
}

}  // namespace rfj
