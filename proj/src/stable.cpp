#include "rfj/stable.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rfj {

StableIndex::StableIndex(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        std::ostringstream msg;
        msg << "stable index must lie in (0, 2] (got " << alpha << ")";
        throw std::invalid_argument(msg.str());
    }
}

GridSpec::GridSpec(std::size_t m) : m_(m) {
    if (m == 0) {
        throw std::invalid_argument("grid needs at least one interval");
    }
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream)
    : info_{master_seed, stream} {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double RngStream::open_unit() {
    // 53 random bits, offset by half an ulp so 0 and 1 are never produced.
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

double sample_sas(const StableIndex& alpha, double scale, RngStream& rng) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("stable scale must be positive and finite");
    }
    const double a = alpha.value();
    const double v = std::numbers::pi * (rng.open_unit() - 0.5);
    const double w = -std::log(rng.open_unit());
    if (alpha.is_gaussian()) {
        return scale * 2.0 * std::sin(v) * std::sqrt(w);
    }
    if (alpha.is_cauchy()) {
        return scale * std::tan(v);
    }
    // Chambers-Mallows-Stuck, symmetric case.
    const double x = std::sin(a * v) / std::pow(std::cos(v), 1.0 / a) *
                     std::pow(std::cos((1.0 - a) * v) / w, (1.0 - a) / a);
    return scale * x;
}

StableIncrements sample_increments(const StableIndex& alpha, const GridSpec& grid,
                                   RngStream& rng) {
    StableIncrements inc{alpha, grid, {}, rng.seed_info()};
    const double scale = std::pow(grid.step(), 1.0 / alpha.value());
    inc.dx.resize(grid.intervals());
    for (double& d : inc.dx) {
        d = sample_sas(alpha, scale, rng);
    }
    return inc;
}

void write_increments_csv(std::ostream& out, const StableIncrements& inc) {
    out << "t,dx\n";
    char line[64];
    for (std::size_t i = 0; i < inc.dx.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", inc.grid.node(i), inc.dx[i]);
        out << line;
    }
}

}  // namespace rfj
