#include "rfj/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rfj {

CoefficientSet CoefficientSet::truncated(std::size_t n) const {
    if (n >= values.size()) {
        throw std::out_of_range("cannot truncate coefficient set beyond its length");
    }
    return CoefficientSet{{values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n + 1)},
                          params,
                          source};
}

void to_json(nlohmann::json& j, const CoefficientSet& set) {
    j = nlohmann::json{{"gamma", set.params.gamma},
                       {"delta", set.params.delta},
                       {"source", set.source},
                       {"a", set.values}};
}

void from_json(const nlohmann::json& j, CoefficientSet& set) {
    set.params = JacobiParams::make(j.at("gamma").get<double>(), j.at("delta").get<double>());
    set.source = j.value("source", std::string("f"));
    j.at("a").get_to(set.values);
    if (set.values.empty()) {
        throw std::invalid_argument("coefficient set has no entries");
    }
}

CoefficientSet fj_coefficients(const ScalarFunction& f, std::size_t N, const JacobiParams& p,
                               const QuadratureRule& rule, std::string source) {
    if (rule.nodes.size() < default_quadrature_order(N)) {
        throw std::invalid_argument("quadrature rule too coarse for the requested degree");
    }
    CoefficientSet set{std::vector<double>(N + 1, 0.0), p, std::move(source)};
    std::vector<double> basis(N + 1);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double x = rule.nodes[j];
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            std::ostringstream msg;
            msg << "function is not finite at quadrature node " << x;
            throw std::domain_error(msg.str());
        }
        orthonormal_upto(p, x, basis);
        for (std::size_t n = 0; n <= N; ++n) {
            set.values[n] += rule.weights[j] * fx * basis[n];
        }
    }
    return set;
}

CoefficientSet fj_coefficients(const ScalarFunction& f, std::size_t N, const JacobiParams& p,
                               std::string source) {
    return fj_coefficients(f, N, p, gauss_jacobi(default_quadrature_order(N), p),
                           std::move(source));
}

double kernel_partial(double y, double t, const CoefficientSet& coeffs) {
    const std::size_t n = coeffs.values.size() - 1;
    const auto py = orthonormal_upto(n, coeffs.params, y);
    const auto pt = orthonormal_upto(n, coeffs.params, t);
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        sum += coeffs.values[k] * py[k] * pt[k];
    }
    return sum;
}

namespace {

void require_compatible(const CoefficientSet& a, const RandomCoefficientSet& A, std::size_t terms) {
    if (!(a.params == A.params)) {
        throw std::invalid_argument("deterministic and random coefficients use different Jacobi parameters");
    }
    if (terms > a.values.size() || terms > A.values.size()) {
        throw std::invalid_argument("sum needs more coefficients than are stored");
    }
}

}  // namespace

double partial_sum(double y, const CoefficientSet& a, const RandomCoefficientSet& A,
                   std::size_t n) {
    require_compatible(a, A, n + 1);
    const auto py = orthonormal_upto(n, a.params, y);
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        sum += a.values[k] * A.values[k] * py[k];
    }
    return sum;
}

SummationMatrix::SummationMatrix(SummationFamily family, unsigned mu, std::string name,
                                 Generator g, std::vector<std::vector<double>> rows)
    : family_(family),
      mu_(mu),
      name_(std::move(name)),
      generator_(std::move(g)),
      rows_(std::move(rows)) {}

SummationMatrix SummationMatrix::identity_truncation() {
    return SummationMatrix(SummationFamily::PartialSum, 0, "identity",
                           [](std::size_t, std::size_t) { return 1.0; }, {});
}

SummationMatrix SummationMatrix::cesaro(unsigned mu) {
    if (mu == 0) {
        throw std::invalid_argument("Cesaro order must be at least 1");
    }
    // theta_{k,n} = A^mu_{n-1-k} / A^mu_{n-1},  A^mu_j = binom(j + mu, mu).
    auto g = [mu](std::size_t k, std::size_t n) {
        if (mu == 1) {
            return static_cast<double>(n - k) / static_cast<double>(n);
        }
        double ratio = 1.0;
        for (unsigned i = 1; i <= mu; ++i) {
            ratio *= static_cast<double>(n - 1 - k + i) / static_cast<double>(n - 1 + i);
        }
        return ratio;
    };
    return SummationMatrix(SummationFamily::Cesaro, mu, "cesaro" + std::to_string(mu), g, {});
}

SummationMatrix SummationMatrix::from_generator(std::string name, Generator g) {
    return SummationMatrix(SummationFamily::Custom, 0, std::move(name), std::move(g), {});
}

SummationMatrix SummationMatrix::from_rows(std::string name,
                                           std::vector<std::vector<double>> rows) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != r + 1) {
            std::ostringstream msg;
            msg << "summation matrix row for n=" << r + 1 << " must hold " << r + 1
                << " entries (got " << rows[r].size() << ")";
            throw std::invalid_argument(msg.str());
        }
        for (double v : rows[r]) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("summation matrix entries must be finite");
            }
        }
    }
    return SummationMatrix(SummationFamily::Custom, 0, std::move(name), {}, std::move(rows));
}

SummationMatrix make_cesaro(unsigned mu) { return SummationMatrix::cesaro(mu); }

double SummationMatrix::entry(std::size_t k, std::size_t n) const {
    if (n == 0) {
        throw std::out_of_range("summation matrix rows start at n = 1");
    }
    if (k >= n) {
        return 0.0;
    }
    if (generator_) {
        return generator_(k, n);
    }
    if (n > rows_.size()) {
        throw std::out_of_range("summation matrix row not populated");
    }
    return rows_[n - 1][k];
}

std::size_t SummationMatrix::max_n() const {
    return generator_ ? std::numeric_limits<std::size_t>::max() : rows_.size();
}

nlohmann::json SummationMatrix::to_json(std::size_t n_max) const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<double> row(n);
        for (std::size_t k = 0; k < n; ++k) {
            row[k] = entry(k, n);
        }
        rows.push_back(row);
    }
    const char* family = family_ == SummationFamily::PartialSum ? "partial-sum"
                         : family_ == SummationFamily::Cesaro   ? "cesaro"
                                                                : "custom";
    nlohmann::json j{{"family", family}, {"name", name_}, {"rows", rows}};
    if (family_ == SummationFamily::Cesaro) {
        j["mu"] = mu_;
    }
    return j;
}

SummationMatrix SummationMatrix::from_json(const nlohmann::json& j) {
    return from_rows(j.value("name", std::string("custom")),
                     j.at("rows").get<std::vector<std::vector<double>>>());
}

namespace {

int sign_of(double x, double zero_tolerance) {
    if (std::abs(x) <= zero_tolerance) {
        return 0;
    }
    return x > 0.0 ? 1 : -1;
}

// Delta^2 theta_{k-1,n} = theta_{k+1,n} - 2 theta_{k,n} + theta_{k-1,n}.
double second_difference(const SummationMatrix& theta, std::size_t k, std::size_t n) {
    return theta.entry(k + 1, n) - 2.0 * theta.entry(k, n) + theta.entry(k - 1, n);
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct GrowthCheck {
    bool pass = false;
    double sup = 0.0;
    std::size_t witness_n = 0;
    double lower_sup = 0.0;
};

// Bounded-sequence heuristic: the sup over n in (n_max/2, n_max] may exceed the
// sup over n <= n_max/2 by at most growth_factor.
GrowthCheck bounded_growth(const std::vector<double>& seq, std::size_t first_n, std::size_t n_max,
                           double growth_factor) {
    GrowthCheck out;
    const std::size_t half = n_max / 2;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t upper_n = n_max;
    for (std::size_t n = first_n; n <= n_max; ++n) {
        const double v = seq[n];
        if (n <= half) {
            lower = std::max(lower, v);
        } else if (v >= upper) {
            upper = v;
            upper_n = n;
        }
        if (v >= out.sup) {
            out.sup = v;
        }
    }
    out.lower_sup = lower;
    out.witness_n = upper_n;
    out.pass = upper <= growth_factor * lower + 1e-9;
    return out;
}

}  // namespace

ConditionReport check_conditions(const SummationMatrix& theta, std::size_t n_max,
                                 const ConditionOptions& options) {
    if (n_max < 2) {
        throw std::invalid_argument("condition check needs n_max >= 2");
    }
    if (n_max > theta.max_n()) {
        throw std::invalid_argument("summation matrix is not populated through n_max");
    }
    ConditionReport report;
    report.n_max = n_max;

    // T1: |1 - theta_{k,n}| -> 0 for fixed k.
    {
        ConditionVerdict& v = report.conditions[0];
        v.name = "T1";
        v.pass = true;
        const std::size_t probes = std::min(options.t1_probes, n_max - 1);
        double worst = 0.0;
        for (std::size_t k = 0; k < probes; ++k) {
            const std::size_t start = std::max(k + 1, n_max / 2);
            const double first = std::abs(1.0 - theta.entry(k, start));
            double last = first;
            bool decreasing = true;
            for (std::size_t n = start + 1; n <= n_max; ++n) {
                const double d = std::abs(1.0 - theta.entry(k, n));
                decreasing = decreasing && d <= last + 1e-12;
                last = d;
            }
            worst = std::max(worst, last);
            const bool ok = decreasing && (last <= options.t1_tolerance ||
                                           last <= options.t1_decay_ratio * first);
            if (!ok && v.pass) {
                v.pass = false;
                v.witness_k = k;
                v.witness_n = n_max;
                v.witness_value = last;
                v.detail = std::string("|1 - theta_{k,n}| ") +
                           (decreasing ? "does not decay" : "is not decreasing") +
                           " for k=" + std::to_string(k) + ": " + format_number(last) +
                           " at n=" + std::to_string(n_max);
            } else if (v.pass && last >= worst) {
                v.witness_k = k;
                v.witness_n = n_max;
                v.witness_value = last;
            }
        }
        v.bound = worst;
        if (v.pass) {
            v.detail = "max_k |1 - theta_{k,n_max}| = " + format_number(worst);
        }
    }

    // T2: n |theta_{n-1,n}| bounded.
    {
        ConditionVerdict& v = report.conditions[1];
        v.name = "T2";
        std::vector<double> seq(n_max + 1, 0.0);
        for (std::size_t n = 1; n <= n_max; ++n) {
            seq[n] = static_cast<double>(n) * std::abs(theta.entry(n - 1, n));
        }
        const auto g = bounded_growth(seq, 1, n_max, options.growth_factor);
        v.pass = g.pass;
        v.bound = g.sup;
        v.witness_n = g.witness_n;
        v.witness_k = g.witness_n - 1;
        v.witness_value = seq[g.witness_n];
        v.detail = "n*|theta_{n-1,n}| = " + format_number(v.witness_value) + " at n=" +
                   std::to_string(v.witness_n) + " (sup over n <= n_max/2: " +
                   format_number(g.lower_sup) + ")";
    }

    // T3: n^2 |Delta^2 theta_{k-1,n}| bounded, k = 1..n-1.
    std::vector<std::vector<double>> second(n_max + 1);
    {
        ConditionVerdict& v = report.conditions[2];
        v.name = "T3";
        std::vector<double> seq(n_max + 1, 0.0);
        std::vector<std::size_t> arg_k(n_max + 1, 0);
        for (std::size_t n = 2; n <= n_max; ++n) {
            second[n].resize(n, 0.0);
            for (std::size_t k = 1; k + 1 <= n; ++k) {
                const double d2 = second_difference(theta, k, n);
                second[n][k] = d2;
                const double scaled = static_cast<double>(n) * static_cast<double>(n) * std::abs(d2);
                if (scaled > seq[n]) {
                    seq[n] = scaled;
                    arg_k[n] = k;
                }
            }
        }
        const auto g = bounded_growth(seq, 2, n_max, options.growth_factor);
        v.pass = g.pass;
        v.bound = g.sup;
        v.witness_n = g.witness_n;
        v.witness_k = arg_k[g.witness_n];
        v.witness_value = seq[g.witness_n];
        v.detail = "n^2*|Delta^2 theta_{k-1,n}| = " + format_number(v.witness_value) + " at n=" +
                   std::to_string(v.witness_n) + ", k=" + std::to_string(v.witness_k) +
                   " (sup over n <= n_max/2: " + format_number(g.lower_sup) + ")";
    }

    // T4: Delta^2 theta_{k-1,n} never takes both signs.
    {
        ConditionVerdict& v = report.conditions[3];
        v.name = "T4";
        v.pass = true;
        int seen = 0;
        for (std::size_t n = 2; n <= n_max && v.pass; ++n) {
            for (std::size_t k = 1; k + 1 <= n; ++k) {
                const int s = sign_of(second[n][k], options.zero_tolerance);
                if (s == 0) {
                    continue;
                }
                if (seen == 0) {
                    seen = s;
                } else if (s != seen) {
                    v.pass = false;
                    v.witness_n = n;
                    v.witness_k = k;
                    v.witness_value = second[n][k];
                    v.detail = "Delta^2 theta_{k-1,n} = " + format_number(second[n][k]) +
                               " at n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                               " against earlier sign " + (seen > 0 ? "+" : "-");
                    break;
                }
            }
        }
        if (v.pass) {
            v.detail = seen == 0 ? "Delta^2 theta identically zero"
                                 : std::string("Delta^2 theta has constant sign ") +
                                       (seen > 0 ? "+" : "-");
        }
    }

    // T5: sgn Delta^2 theta_{k-1,n} = sgn theta_{n-1,n}; zero agrees with either.
    {
        ConditionVerdict& v = report.conditions[4];
        v.name = "T5";
        v.pass = true;
        for (std::size_t n = 2; n <= n_max && v.pass; ++n) {
            const int target = sign_of(theta.entry(n - 1, n), options.zero_tolerance);
            for (std::size_t k = 1; k + 1 <= n; ++k) {
                const int s = sign_of(second[n][k], options.zero_tolerance);
                if (s != 0 && target != 0 && s != target) {
                    v.pass = false;
                    v.witness_n = n;
                    v.witness_k = k;
                    v.witness_value = second[n][k];
                    v.detail = "Delta^2 theta_{k-1,n} = " + format_number(second[n][k]) +
                               " at n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                               " disagrees in sign with theta_{n-1,n} = " +
                               format_number(theta.entry(n - 1, n));
                    break;
                }
            }
        }
        if (v.pass) {
            v.detail = "no strict sign disagreement through n_max";
        }
    }

    const auto& c = report.conditions;
    report.xi1 = c[0].pass && c[1].pass && c[2].pass;
    report.xi2 = c[0].pass && c[1].pass && c[2].pass;
    report.xi3 = c[0].pass && c[4].pass;
    return report;
}

std::string ConditionReport::to_text() const {
    std::ostringstream out;
    out << "summation-matrix conditions through n_max=" << n_max << "\n";
    for (const auto& v : conditions) {
        out << "  " << v.name << ": " << (v.pass ? "pass" : "FAIL") << "  " << v.detail << "\n";
    }
    out << "  Xi1 (T1,T2,T3): " << (xi1 ? "pass" : "fail") << "\n";
    out << "  Xi2 (T1,T2,T3): " << (xi2 ? "pass" : "fail") << "\n";
    out << "  Xi3 (T1,T5): " << (xi3 ? "pass" : "fail") << "\n";
    return out.str();
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& v : conditions) {
        conds.push_back({{"name", v.name},
                         {"pass", v.pass},
                         {"bound", v.bound},
                         {"witness_n", v.witness_n},
                         {"witness_k", v.witness_k},
                         {"witness_value", v.witness_value},
                         {"detail", v.detail}});
    }
    return {{"n_max", n_max}, {"conditions", conds}, {"xi1", xi1}, {"xi2", xi2}, {"xi3", xi3}};
}

double theta_sum(double y, const CoefficientSet& a, const SummationMatrix& theta, std::size_t n) {
    if (n == 0 || n > a.values.size()) {
        throw std::invalid_argument("theta sum needs 1 <= n <= number of coefficients");
    }
    const auto py = orthonormal_upto(n - 1, a.params, y);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += theta.entry(k, n) * a.values[k] * py[k];
    }
    return sum;
}

double random_theta_sum(double y, const CoefficientSet& a, const RandomCoefficientSet& A,
                        const SummationMatrix& theta, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("theta sum needs n >= 1");
    }
    require_compatible(a, A, n);
    const auto py = orthonormal_upto(n - 1, a.params, y);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += theta.entry(k, n) * a.values[k] * A.values[k] * py[k];
    }
    return sum;
}

double cesaro_mean(double y, const CoefficientSet& a, const RandomCoefficientSet& A,
                   std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("Cesaro mean needs n >= 1");
    }
    require_compatible(a, A, n);
    const auto py = orthonormal_upto(n - 1, a.params, y);
    double partial = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        partial += a.values[j] * A.values[j] * py[j];
        total += partial;
    }
    return total / static_cast<double>(n);
}

}  // namespace rfj
