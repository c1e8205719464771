#include "rfj/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rfj {

JacobiParams JacobiParams::make(double gamma, double delta) {
    if (!(gamma > -1.0) || !(delta > -1.0)) {
        std::ostringstream msg;
        msg << "Jacobi exponents must exceed -1 (got gamma=" << gamma << ", delta=" << delta << ")";
        throw std::invalid_argument(msg.str());
    }
    return JacobiParams{gamma, delta};
}

WeightedSpaceParams WeightedSpaceParams::make(double eta, double tau) {
    if (!(eta >= 0.0) || !(tau >= 0.0)) {
        std::ostringstream msg;
        msg << "weighted-space exponents must be non-negative (got eta=" << eta << ", tau=" << tau
            << ")";
        throw std::invalid_argument(msg.str());
    }
    return WeightedSpaceParams{eta, tau};
}

double weight(double t, const JacobiParams& p) {
    if (!(std::abs(t) <= 1.0)) {
        throw std::domain_error("Jacobi weight evaluated outside [-1, 1]");
    }
    return std::pow(1.0 - t, p.gamma) * std::pow(1.0 + t, p.delta);
}

double weight_integral(const JacobiParams& p) {
    const double a = p.gamma;
    const double b = p.delta;
    return std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
           std::tgamma(a + b + 2.0);
}

namespace {

// h_k / h_{k-1} for k >= 1.
double norm_ratio(std::size_t k, double a, double b) {
    const double n = static_cast<double>(k);
    if (k == 1) {
        return (a + 1.0) * (b + 1.0) / (a + b + 3.0);
    }
    return (2.0 * n + a + b - 1.0) / (2.0 * n + a + b + 1.0) * (n + a) * (n + b) /
           (n * (n + a + b));
}

// Classical values P_0..P_n into out (size n + 1).
void classical_upto(const JacobiParams& p, double t, std::span<double> out) {
    const double a = p.gamma;
    const double b = p.delta;
    const std::size_t n = out.size() - 1;
    out[0] = 1.0;
    if (n == 0) {
        return;
    }
    out[1] = 0.5 * ((a + b + 2.0) * t + (a - b));
    for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + a + b;
        const double c1 = 2.0 * kk * (kk + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * t + a * a - b * b);
        const double c3 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * s;
        out[k] = (c2 * out[k - 1] - c3 * out[k - 2]) / c1;
    }
}

void check_domain(double t) {
    if (!(std::abs(t) <= 1.0)) {
        throw std::domain_error("Jacobi polynomial evaluated outside [-1, 1]");
    }
}

}  // namespace

double jacobi_eval(std::size_t n, const JacobiParams& p, double t) {
    check_domain(t);
    std::vector<double> values(n + 1);
    classical_upto(p, t, values);
    return values[n];
}

double norm_constant(std::size_t n, const JacobiParams& p) {
    double h = weight_integral(p);
    for (std::size_t k = 1; k <= n; ++k) {
        h *= norm_ratio(k, p.gamma, p.delta);
    }
    return h;
}

void orthonormal_upto(const JacobiParams& p, double t, std::span<double> out) {
    if (out.empty()) {
        throw std::invalid_argument("orthonormal_upto needs room for at least p_0");
    }
    check_domain(t);
    classical_upto(p, t, out);
    double h = weight_integral(p);
    out[0] /= std::sqrt(h);
    for (std::size_t k = 1; k < out.size(); ++k) {
        h *= norm_ratio(k, p.gamma, p.delta);
        out[k] /= std::sqrt(h);
    }
}

std::vector<double> orthonormal_upto(std::size_t n, const JacobiParams& p, double t) {
    std::vector<double> values(n + 1);
    orthonormal_upto(p, t, values);
    return values;
}

double orthonormal_eval(std::size_t n, const JacobiParams& p, double t) {
    return orthonormal_upto(n, p, t)[n];
}

double QuadratureRule::integrate(const ScalarFunction& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += weights[i] * f(nodes[i]);
    }
    return sum;
}

void to_json(nlohmann::json& j, const QuadratureRule& rule) {
    j = nlohmann::json{{"nodes", rule.nodes}, {"weights", rule.weights}};
}

void from_json(const nlohmann::json& j, QuadratureRule& rule) {
    j.at("nodes").get_to(rule.nodes);
    j.at("weights").get_to(rule.weights);
    if (rule.nodes.size() != rule.weights.size()) {
        throw std::invalid_argument("quadrature rule has mismatched node and weight counts");
    }
    rule.order = rule.nodes.size();
}

namespace {

// Implicit QL on a symmetric tridiagonal matrix (diag d, off-diagonal e with
// e[i] coupling i and i+1). Only the first component of each eigenvector is
// tracked, which is all the Gauss weights need.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    constexpr int kMaxIterations = 60;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) {
                    break;
                }
            }
            if (m == l) {
                break;
            }
            if (iter++ == kMaxIterations) {
                throw std::runtime_error("Golub-Welsch eigen-solve did not converge");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double shift = 0.0;
            int i = m - 1;
            bool underflow = false;
            for (; i >= l; --i) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= shift;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - shift;
                r = (d[i] - g) * s + 2.0 * c * b;
                shift = s * r;
                d[i + 1] = g + shift;
                g = c * r - b;
                const double zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if (underflow) {
                continue;
            }
            d[l] -= shift;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

}  // namespace

QuadratureRule gauss_jacobi(std::size_t m, const JacobiParams& p) {
    if (m == 0) {
        throw std::invalid_argument("Gauss-Jacobi rule needs at least one node");
    }
    const double a = p.gamma;
    const double b = p.delta;
    std::vector<double> diag(m);
    std::vector<double> off(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double n = static_cast<double>(k);
        const double s = 2.0 * n + a + b;
        diag[k] = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (std::size_t k = 1; k < m; ++k) {
        const double n = static_cast<double>(k);
        const double s = 2.0 * n + a + b;
        double beta = 0.0;
        if (k == 1) {
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
        } else {
            beta = 4.0 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1.0) * (s - 1.0));
        }
        off[k - 1] = std::sqrt(beta);
    }
    std::vector<double> first(m, 0.0);
    first[0] = 1.0;
    tridiagonal_ql(diag, off, first);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

    const double mass = weight_integral(p);
    QuadratureRule rule;
    rule.order = m;
    rule.nodes.reserve(m);
    rule.weights.reserve(m);
    for (std::size_t idx : order) {
        rule.nodes.push_back(diag[idx]);
        rule.weights.push_back(mass * first[idx] * first[idx]);
    }
    return rule;
}

double weighted_sup_norm(const ScalarFunction& f, const WeightedSpaceParams& w,
                         std::size_t sampling) {
    if (sampling < 2) {
        throw std::invalid_argument("weighted_sup_norm needs at least two sample points");
    }
    const double count = static_cast<double>(sampling);
    double best = 0.0;
    for (std::size_t j = 0; j < sampling; ++j) {
        const double t =
            std::cos(std::numbers::pi * (2.0 * static_cast<double>(j) + 1.0) / (2.0 * count));
        const double value = f(t);
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "non-finite function value at t=" << t;
            throw std::domain_error(msg.str());
        }
        const double weighted =
            std::abs(value * std::pow(1.0 - t, w.eta) * std::pow(1.0 + t, w.tau));
        best = std::max(best, weighted);
    }
    return best;
}

std::string GateReport::describe() const {
    if (passed) {
        return "parameter gate satisfied";
    }
    std::ostringstream out;
    out << "parameter gate violated:";
    for (const auto& v : violations) {
        out << "\n  - " << v;
    }
    return out.str();
}

GateReport check_parameter_gate(const JacobiParams& p, const WeightedSpaceParams& w) {
    GateReport report;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) {
            report.violations.push_back(what);
        }
    };
    require(p.gamma >= -0.5, "gamma >= -1/2");
    require(p.delta >= -0.5, "delta >= -1/2");
    auto bound = [](double x) {
        std::ostringstream o;
        o << x;
        return o.str();
    };
    require(p.gamma / 2.0 - 0.25 < w.eta,
            "eta > gamma/2 - 1/4 (" + bound(w.eta) + " <= " + bound(p.gamma / 2.0 - 0.25) + ")");
    require(w.eta < p.gamma / 2.0 + 0.75,
            "eta < gamma/2 + 3/4 (" + bound(w.eta) + " >= " + bound(p.gamma / 2.0 + 0.75) + ")");
    require(p.delta / 2.0 - 0.25 < w.tau,
            "tau > delta/2 - 1/4 (" + bound(w.tau) + " <= " + bound(p.delta / 2.0 - 0.25) + ")");
    require(w.tau < p.delta / 2.0 + 0.75,
            "tau < delta/2 + 3/4 (" + bound(w.tau) + " >= " + bound(p.delta / 2.0 + 0.75) + ")");
    report.passed = report.violations.empty();
    return report;
}

}  // namespace rfj
