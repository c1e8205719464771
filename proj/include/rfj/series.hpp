#ifndef RFJ_SERIES_HPP
#define RFJ_SERIES_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rfj/jacobi.hpp"
#include "rfj/stochastic_integral.hpp"

namespace rfj {

/// Deterministic Fourier-Jacobi coefficients a_0..a_N of f in the orthonormal
/// basis.
struct CoefficientSet {
    std::vector<double> values;
    JacobiParams params;
    std::string source;

    [[nodiscard]] std::size_t max_degree() const { return values.size() - 1; }
    /// First n + 1 coefficients. Throws std::out_of_range if n > max_degree().
    [[nodiscard]] CoefficientSet truncated(std::size_t n) const;
};

void to_json(nlohmann::json& j, const CoefficientSet& set);
void from_json(const nlohmann::json& j, CoefficientSet& set);

/// a_n = sum_j w_j f(x_j) p_n(x_j) over a Gauss-Jacobi rule built for p.
/// Throws std::invalid_argument if the rule has fewer nodes than
/// default_quadrature_order(N), std::domain_error on a non-finite f(x_j).
CoefficientSet fj_coefficients(const ScalarFunction& f, std::size_t N, const JacobiParams& p,
                               const QuadratureRule& rule, std::string source = "f");

/// Builds the default-order rule itself.
CoefficientSet fj_coefficients(const ScalarFunction& f, std::size_t N, const JacobiParams& p,
                               std::string source = "f");

/// f_N(y, t) = sum_k a_k p_k(y) p_k(t) over every stored coefficient.
double kernel_partial(double y, double t, const CoefficientSet& coeffs);

/// S_n(y, omega) = sum_{k<=n} a_k A_k(omega) p_k(y).
/// Throws std::invalid_argument on mismatched Jacobi parameters or n past
/// either coefficient vector.
double partial_sum(double y, const CoefficientSet& a, const RandomCoefficientSet& A,
                   std::size_t n);

enum class SummationFamily { PartialSum, Cesaro, Custom };

/// Lower-triangular theta_{k,n}, 0 <= k <= n - 1, n >= 1, with theta_{n,n} = 0
/// and theta_{k,n} = 0 for k > n.
class SummationMatrix {
public:
    using Generator = std::function<double(std::size_t k, std::size_t n)>;

    /// theta_{k,n} = 1 for k < n.
    static SummationMatrix identity_truncation();
    static SummationMatrix cesaro(unsigned mu);
    static SummationMatrix from_generator(std::string name, Generator g);
    /// rows[n-1] holds theta_{0,n}..theta_{n-1,n}.
    static SummationMatrix from_rows(std::string name, std::vector<std::vector<double>> rows);

    /// Throws std::out_of_range for n == 0 or n beyond explicitly stored rows.
    [[nodiscard]] double entry(std::size_t k, std::size_t n) const;
    /// Largest populated n; SIZE_MAX for generator-backed matrices.
    [[nodiscard]] std::size_t max_n() const;

    [[nodiscard]] SummationFamily family() const { return family_; }
    [[nodiscard]] unsigned mu() const { return mu_; }
    [[nodiscard]] const std::string& name() const { return name_; }

    /// Rows 1..n_max as nested arrays, plus family metadata.
    [[nodiscard]] nlohmann::json to_json(std::size_t n_max) const;
    /// Reads {"rows": [[...], ...]} (optionally "name"); always a custom matrix.
    static SummationMatrix from_json(const nlohmann::json& j);

private:
    SummationMatrix(SummationFamily family, unsigned mu, std::string name, Generator g,
                    std::vector<std::vector<double>> rows);

    SummationFamily family_;
    unsigned mu_ = 0;
    std::string name_;
    Generator generator_;
    std::vector<std::vector<double>> rows_;
};

/// (C, mu) means. For mu = 1, theta_{k,n} = (n - k) / n.
/// Throws std::invalid_argument for mu == 0.
SummationMatrix make_cesaro(unsigned mu);

struct ConditionVerdict {
    std::string name;
    bool pass = false;
    /// Estimated bound constant (T1: final |1 - theta|; T2: sup n|theta_{n-1,n}|;
    /// T3: sup n^2 |second difference|; T4/T5: 0).
    double bound = 0.0;
    std::size_t witness_n = 0;
    std::size_t witness_k = 0;
    double witness_value = 0.0;
    std::string detail;
};

/// Finite-n evidence for the asymptotic conditions T1..T5. A pass is evidence,
/// not proof.
struct ConditionReport {
    std::size_t n_max = 0;
    std::array<ConditionVerdict, 5> conditions;
    bool xi1 = false;  // T1, T2, T3
    bool xi2 = false;  // T1, T2, T3, the same set as xi1; T4 is reported on its own
    bool xi3 = false;  // T1, T5

    [[nodiscard]] const ConditionVerdict& t(int i) const { return conditions.at(i - 1); }
    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

struct ConditionOptions {
    /// T1: |1 - theta_{k,n}| must be non-increasing over n_max/2..n_max and end
    /// below t1_tolerance or below t1_decay_ratio times its value at n_max/2.
    double t1_tolerance = 0.05;
    double t1_decay_ratio = 0.75;
    /// T1 probes k = 0..t1_probes-1.
    std::size_t t1_probes = 3;
    /// T2/T3: sup over the upper half of n may exceed the lower-half sup by at
    /// most this factor.
    double growth_factor = 1.25;
    /// Magnitudes at or below this count as zero for sign tests.
    double zero_tolerance = 1e-12;
};

/// Throws std::invalid_argument for n_max < 2 or beyond theta.max_n().
ConditionReport check_conditions(const SummationMatrix& theta, std::size_t n_max,
                                 const ConditionOptions& options = {});

/// f_n^theta(y) = sum_{k<=n} theta_{k,n} a_k p_k(y).
/// Throws std::invalid_argument if fewer than n coefficients are stored.
double theta_sum(double y, const CoefficientSet& a, const SummationMatrix& theta, std::size_t n);

/// S_n^theta(y, omega) = sum_{k<=n} theta_{k,n} a_k A_k(omega) p_k(y).
double random_theta_sum(double y, const CoefficientSet& a, const RandomCoefficientSet& A,
                        const SummationMatrix& theta, std::size_t n);

/// sigma'_n(y, omega) = (S_0 + ... + S_{n-1}) / n.
/// Throws std::invalid_argument for n == 0.
double cesaro_mean(double y, const CoefficientSet& a, const RandomCoefficientSet& A,
                   std::size_t n);

}  // namespace rfj

#endif  // RFJ_SERIES_HPP
