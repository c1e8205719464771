#ifndef RFJ_TESTS_STATS_HPP
#define RFJ_TESTS_STATS_HPP

// Test-side statistics: goodness-of-fit tests and an independent symmetric
// stable CDF. Nothing here is used by the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rfj_test {

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) {
        s += (v - m) * (v - m);
    }
    return s / static_cast<double>(x.size() - 1);
}

inline double median(std::vector<double> x) {
    const auto mid = x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2);
    std::nth_element(x.begin(), mid, x.end());
    if (x.size() % 2 == 1) {
        return *mid;
    }
    const double hi = *mid;
    const double lo = *std::max_element(x.begin(), mid);
    return 0.5 * (lo + hi);
}

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) {
        return 1.0;
    }
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Stephens' small-sample correction of the KS statistic.
inline double ks_p_value(double d, double n_eff) {
    const double s = std::sqrt(n_eff);
    return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

struct KsResult {
    double d = 0.0;
    double p = 0.0;
};

inline KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, ks_p_value(d, n)};
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) {
            ++i;
        }
        while (j < b.size() && b[j] == v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, ks_p_value(d, na * nb / (na + nb))};
}

inline double normal_cdf(double x, double variance) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

// CDF of the symmetric stable law with characteristic function exp(-|u|^alpha),
// by Gil-Pelaez inversion F(x) = 1/2 + (1/pi) int_0^inf sin(ux) exp(-u^alpha) / u du.
// Far in the tails the oscillatory integral is replaced by the power series of
// the survival function in |x|^-alpha.
inline double stable_cdf(double x, double alpha) {
    using std::numbers::pi;
    if (x == 0.0) {
        return 0.5;
    }
    const double ax = std::abs(x);
    double upper = 0.0;
    if (ax > 40.0) {
        double survival = 0.0;
        for (int k = 1; k <= 6; ++k) {
            survival += (k % 2 == 1 ? 1.0 : -1.0) * std::tgamma(alpha * k) / std::tgamma(k + 1.0) *
                        std::sin(k * pi * alpha / 2.0) * std::pow(ax, -alpha * k);
        }
        upper = 0.5 - survival / pi;
    } else {
        const double cut = std::pow(42.0, 1.0 / alpha);
        auto integrand = [&](double u) {
            return u == 0.0 ? ax : std::sin(u * ax) * std::exp(-std::pow(u, alpha)) / u;
        };
        const double integral =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, cut, 20,
                                                                          1e-12);
        upper = integral / pi;
    }
    return x > 0.0 ? 0.5 + upper : 0.5 - upper;
}

inline double autocorrelation_lag1(const std::vector<double>& x) {
    const double m = mean(x);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        den += (x[i] - m) * (x[i] - m);
        if (i + 1 < x.size()) {
            num += (x[i] - m) * (x[i + 1] - m);
        }
    }
    return num / den;
}

}  // namespace rfj_test

#endif  // RFJ_TESTS_STATS_HPP
