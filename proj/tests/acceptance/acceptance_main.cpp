// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rfj/catalog.hpp"
#include "rfj/lab.hpp"
#include "rfj/report_io.hpp"
#include "support/stats.hpp"

using namespace rfj;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Clock {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

Outcome orthonormality() {
    const Clock clock;
    double worst = 0.0;
    for (const JacobiParams p : {JacobiParams{0.5, 0.5}, JacobiParams{1.0, 2.0}, JacobiParams{0.3, 0.7}}) {
        const auto rule = gauss_jacobi(64, p);
        std::vector<std::vector<double>> values;
        for (double t : rule.nodes) {
            values.push_back(orthonormal_upto(20, p, t));
        }
        for (std::size_t n = 0; n <= 20; ++n) {
            for (std::size_t m = 0; m <= 20; ++m) {
                double s = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    s += rule.weights[i] * values[i][n] * values[i][m];
                }
                worst = std::max(worst, std::abs(s - (n == m ? 1.0 : 0.0)));
            }
        }
    }
    const double elapsed = clock.seconds();
    return {worst < 1e-8 && elapsed < 1.0,
            "max |<p_n,p_m> - delta_nm| = " + num(worst) + " (< 1e-8) in " + num(elapsed) +
                " s (< 1 s)"};
}

Outcome polynomial_exactness() {
    const JacobiParams p{1.0, 1.0};
    auto f = [](double t) { return t * t * t; };
    const auto a = fj_coefficients(f, 3, p, "t^3");
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double y = -1.0 + 2.0 * (i + 0.5) / 100.0;
        double s = 0.0;
        const auto basis = orthonormal_upto(3, p, y);
        for (std::size_t k = 0; k <= 3; ++k) {
            s += a.values[k] * basis[k];
        }
        worst = std::max(worst, std::abs(s - f(y)));
    }
    return {worst < 1e-10, "max |f_3(y) - y^3| over 100 points = " + num(worst) + " (< 1e-10)"};
}

Outcome gaussian_isometry() {
    const Clock clock;
    const JacobiParams p{1.0, 1.0};
    const GridSpec grid(4096);
    const StableIndex alpha(2.0);
    const std::size_t trials = 20000;
    const GridBasis basis(5, p, grid);
    const auto samples = run_trials<std::vector<double>>(
        trials, 0, kDefaultSeed, [&](RngStream& rng, std::size_t) {
            return coefficient_set(basis, sample_increments(alpha, grid, rng)).values;
        });
    double worst = 0.0;
    for (std::size_t n = 0; n <= 5; ++n) {
        std::vector<double> column(trials);
        for (std::size_t i = 0; i < trials; ++i) {
            column[i] = samples[i][n];
        }
        const double expected =
            2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                      [&](double t) {
                          const double v = orthonormal_eval(n, p, t) * weight(t, p);
                          return v * v;
                      },
                      -1.0, 1.0, 15, 1e-13);
        worst = std::max(worst, std::abs(rfj_test::variance(column) / expected - 1.0));
    }
    const double elapsed = clock.seconds();
    return {worst < 0.05 && elapsed < 60.0,
            "max relative deviation of Var(A_n) from 2 int p_n^2 rho^2, n <= 5: " + num(worst) +
                " (< 0.05) in " + num(elapsed) + " s (< 60 s)"};
}

Outcome sampler_distribution() {
    const std::size_t count = 100000;
    RngStream rng2(kDefaultSeed, 0);
    RngStream rng15(kDefaultSeed, 1);
    std::vector<double> gauss(count);
    std::vector<double> stable(count);
    for (std::size_t i = 0; i < count; ++i) {
        gauss[i] = sample_sas(StableIndex(2.0), 1.0, rng2);
        stable[i] = sample_sas(StableIndex(1.5), 1.0, rng15);
    }
    const auto g = rfj_test::ks_one_sample(gauss, [](double t) { return rfj_test::normal_cdf(t, 2.0); });
    const auto s = rfj_test::ks_one_sample(stable, [](double t) { return rfj_test::stable_cdf(t, 1.5); });
    return {g.p > 0.01 && s.d < 0.01, "alpha=2 KS p = " + num(g.p) + " (> 0.01); alpha=1.5 KS D = " +
                                          num(s.d) + " (< 0.01)"};
}

// For alpha = 2 the remainder S_ref - S_n is centered Gaussian, so
// E|S_ref - S_n| = sqrt(2/pi) sd, with variance 2 sum_i r(t_i)^2 dt on the grid.
std::vector<double> gaussian_remainder_curve(const std::string& f_id, double y,
                                             const std::vector<std::size_t>& ns, std::size_t n_ref,
                                             std::size_t m) {
    const JacobiParams p{1.0, 1.0};
    const auto a = fj_coefficients(catalog_function(f_id, p).f, n_ref, p, f_id);
    const GridSpec grid(m);
    const GridBasis basis(n_ref, p, grid);
    const auto py = orthonormal_upto(n_ref, p, y);
    std::vector<double> out;
    for (std::size_t n : ns) {
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double r = 0.0;
            for (std::size_t k = n + 1; k <= n_ref; ++k) {
                r += a.values[k] * py[k] * basis.row(k)[i];
            }
            var += 2.0 * r * r * grid.step();
        }
        out.push_back(std::sqrt(2.0 / std::numbers::pi * var));
    }
    return out;
}

Outcome mean_trend() {
    const Clock clock;
    bool all = true;
    std::ostringstream detail;
    for (double alpha : {1.5, 2.0}) {
        for (const char* f : {"exp", "runge"}) {
            ExperimentConfig cfg;
            cfg.alpha = alpha;
            cfg.function_id = f;
            cfg.n_schedule = {2, 4, 8, 16};
            cfg.trials = 2000;
            cfg.grid = 4096;
            const auto report = mean_convergence_experiment(cfg);
            const auto rows = report.select("mean_abs_error", cfg.y_points.front());
            bool strict = true;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                strict = strict && rows[i].estimate < rows[i - 1].estimate;
            }
            const auto& first = rows.front();
            const auto& last = rows.back();
            const double gap = first.estimate - last.estimate;
            const bool sep = gap > 2.0 * std::hypot(first.se, last.se);
            all = all && strict && sep;
            detail << " [a=" << alpha << " " << f << ": " << num(first.estimate) << " -> "
                   << num(last.estimate) << (strict ? " strict" : " NOT strict")
                   << (sep ? ", > 2 SE]" : ", <= 2 SE]");
        }
    }
    const double elapsed = clock.seconds();
    detail << " in " << num(elapsed) << " s (< 300 s); exact alpha=2 runge values:";
    for (double v : gaussian_remainder_curve("runge", 0.3, {2, 4, 8, 16}, 64, 4096)) {
        detail << " " << num(v);
    }
    return {all && elapsed < 300.0, "E|error| over n = 2,4,8,16:" + detail.str()};
}

Outcome weak_continuity() {
    ExperimentConfig cfg;
    cfg.alpha = 1.5;
    cfg.function_id = "exp";
    cfg.n_schedule = {16};
    cfg.trials = 5000;
    cfg.grid = 4096;
    const double y = 0.3;
    const auto report = weak_continuity_sweep(cfg, y, {y + 0.4, y + 0.2, y + 0.1}, 0.1);
    const auto rows = report.select("tail_prob_increment");
    bool monotone = rows.size() == 3;
    std::ostringstream detail;
    detail << "P(|I(x)-I(y)| > 0.1) at |x-y| = 0.4, 0.2, 0.1:";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail << " " << num(rows[i].estimate);
        if (i > 0) {
            monotone = monotone && rows[i].estimate <= rows[i - 1].estimate;
        }
    }
    detail << (monotone ? " (non-increasing)" : " (increases)");
    return {monotone, detail.str()};
}

Outcome cesaro_trend() {
    ExperimentConfig cfg;
    cfg.alpha = 1.0;
    cfg.jacobi = {1.0, 1.0};
    cfg.weighted = {0.5, 0.5};
    cfg.function_id = "runge";
    cfg.n_schedule = {8, 16, 32, 64};
    cfg.trials = 2000;
    cfg.grid = 4096;
    cfg.epsilons = {0.1};
    const bool gate = check_parameter_gate(cfg.jacobi, cfg.weighted).passed;
    const auto report = cesaro_summability_experiment(cfg);
    const auto rows = report.select("tail_prob_cesaro", cfg.y_points.front(), 0.1);
    bool monotone = rows.size() == 4;
    std::ostringstream detail;
    detail << "P(|sigma'_n - ref| > 0.1) at n = 8,16,32,64:";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail << " " << num(rows[i].estimate);
        if (i > 0) {
            monotone = monotone && rows[i].estimate <= rows[i - 1].estimate;
        }
    }
    const auto& first = rows.front();
    const auto& last = rows.back();
    const bool sep = first.estimate - last.estimate > 2.0 * std::hypot(first.se, last.se);
    detail << (monotone ? "; non-increasing" : "; increases") << (sep ? ", > 2 SE" : ", <= 2 SE")
           << (gate ? "; parameter gate holds" : "; parameter gate FAILS");
    return {gate && monotone && sep, detail.str()};
}

Outcome tail_scaling() {
    bool all = true;
    std::ostringstream detail;
    detail << "log-log slope over eps = 1,2,4,8:";
    for (double alpha : {1.0, 1.5}) {
        ExperimentConfig cfg;
        cfg.alpha = alpha;
        cfg.function_id = "runge";
        cfg.grid = 256;
        cfg.trials = 100000;
        cfg.epsilons = {1.0, 2.0, 4.0, 8.0};
        const auto report = tail_bound_experiment(cfg);
        const double slope = report.extras.at("slope").is_number()
                                 ? report.extras.at("slope").get<double>()
                                 : std::nan("");
        const bool ok = std::isfinite(slope) && std::abs(slope + alpha) <= 0.3;
        all = all && ok;
        detail << " alpha=" << alpha << ": " << num(slope) << (ok ? " (within 0.3)" : " (outside 0.3)");
    }
    return {all, detail.str()};
}

Outcome theta_checker() {
    auto d = [](std::size_t v) { return static_cast<double>(v); };
    const std::size_t n_max = 128;

    const auto c1 = check_conditions(make_cesaro(1), n_max);
    double max_d2 = 0.0;
    const auto theta = make_cesaro(1);
    for (std::size_t n = 2; n <= n_max; ++n) {
        for (std::size_t k = 1; k < n; ++k) {
            max_d2 = std::max(max_d2, std::abs(theta.entry(k + 1, n) - 2.0 * theta.entry(k, n) +
                                               theta.entry(k - 1, n)));
        }
    }
    const bool c1_ok = c1.t(1).pass && c1.t(2).pass && c1.t(3).pass && c1.xi1 && max_d2 < 1e-12;

    const auto id = check_conditions(SummationMatrix::identity_truncation(), n_max);
    const bool id_ok = !id.t(2).pass && id.t(2).witness_value == d(id.t(2).witness_n);

    struct Single {
        int violated;
        SummationMatrix::Generator g;
    };
    const std::vector<Single> singles{
        {1, [&](std::size_t k, std::size_t n) { return 0.5 * (d(n) - d(k)) / d(n); }},
        {3, [&](std::size_t k, std::size_t n) { return std::max(1.0 - 2.0 * d(k) / d(n), 0.0); }},
        {4,
         [&](std::size_t k, std::size_t n) {
             if (n == 1) {
                 return 1.0;
             }
             const double x = d(k) / (d(n) - 1.0);
             return 1.0 - 3.0 * x * x + 2.0 * x * x * x;
         }},
        {5, [&](std::size_t k, std::size_t n) { return 1.0 - std::pow(d(k) / d(n), 2); }},
    };
    bool singles_ok = true;
    std::ostringstream flagged;
    for (const auto& s : singles) {
        const auto r = check_conditions(SummationMatrix::from_generator("single", s.g), n_max);
        std::string fails;
        for (int i = 1; i <= 5; ++i) {
            const bool expected_pass = i != s.violated;
            singles_ok = singles_ok && r.t(i).pass == expected_pass;
            if (!r.t(i).pass) {
                fails += (fails.empty() ? "T" : ",T") + std::to_string(i);
            }
        }
        flagged << " T" << s.violated << "-matrix flags {" << fails << "}";
    }
    std::ostringstream detail;
    detail << "(C,1) T1/T2/T3 " << (c1_ok ? "pass" : "FAIL") << " (max |Delta^2| " << num(max_d2)
           << "); identity T2 " << (id.t(2).pass ? "passes" : "fails") << " with n*theta = "
           << num(id.t(2).witness_value) << " at n=" << id.t(2).witness_n << ";" << flagged.str();
    return {c1_ok && id_ok && singles_ok, detail.str()};
}

Outcome reproducibility() {
    ExperimentConfig mean;
    mean.alpha = 1.5;
    mean.n_schedule = {2, 4, 8};
    mean.trials = 400;
    mean.grid = 1024;
    ExperimentConfig ces;
    ces.alpha = 1.0;
    ces.weighted = {0.5, 0.5};
    ces.function_id = "runge";
    ces.n_schedule = {8, 16};
    ces.trials = 400;
    ces.grid = 1024;
    ExperimentConfig tail;
    tail.alpha = 1.0;
    tail.function_id = "runge";
    tail.grid = 128;
    tail.trials = 2000;
    tail.epsilons = {1.0, 2.0};
    ExperimentConfig weak = mean;
    weak.n_schedule = {8};

    using Runner = std::function<ConvergenceReport(const ExperimentConfig&)>;
    const std::vector<std::pair<ExperimentConfig, Runner>> runs{
        {mean, mean_convergence_experiment},
        {ces, cesaro_summability_experiment},
        {tail, tail_bound_experiment},
        {weak, [](const ExperimentConfig& c) { return weak_continuity_sweep(c, 0.3, {0.7, 0.5}, 0.1); }},
    };
    bool same = true;
    for (const auto& [cfg, run] : runs) {
        std::string reference;
        for (unsigned workers : {1u, 1u, 3u, 8u}) {
            auto c = cfg;
            c.workers = workers;
            const auto csv = report_csv(run(c));
            if (reference.empty()) {
                reference = csv;
            }
            same = same && csv == reference;
        }
    }
    return {same, std::string("mean/cesaro/tail/weak reports re-run with workers 1,1,3,8: ") +
                      (same ? "byte-identical CSV" : "CSV DIFFERS")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "orthonormality", orthonormality},
        {2, "polynomial exactness", polynomial_exactness},
        {3, "gaussian isometry", gaussian_isometry},
        {4, "sampler distribution", sampler_distribution},
        {5, "mean-convergence trend", mean_trend},
        {6, "weak-continuity trend", weak_continuity},
        {7, "(C,1) summability trend", cesaro_trend},
        {8, "tail scaling", tail_scaling},
        {9, "summation-matrix checker", theta_checker},
        {10, "reproducibility", reproducibility},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const Clock clock;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), clock.seconds());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
                std::size(criteria));
    return failures == 0 ? 0 : 1;
}
