// rfj: command-line front end for the random Fourier-Jacobi laboratory.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage / configuration error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rfj/catalog.hpp"
#include "rfj/lab.hpp"
#include "rfj/report_io.hpp"
#include "rfj/series.hpp"
#include "rfj/stable.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Flags {
    double alpha = 1.5;
    double gamma = 1.0;
    double delta = 1.0;
    double eta = 0.0;
    double tau = 0.0;
    std::string f = "exp";
    std::vector<std::size_t> n_schedule{2, 4, 8, 16};
    std::size_t n_ref_mult = 4;
    std::size_t grid = 4096;
    std::size_t trials = 2000;
    std::vector<double> eps{0.1};
    std::vector<double> y{0.3};
    std::vector<double> x;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::string out;
    unsigned workers = 0;
    bool verbose = false;

    // coeffs / check-theta / increments
    std::size_t n = 8;
    std::string family;
    std::string matrix;
    std::optional<std::size_t> n_max;
    std::uint64_t stream = 0;
};

std::uint64_t resolve_seed(const Flags& flags) {
    if (flags.seed) {
        return *flags.seed;
    }
    if (const char* env = std::getenv("RFJ_SEED"); env != nullptr && *env != '\0') {
        std::size_t used = 0;
        std::uint64_t value = 0;
        try {
            value = std::stoull(env, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != std::string(env).size()) {
            throw rfj::ConfigError(std::string("RFJ_SEED is not an unsigned integer: ") + env);
        }
        return value;
    }
    return rfj::kDefaultSeed;
}

rfj::ExperimentConfig to_config(const Flags& flags) {
    rfj::ExperimentConfig cfg;
    cfg.alpha = flags.alpha;
    cfg.jacobi = rfj::JacobiParams::make(flags.gamma, flags.delta);
    cfg.weighted = rfj::WeightedSpaceParams::make(flags.eta, flags.tau);
    cfg.function_id = flags.f;
    cfg.y_points = flags.y;
    cfg.n_schedule = flags.n_schedule;
    cfg.n_ref_mult = flags.n_ref_mult;
    cfg.grid = flags.grid;
    cfg.trials = flags.trials;
    cfg.epsilons = flags.eps;
    cfg.seed = resolve_seed(flags);
    cfg.workers = flags.workers;
    return cfg;
}

// Writes `payload` to --out, or to stdout when no path was given.
void emit(const Flags& flags, const std::string& payload) {
    if (flags.out.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream file(flags.out, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file " + flags.out);
    }
    file << payload;
    if (!file) {
        throw std::runtime_error("failed writing output file " + flags.out);
    }
}

// Human-readable lines go to stdout when the data goes to a file, otherwise to
// stderr so that stdout stays machine-readable.
std::ostream& summary_stream(const Flags& flags) {
    return flags.out.empty() ? std::cerr : std::cout;
}

void emit_report(const Flags& flags, const rfj::ConvergenceReport& report) {
    if (flags.format == "json") {
        emit(flags, rfj::report_json(report).dump(2) + "\n");
    } else {
        emit(flags, rfj::report_csv(report));
    }
    auto& s = summary_stream(flags);
    s << report.experiment << ": n_ref=" << report.n_ref << " trials=" << report.config.trials
      << " seed=" << report.config.seed << "\n";
    for (const auto& v : report.verdicts) {
        s << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.name << ": " << v.detail << "\n";
    }
    if (flags.verbose) {
        s << "  wall time " << report.wall_seconds << " s\n";
        if (!report.extras.empty()) {
            s << "  " << report.extras.dump() << "\n";
        }
    }
}

int run_coeffs(const Flags& flags) {
    const auto p = rfj::JacobiParams::make(flags.gamma, flags.delta);
    const auto f = rfj::catalog_function(flags.f, p);
    const auto a = rfj::fj_coefficients(f.f, flags.n, p, flags.f);
    if (flags.format == "json") {
        nlohmann::json j = a;
        emit(flags, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "n,a\n";
        for (std::size_t k = 0; k < a.values.size(); ++k) {
            out << k << ',' << rfj::format_exact(a.values[k]) << "\n";
        }
        emit(flags, out.str());
    }
    return kExitOk;
}

int run_converge_mean(const Flags& flags) {
    emit_report(flags, rfj::mean_convergence_experiment(to_config(flags)));
    return kExitOk;
}

int run_cesaro(const Flags& flags) {
    emit_report(flags, rfj::cesaro_summability_experiment(to_config(flags)));
    return kExitOk;
}

int run_tail_bound(const Flags& flags) {
    const auto report = rfj::tail_bound_experiment(to_config(flags));
    emit_report(flags, report);
    auto& s = summary_stream(flags);
    s << "  fitted slope " << report.extras["slope"].dump() << ", fitted tail constant c "
      << report.extras["fitted_c"].dump() << "\n";
    return kExitOk;
}

int run_weak_continuity(const Flags& flags) {
    auto cfg = to_config(flags);
    if (flags.y.empty() || flags.eps.empty()) {
        throw rfj::ConfigError("weak-continuity needs --y and --eps");
    }
    const double y = flags.y.front();
    std::vector<double> xs = flags.x;
    if (xs.empty()) {
        for (double h : {0.4, 0.2, 0.1}) {
            xs.push_back(y + h <= 1.0 ? y + h : y - h);
        }
    }
    emit_report(flags, rfj::weak_continuity_sweep(cfg, y, xs, flags.eps.front()));
    return kExitOk;
}

rfj::SummationMatrix matrix_from_flags(const Flags& flags) {
    if (!flags.matrix.empty()) {
        std::ifstream in(flags.matrix);
        if (!in) {
            throw std::runtime_error("cannot open matrix file " + flags.matrix);
        }
        return rfj::SummationMatrix::from_json(nlohmann::json::parse(in));
    }
    const std::string& fam = flags.family;
    if (fam == "identity" || fam == "partial-sum") {
        return rfj::SummationMatrix::identity_truncation();
    }
    if (fam == "zero") {
        return rfj::SummationMatrix::from_generator("zero",
                                                    [](std::size_t, std::size_t) { return 0.0; });
    }
    if (fam.rfind("cesaro", 0) == 0) {
        const std::string mu = fam.substr(6);
        if (mu.empty() || mu.find_first_not_of("0123456789") != std::string::npos) {
            throw rfj::ConfigError("Cesaro family must look like cesaro1, cesaro2, ...");
        }
        return rfj::make_cesaro(static_cast<unsigned>(std::stoul(mu)));
    }
    throw rfj::ConfigError("unknown family '" + fam +
                           "' (expected identity, zero, cesaro<mu>) or pass --matrix FILE");
}

int run_check_theta(const Flags& flags) {
    if (flags.family.empty() == flags.matrix.empty()) {
        throw rfj::ConfigError("check-theta needs exactly one of --family or --matrix");
    }
    const auto theta = matrix_from_flags(flags);
    const std::size_t n_max = flags.n_max.value_or(flags.matrix.empty() ? 128 : theta.max_n());
    const auto report = rfj::check_conditions(theta, n_max);
    if (flags.format == "json") {
        emit(flags, report.to_json().dump(2) + "\n");
    } else if (flags.format == "csv") {
        std::ostringstream out;
        out << "condition,pass,bound,witness_n,witness_k,witness_value\n";
        for (const auto& v : report.conditions) {
            out << v.name << ',' << (v.pass ? "true" : "false") << ','
                << rfj::format_exact(v.bound) << ',' << v.witness_n << ',' << v.witness_k << ','
                << rfj::format_exact(v.witness_value) << "\n";
        }
        emit(flags, out.str());
    } else {
        emit(flags, report.to_text());
    }
    return kExitOk;
}

int run_increments(const Flags& flags) {
    const rfj::StableIndex alpha(flags.alpha);
    const rfj::GridSpec grid(flags.grid);
    rfj::RngStream rng(resolve_seed(flags), flags.stream);
    const auto inc = rfj::sample_increments(alpha, grid, rng);
    std::ostringstream out;
    rfj::write_increments_csv(out, inc);
    emit(flags, out.str());
    return kExitOk;
}

void add_output_flags(CLI::App* cmd, Flags& flags, const std::vector<std::string>& formats) {
    cmd->add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    cmd->add_option("--out", flags.out, "Output path (default: stdout)");
    cmd->add_flag("-v,--verbose", flags.verbose, "Print wall time and extra summaries");
}

void add_experiment_flags(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--alpha", flags.alpha, "Stable index")->capture_default_str();
    cmd->add_option("--gamma", flags.gamma, "Jacobi exponent at t = 1")->capture_default_str();
    cmd->add_option("--delta", flags.delta, "Jacobi exponent at t = -1")->capture_default_str();
    cmd->add_option("--eta", flags.eta, "Weighted-space exponent at t = 1")->capture_default_str();
    cmd->add_option("--tau", flags.tau, "Weighted-space exponent at t = -1")->capture_default_str();
    cmd->add_option("--f", flags.f, "Catalog function id")->capture_default_str();
    cmd->add_option("--n-schedule", flags.n_schedule, "Truncation orders, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--n-ref-mult", flags.n_ref_mult, "Reference truncation multiplier")
        ->capture_default_str();
    cmd->add_option("--grid", flags.grid, "Grid intervals on [-1, 1]")->capture_default_str();
    cmd->add_option("--trials", flags.trials, "Monte Carlo trials")->capture_default_str();
    cmd->add_option("--eps", flags.eps, "Tail thresholds, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--y", flags.y, "Evaluation points, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--seed", flags.seed, "Master seed (default: RFJ_SEED or built-in)");
    cmd->add_option("--workers", flags.workers, "Worker threads (0 = all cores)")
        ->capture_default_str();
    add_output_flags(cmd, flags, {"csv", "json"});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random Fourier-Jacobi series laboratory"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    Flags flags;
    std::function<int(const Flags&)> action;

    // Subcommand-specific defaults, set before the options capture them for --help.
    const std::vector<std::string> args(argv + 1, argv + argc);
    const std::string sub = args.empty() ? "" : args.front();
    if (sub == "check-theta") {
        flags.format = "text";
    }
    if (sub == "cesaro") {
        flags.alpha = 1.0;
        flags.f = "runge";
        flags.eta = 0.5;
        flags.tau = 0.5;
        flags.n_schedule = {8, 16, 32, 64};
    } else if (sub == "tail-bound") {
        flags.alpha = 1.0;
        flags.f = "runge";
        flags.eps = {1.0, 2.0, 4.0, 8.0};
        flags.grid = 256;
        flags.trials = 100000;
    } else if (sub == "weak-continuity") {
        flags.n_schedule = {16};
        flags.trials = 5000;
    } else if (sub == "coeffs") {
        flags.gamma = 0.0;
        flags.delta = 0.0;
    }

    auto* coeffs = app.add_subcommand("coeffs", "Fourier-Jacobi coefficients of a catalog function");
    coeffs->add_option("--f", flags.f, "Catalog function id")->required();
    coeffs->add_option("--n", flags.n, "Highest degree")->capture_default_str();
    coeffs->add_option("--gamma", flags.gamma, "Jacobi exponent at t = 1")->capture_default_str();
    coeffs->add_option("--delta", flags.delta, "Jacobi exponent at t = -1")->capture_default_str();
    add_output_flags(coeffs, flags, {"csv", "json"});
    coeffs->callback([&] { action = run_coeffs; });

    auto* mean = app.add_subcommand("converge-mean", "Mean convergence of RFJ partial sums");
    add_experiment_flags(mean, flags);
    mean->callback([&] { action = run_converge_mean; });

    auto* cesaro = app.add_subcommand("cesaro", "(C,1) summability in probability at alpha = 1");
    add_experiment_flags(cesaro, flags);
    cesaro->callback([&] { action = run_cesaro; });

    auto* tail = app.add_subcommand("tail-bound", "Tail probabilities against the eps^-alpha rate");
    add_experiment_flags(tail, flags);
    tail->callback([&] { action = run_tail_bound; });

    auto* weak = app.add_subcommand("weak-continuity", "Weak continuity of the sum function");
    add_experiment_flags(weak, flags);
    weak->add_option("--x", flags.x, "Comparison points, comma separated")->delimiter(',');
    weak->callback([&] { action = run_weak_continuity; });

    auto* theta = app.add_subcommand("check-theta", "Check conditions T1..T5 on a summation matrix");
    theta->add_option("--family", flags.family, "identity, zero, cesaro<mu>");
    theta->add_option("--matrix", flags.matrix, "JSON matrix file {\"rows\": [[...], ...]}");
    theta->add_option("--n-max", flags.n_max, "Largest n inspected (default: 128, or every row of --matrix)");
    add_output_flags(theta, flags, {"text", "csv", "json"});
    theta->callback([&] { action = run_check_theta; });

    auto* incr = app.add_subcommand("increments", "Dump one realization of stable increments");
    incr->add_option("--alpha", flags.alpha, "Stable index")->capture_default_str();
    incr->add_option("--grid", flags.grid, "Grid intervals on [-1, 1]")->capture_default_str();
    incr->add_option("--seed", flags.seed, "Master seed (default: RFJ_SEED or built-in)");
    incr->add_option("--stream", flags.stream, "Stream index derived from the seed")
        ->capture_default_str();
    incr->add_option("--out", flags.out, "Output path (default: stdout)");
    incr->callback([&] { action = run_increments; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action(flags);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
