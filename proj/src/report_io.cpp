#include "rfj/report_io.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace rfj {

std::string format_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
    out << kReportCsvHeader << "\n";
    for (const auto& r : report.rows) {
        out << (r.n ? std::to_string(*r.n) : "") << ',' << (r.y ? format_exact(*r.y) : "") << ','
            << format_exact(r.estimate) << ',' << format_exact(r.se) << ',' << r.trials << ','
            << report.config.seed << ',' << r.statistic << ',' << (r.x ? format_exact(*r.x) : "")
            << ',' << (r.eps ? format_exact(*r.eps) : "") << "\n";
    }
}

std::string report_csv(const ConvergenceReport& report) {
    std::ostringstream out;
    write_report_csv(out, report);
    return out.str();
}

nlohmann::json report_json(const ConvergenceReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row{{"statistic", r.statistic},
                           {"estimate", r.estimate},
                           {"se", r.se},
                           {"trials", r.trials}};
        row["n"] = r.n ? nlohmann::json(*r.n) : nlohmann::json();
        row["y"] = r.y ? nlohmann::json(*r.y) : nlohmann::json();
        row["x"] = r.x ? nlohmann::json(*r.x) : nlohmann::json();
        row["eps"] = r.eps ? nlohmann::json(*r.eps) : nlohmann::json();
        rows.push_back(std::move(row));
    }
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : report.verdicts) {
        verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    }
    return {{"experiment", report.experiment},
            {"config", report.config.to_json()},
            {"n_ref", report.n_ref},
            {"rows", rows},
            {"verdicts", verdicts},
            {"extras", report.extras},
            {"wall_seconds", report.wall_seconds}};
}

}  // namespace rfj
