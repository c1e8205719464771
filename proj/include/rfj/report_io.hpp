#ifndef RFJ_REPORT_IO_HPP
#define RFJ_REPORT_IO_HPP

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "rfj/lab.hpp"

namespace rfj {

/// Stable CSV column order. Absent optional fields are written empty; numbers
/// use 17 significant digits.
inline constexpr const char* kReportCsvHeader = "n,y,estimate,se,trials,seed,statistic,x,eps";

void write_report_csv(std::ostream& out, const ConvergenceReport& report);
std::string report_csv(const ConvergenceReport& report);

/// Full report including config echo, verdicts, extras and wall time.
nlohmann::json report_json(const ConvergenceReport& report);

/// Shortest round-trip-safe text for a double ("%.17g").
std::string format_exact(double v);

}  // namespace rfj

#endif  // RFJ_REPORT_IO_HPP
