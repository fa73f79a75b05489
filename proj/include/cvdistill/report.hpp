#ifndef CVDISTILL_REPORT_HPP
#define CVDISTILL_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace cvdistill {

inline const char* version() { return "0.1.0"; }

/// Locale-independent formatting with 12 significant digits ('.' decimal
/// point, shortest of fixed/scientific) — the fixed CSV float format.
std::string format_double(double v);

/// Parses a grid flag: either a single value or "start:stop:step" inclusive
/// of both endpoints within half a step.
std::vector<double> parse_grid(const std::string& spec);

/// Writes rows as CSV with '\n' line endings. Numeric cells must already be
/// formatted (format_double keeps output byte-deterministic).
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

/// Reproduction record emitted alongside every data file.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;  ///< resolved flag values
    std::vector<std::string> outputs;
    double wall_clock_ms = 0.0;
    double max_leakage = 0.0;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace cvdistill

#endif
