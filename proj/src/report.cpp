#include "cvdistill/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cvdistill/errors.hpp"
#include "cvdistill/tolerances.hpp"

namespace cvdistill {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    if (ec != std::errc())
        throw Error("failed to format a floating-point value");
    return std::string(buf, ptr);
}

std::vector<double> parse_grid(const std::string& spec) {
    auto to_double = [&](const std::string& s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw DomainError("invalid number in grid spec: '" + s + "'");
        return v;
    };
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) return {to_double(spec)};
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw DomainError("grid spec must be a value or start:stop:step: '" + spec + "'");
    const double start = to_double(spec.substr(0, c1));
    const double stop = to_double(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = to_double(spec.substr(c2 + 1));
    if (!(step > 0.0)) throw DomainError("grid step must be positive");
    if (stop < start) throw DomainError("grid stop must not precede start");
    std::vector<double> values;
    for (long i = 0;; ++i) {
        const double v = start + i * step;
        if (v > stop + 0.5 * step) break;
        values.push_back(v);
    }
    return values;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
    if (!out) throw Error("failed writing output file: " + path);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["config"] = manifest.config;
    j["versions"] = {{"cvdistill", version()}, {"compiler", __VERSION__}};
    const Tolerances tol;
    j["tolerances"] = {{"algebraic", tol.algebraic},
                       {"positivity_slack", tol.positivity_slack},
                       {"leakage_bound", tol.leakage_bound},
                       {"root_tol", tol.root_tol},
                       {"convergence_tol", tol.convergence_tol},
                       {"target_r_tol", tol.target_r_tol}};
    j["outputs"] = manifest.outputs;
    j["wall_clock_ms"] = manifest.wall_clock_ms;
    j["max_leakage"] = manifest.max_leakage;
    std::string repro = "cvdistill " + manifest.command;
    for (const auto& [k, v] : manifest.config) repro += " --" + k + " " + v;
    j["repro_command"] = repro;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open manifest file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace cvdistill
