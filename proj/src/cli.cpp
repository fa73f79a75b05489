#include "cvdistill/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "cvdistill/protocol.hpp"
#include "cvdistill/report.hpp"
#include "cvdistill/validation.hpp"

namespace cvdistill {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::string> stage_row(const StageReport& rep) {
    return {std::to_string(rep.stage),    format_double(rep.q),
            format_double(rep.output.C),  format_double(rep.output.S),
            format_double(rep.output.r),  format_double(rep.output.T),
            format_double(rep.output.epsilon), format_double(rep.output.purity),
            format_double(rep.output.eof), format_double(rep.weight),
            format_double(rep.leakage)};
}

constexpr const char* kStageHeader = "stage,q,C,S,r,T,epsilon,purity,eof,weight,leakage";

void write_stage_outputs(const std::string& command, const CliOptions& opt,
                         const std::vector<StageReport>& reports, Clock::time_point start) {
    std::vector<std::vector<std::string>> rows;
    double max_leakage = 0.0;
    for (const auto& rep : reports) {
        rows.push_back(stage_row(rep));
        max_leakage = std::max(max_leakage, rep.leakage);
    }
    const std::string csv = opt.out + ".csv";
    write_csv(csv, kStageHeader, rows);

    RunManifest manifest;
    manifest.command = command;
    manifest.config["r"] = format_double(opt.r);
    manifest.config["T"] = format_double(opt.T);
    manifest.config["stages"] = std::to_string(opt.stages);
    manifest.config["target-r"] = format_double(opt.target_r);
    manifest.config["cutoff"] = std::to_string(opt.cutoff);
    manifest.config["out"] = opt.out;
    if (!opt.q_list.empty()) {
        std::string qs;
        for (double q : opt.q_list) qs += (qs.empty() ? "" : ",") + format_double(q);
        manifest.config["q"] = qs;
    }
    manifest.outputs = {csv};
    manifest.wall_clock_ms = ms_since(start);
    manifest.max_leakage = max_leakage;
    write_manifest(opt.out + ".manifest.json", manifest);
}

}  // namespace

int cmd_validate(const CliOptions& opt) {
    const auto start = Clock::now();
    ValidationConfig config;
    config.cutoff = opt.validate_cutoff;
    config.lambda = opt.lambda;
    const auto results = run_validation(config);

    bool all_passed = true;
    std::printf("%-38s %-6s %-12s %-12s\n", "check", "result", "metric", "threshold");
    for (const auto& r : results) {
        all_passed = all_passed && r.passed;
        std::printf("%-38s %-6s %-12.3e %-12.3e %s\n", r.name.c_str(),
                    r.passed ? "pass" : "FAIL", r.metric, r.threshold, r.detail.c_str());
    }
    std::printf("%s\n", all_passed ? "all checks passed" : "validation FAILED");

    if (!opt.out.empty()) {
        nlohmann::ordered_json j;
        j["passed"] = all_passed;
        j["wall_clock_ms"] = ms_since(start);
        for (const auto& r : results)
            j["checks"].push_back({{"name", r.name},
                                   {"passed", r.passed},
                                   {"metric", r.metric},
                                   {"threshold", r.threshold},
                                   {"detail", r.detail}});
        std::ofstream out(opt.out, std::ios::binary);
        out << j.dump(2) << "\n";
    }
    return all_passed ? 0 : 1;
}

int cmd_stage(const CliOptions& opt) {
    const auto start = Clock::now();
    const SymmetricGaussianState state = cs_from_rt(opt.r, opt.T);
    const double q = opt.q_list.empty() ? tune_q(state, opt.target_r, opt.cutoff)
                                        : opt.q_list.front();
    StageReport rep = run_stage(state, q, opt.cutoff);
    rep.stage = 1;
    write_stage_outputs("stage", opt, {rep}, start);
    return 0;
}

int cmd_nested(const CliOptions& opt) {
    const auto start = Clock::now();
    ProtocolConfig config;
    config.initial = cs_from_rt(opt.r, opt.T);
    config.stages = opt.stages;
    config.target_r = opt.target_r;
    config.q_schedule = opt.q_list;
    config.cutoff = opt.cutoff;
    const auto reports = nested_protocol(config);
    write_stage_outputs("nested", opt, reports, start);
    return 0;
}

int cmd_figure3(const CliOptions& opt) {
    const auto start = Clock::now();
    const auto grid = parse_grid(opt.eps_grid);
    const auto rows = figure3_data(grid, opt.stages);
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows)
        cells.push_back(
            {format_double(row.eps_in), std::to_string(row.N), format_double(row.eps_out)});
    const std::string csv = opt.out + ".csv";
    write_csv(csv, "eps_in,N,eps_out", cells);

    RunManifest manifest;
    manifest.command = "figure3";
    manifest.config["eps"] = opt.eps_grid;
    manifest.config["stages"] = std::to_string(opt.stages);
    manifest.config["out"] = opt.out;
    manifest.outputs = {csv};
    manifest.wall_clock_ms = ms_since(start);
    write_manifest(opt.out + ".manifest.json", manifest);
    return 0;
}

int cmd_figure4(const CliOptions& opt) {
    const auto start = Clock::now();
    const auto grid = parse_grid(opt.t_grid);
    const auto rows = figure4_data(grid, opt.stages, opt.cutoff, opt.target_r, opt.jobs);
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows)
        cells.push_back({format_double(row.T), std::to_string(row.N),
                         format_double(row.purity), format_double(row.eof)});
    const std::string csv = opt.out + ".csv";
    write_csv(csv, "T,N,purity,eof", cells);

    RunManifest manifest;
    manifest.command = "figure4";
    manifest.config["T"] = opt.t_grid;
    manifest.config["stages"] = std::to_string(opt.stages);
    manifest.config["cutoff"] = std::to_string(opt.cutoff);
    manifest.config["target-r"] = format_double(opt.target_r);
    manifest.config["jobs"] = std::to_string(opt.jobs);
    manifest.config["out"] = opt.out;
    manifest.outputs = {csv};
    manifest.wall_clock_ms = ms_since(start);
    write_manifest(opt.out + ".manifest.json", manifest);
    return 0;
}

}  // namespace cvdistill
