#ifndef CVDISTILL_CLI_HPP
#define CVDISTILL_CLI_HPP

#include <string>
#include <vector>

#include "cvdistill/tolerances.hpp"

namespace cvdistill {

/// Resolved options of one CLI invocation (flags > config file > defaults).
struct CliOptions {
    // shared
    int jobs = 0;  ///< 0 = hardware concurrency (GAUSS_DISTILL_JOBS fallback)
    std::string out;
    int cutoff = CutoffPolicy::four_mode;
    double target_r = 1.0;

    // stage / nested
    double r = 1.0;
    double T = 0.5;
    int stages = 1;
    std::vector<double> q_list;  ///< empty = auto-tune

    // validate
    double lambda = 0.5;
    int validate_cutoff = CutoffPolicy::two_mode;

    // figure grids
    std::string eps_grid = "0.1:0.9:0.1";
    std::string t_grid = "0.05:1.0:0.05";
};

/// Exit codes: 0 success, 1 validation failure, 2 usage error.
int cmd_validate(const CliOptions& opt);
int cmd_stage(const CliOptions& opt);
int cmd_nested(const CliOptions& opt);
int cmd_figure3(const CliOptions& opt);
int cmd_figure4(const CliOptions& opt);

}  // namespace cvdistill

#endif
