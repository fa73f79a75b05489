#ifndef CVDISTILL_VALIDATION_HPP
#define CVDISTILL_VALIDATION_HPP

#include <string>
#include <vector>

#include "cvdistill/tolerances.hpp"

namespace cvdistill {

struct CheckResult {
    std::string name;
    bool passed = false;
    double metric = 0.0;     ///< worst deviation observed
    double threshold = 0.0;  ///< the bound it was held against
    std::string detail;
};

struct ValidationConfig {
    int cutoff = CutoffPolicy::two_mode;       ///< cutoff for two-mode checks
    int four_mode_cutoff = CutoffPolicy::four_mode;
    double lambda = 0.5;                       ///< squeezing used by the leakage gate
    Tolerances tol;
};

/// Runs the invariant suites of every module and returns one result per
/// check. All pass on a healthy build; the leakage gate fails by design for
/// undersized cutoffs (e.g. cutoff 2 with lambda 0.9).
std::vector<CheckResult> run_validation(const ValidationConfig& config);

}  // namespace cvdistill

#endif
