#ifndef CVDISTILL_PROTOCOL_HPP
#define CVDISTILL_PROTOCOL_HPP

#include <optional>
#include <vector>

#include "cvdistill/degauss.hpp"
#include "cvdistill/fock.hpp"
#include "cvdistill/gaussian.hpp"
#include "cvdistill/gaussify.hpp"

namespace cvdistill {

/// Derived quantities of a symmetric Gaussian state in one bundle.
struct StateSummary {
    double C = 0, S = 0;
    double r = 0, T = 0;
    double epsilon = 0;
    double purity = 0;
    double eof = 0;
};

StateSummary summarize(const SymmetricGaussianState& state);

/// Record of one protocol stage: two-copy de-Gaussification followed by
/// Gaussification to its fixed point.
struct StageReport {
    int stage = 0;
    StateSummary input;
    StateSummary output;
    double q = 0.0;
    /// De-Gaussification weight with the two <q| detections normalized by
    /// 1/(1+q^2) each, times the first Gaussification iteration's weight —
    /// a lower-bound proxy for the stage success probability.
    double weight = 0.0;
    /// Input copies consumed per surviving output pair, 2^stage bookkeeping
    /// for the de-Gaussification chain (Gaussification doubling per
    /// iteration comes on top in brute-force mode).
    double copies_consumed = 0.0;
    /// Largest top-Fock-level population seen along the stage pipeline.
    double leakage = 0.0;
};

struct ProtocolConfig {
    SymmetricGaussianState initial;
    int stages = 1;
    double target_r = 1.0;
    /// Explicit q per stage; empty = auto-tune to hold target_r.
    std::vector<double> q_schedule;
    int cutoff = CutoffPolicy::four_mode;
    Tolerances tol;
};

/// Builds the Fock-space representation of a symmetric Gaussian state (its
/// lossy-TMSV decomposition) at the given cutoff. Leakage is reported by the
/// caller, not gated here: the low-order Fock elements the protocol analysis
/// rests on are exact at any cutoff.
FockArray fock_state_of(const SymmetricGaussianState& state, int cutoff);

/// One full stage through the Fock pipeline: two-copy de-Gaussification of
/// the state against an identical copy, one Gaussification iteration, sigma
/// extraction and the asymptotic fixed point.
StageReport run_stage(const SymmetricGaussianState& state, double q, int cutoff,
                      const Tolerances& tol = {});

/// Finds q such that the stage output satisfies rt_from_cs(output).r =
/// target_r, by bracketing + secant on a log-q grid in [1e-3, 1e3]. The
/// output squeezing is evaluated through the Gaussian element-squaring
/// relations (exact for Gaussian inputs); run_stage with the returned q
/// reproduces target_r within tol.target_r_tol. A monotonicity sweep is
/// checked on every call; ConvergenceError carries the sweep when no root
/// exists in the bracket.
double tune_q(const SymmetricGaussianState& state, double target_r, int cutoff,
              const Tolerances& tol = {});

/// Chains `stages` stages, auto-tuning q per stage when no schedule is
/// given, and verifies the squaring law epsilon_k = epsilon_{k-1}^2 at each
/// stage.
std::vector<StageReport> nested_protocol(const ProtocolConfig& config);

struct Fig3Row {
    double eps_in = 0.0;
    int N = 0;
    double eps_out = 0.0;
};

struct Fig4Row {
    double T = 0.0;
    int N = 0;
    double purity = 0.0;
    double eof = 0.0;
};

/// epsilon^(N) = eps_in^(2^N) by repeated squaring, for every grid value and
/// N = 1..n_max. Purely analytic.
std::vector<Fig3Row> figure3_data(std::span<const double> eps_grid, int n_max);

/// Purity and entanglement of formation after N = 0..n_max stages at fixed
/// target squeezing, over a grid of initial transmittances; q is tuned per
/// stage. Grid points run on `jobs` workers (0 = hardware concurrency);
/// rows come out in deterministic (T, N) order.
std::vector<Fig4Row> figure4_data(std::span<const double> t_grid, int n_max, int cutoff,
                                  double target_r = 1.0, int jobs = 0,
                                  const Tolerances& tol = {});

}  // namespace cvdistill

#endif
