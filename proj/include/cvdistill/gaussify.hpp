#ifndef CVDISTILL_GAUSSIFY_HPP
#define CVDISTILL_GAUSSIFY_HPP

#include <utility>
#include <vector>

#include "cvdistill/fock.hpp"
#include "cvdistill/gaussian.hpp"

namespace cvdistill {

/// Low-order elements of the auxiliary matrix sigma = rho^(1) / rho^(1)_{00,00}
/// computed from the state after one Gaussification iteration. For symmetric
/// inputs s10_10 = s01_01, s11_00 = s00_11, and the elements
/// (20,00), (02,00), (00,20), (00,02), (10,01), (01,10) vanish;
/// `zero_pattern_max` records the largest of those, `symmetry_error` the
/// mismatch of the paired elements.
struct SigmaElements {
    double s10_10 = 0.0;
    double s01_01 = 0.0;
    double s11_00 = 0.0;
    double s00_11 = 0.0;
    double zero_pattern_max = 0.0;
    double symmetry_error = 0.0;
};

/// One iteration of the Gaussification map: interfere two copies of `rho`
/// on balanced beam splitters — modes (A,C) on Alice's side and (B,D) on
/// Bob's — and project the C and D outputs onto vacuum. Returns the
/// unnormalized conditional two-mode state and the success weight.
/// `rho` must be a normalized two-mode density matrix (or pure state).
WeightedState gaussification_step(const FockArray& rho, const Tolerances& tol = {});

/// sigma elements of an (unnormalized) first-iteration output. Throws
/// SymmetryViolationError when the zero-pattern or the pairing of the
/// symmetric class is violated beyond tol.zero_pattern.
SigmaElements sigma_from_rho1(const FockArray& rho1, const Tolerances& tol = {});

/// epsilon of the asymptotic Gaussian state: sigma_{10,10} / sigma_{11,00}.
double epsilon_from_sigma(const SigmaElements& sig);

/// Fock-basis element ratios (rho_{10,10}/rho_{00,00}, rho_{11,00}/rho_{00,00})
/// of the lossy-TMSV family member with the given (lambda, T), evaluated
/// through the Fock engine at the given cutoff.
std::pair<double, double> family_element_ratios(double lambda, double T, int cutoff);

/// The symmetric Gaussian state the Gaussification iteration converges to,
/// identified by matching the family's element ratios against the sigma
/// elements: a damped-Newton root find over (lambda', T') at the pipeline's
/// cutoff, seeded from the closed-form geometric-series solution. Throws
/// ConvergenceError when no family member matches.
SymmetricGaussianState asymptotic_state(const SigmaElements& sig, int cutoff,
                                        const Tolerances& tol = {});

/// Result of brute-force iteration of the Gaussification map.
struct GaussifyRun {
    FockArray state;              ///< final normalized state
    int iterations = 0;           ///< iterations actually performed
    std::vector<double> weights;  ///< per-step success weights
    bool converged = false;
    double last_delta = 0.0;      ///< trace distance of the last pair of iterates
};

/// Repeats gaussification_step on two copies of the current normalized state
/// until the trace distance between successive iterates drops below `tol_td`
/// or `max_iters` is reached. Non-convergence is reported, not thrown.
GaussifyRun iterate_to_convergence(const FockArray& rho, int max_iters = 12,
                                   double tol_td = Tolerances{}.convergence_tol,
                                   const Tolerances& tol = {});

/// Trace distance 0.5 * || a - b ||_1 between two density matrices.
double trace_distance(const FockArray& a, const FockArray& b);

}  // namespace cvdistill

#endif
