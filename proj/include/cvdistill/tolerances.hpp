#ifndef CVDISTILL_TOLERANCES_HPP
#define CVDISTILL_TOLERANCES_HPP

namespace cvdistill {

/// Numerical tolerances used across the library. Every entry can be
/// overridden per call; the defaults are what the test suites pin.
struct Tolerances {
    double algebraic = 1e-10;        ///< closed-form identity checks
    double positivity_slack = 1e-9;  ///< allowed negativity of physical spectra
    double hermiticity = 1e-10;      ///< max |rho - rho^dagger| element
    double leakage_bound = 1e-4;     ///< max population of the top Fock level
    double weight_floor = 1e-14;     ///< conditional-trace floor (zero-weight error below)
    double zero_pattern = 1e-8;      ///< sigma elements that must vanish
    double root_tol = 1e-10;         ///< residual for the fixed-point match
    double convergence_tol = 1e-6;   ///< trace distance between Gaussification iterates
    double target_r_tol = 1e-6;      ///< q-tuning accuracy on the output squeezing
};

/// Per-mode Fock cutoffs used by default: 4-mode two-copy stages keep d
/// small (the tensors scale as d^8), plain two-mode analysis can afford more.
struct CutoffPolicy {
    static constexpr int two_mode = 8;
    static constexpr int four_mode = 6;
};

}  // namespace cvdistill

#endif
