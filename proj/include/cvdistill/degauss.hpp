#ifndef CVDISTILL_DEGAUSS_HPP
#define CVDISTILL_DEGAUSS_HPP

#include <Eigen/Dense>

#include "cvdistill/fock.hpp"
#include "cvdistill/gaussify.hpp"

namespace cvdistill {

/// Parameters of the two-copy de-Gaussifier: the Mach-Zehnder interferometer
/// with a Fock-state filter Z = n - 1 in each arm, and detection of the
/// consumed copy's modes onto <0|(a + q). q = 0 is rejected: it kills the
/// vacuum-vacuum element the Gaussification analysis divides by.
struct TwoCopyFilterSpec {
    explicit TwoCopyFilterSpec(double q_) : q(q_) {
        if (q == 0.0) throw DomainError("two-copy filter requires q != 0");
    }
    double q;
};

/// Local single-photon subtraction on both modes: rho -> a b rho a^dag b^dag,
/// unnormalized, with the combined success weight. Increases epsilon.
WeightedState single_photon_subtract(const FockArray& rho,
                                     double weight_floor = Tolerances{}.weight_floor);

/// Local Gaussian filter tau^n applied to each mode (0 < tau <= 1),
/// unnormalized. Leaves the element ratio rho_{10,10}/rho_{11,00} — and
/// hence epsilon — unchanged.
WeightedState local_gaussian_filter_tau(const FockArray& rho, double tau);

/// The two-copy de-Gaussification of two shared states rho_AB (kept copy)
/// and rho_CD (consumed copy): balanced beam splitters on (A,C) and (B,D),
/// Z = n - 1 in all four interferometer arms, the closing beam splitters,
/// and detection of C and D onto the unnormalized <0|(a + q). Returns the
/// unnormalized conditional state of modes (A,B) plus its weight.
WeightedState two_copy_degauss(const FockArray& rho_ab, const FockArray& rho_cd,
                               const TwoCopyFilterSpec& spec, const Tolerances& tol = {});

/// Action of the composed filter F on the Fock state |n>_A (with the
/// detection ket q|0> + |1> attached on the consumed mode), as a pure
/// two-mode (A, C) array — computed by the circuit.
FockArray two_copy_filter_circuit_action(int n, double q, int dim);

/// The same action from the closed-form operator expansion
///   F = q/4 (n-1)(n-4) |0>_C + 1/4 n(n-5) |1>_C - 1/4 a^2 (q sqrt2 |2>_C + sqrt6 |3>_C),
/// valid for n = 0, 1, 2:
///   |0> -> q|0,0>,   |1> -> -|1,1>,
///   |2> -> -1/2 |2>(q|0> + 3|1>) - 1/2 |0>(q|2> + sqrt3 |3>).
FockArray two_copy_filter_fock_action(int n, double q, int dim);

/// Full filter matrix (d*d x d): columns are the images of |n>_A.
Eigen::MatrixXcd two_copy_filter_matrix_circuit(double q, int dim);
Eigen::MatrixXcd two_copy_filter_matrix_closed_form(double q, int dim);

/// For symmetric Gaussian inputs the two-copy de-Gaussifier squares the
/// relevant elements: rho'_{00,00} = q^4 rho_{00,00}^2,
/// rho'_{10,10} = q^2 rho_{10,10}^2, rho'_{11,00} = q^2 rho_{11,00}^2.
/// Given the input ratios (g10, g11) = (rho_{10,10}, rho_{11,00})/rho_{00,00}
/// this yields the sigma elements of the stage output directly.
SigmaElements two_copy_sigma_for_gaussian(double g10, double g11, double q);

}  // namespace cvdistill

#endif
