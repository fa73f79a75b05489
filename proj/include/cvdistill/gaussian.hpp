#ifndef CVDISTILL_GAUSSIAN_HPP
#define CVDISTILL_GAUSSIAN_HPP

#include <Eigen/Dense>

#include "cvdistill/errors.hpp"
#include "cvdistill/tolerances.hpp"

namespace cvdistill {

/// Symmetric two-mode Gaussian state, parametrized by the quadrature
/// variance C and correlation S of its covariance matrix
///
///     [ C  0  S  0 ]
///     [ 0  C  0 -S ]
///     [ S  0  C  0 ]
///     [ 0 -S  0  C ]
///
/// in (x1, p1, x2, p2) ordering with vacuum = identity.
struct SymmetricGaussianState {
    double C = 1.0;
    double S = 0.0;

    /// Uncertainty relation: C >= 1 and C^2 - S^2 >= 1.
    bool admissible(double slack = 0.0) const {
        return C >= 1.0 - slack && C * C - S * S >= 1.0 - slack;
    }
    /// EPR variance of the symmetric state.
    double epr_variance() const { return C - std::abs(S); }
    /// Entangled iff C - |S| < 1.
    bool entangled() const { return epr_variance() < 1.0; }
};

/// Equivalent representation: a pure two-mode squeezed vacuum with squeezing
/// r sent through identical lossy channels of intensity transmittance T.
/// `phase_flipped` records the local phase rotation used to canonicalize a
/// negative S before the decomposition.
struct ChannelParametrization {
    double r = 0.0;
    double T = 1.0;
    bool phase_flipped = false;

    double lambda() const { return std::tanh(r); }
};

/// Real symmetric 2Nx2N covariance matrix, gamma_jk = <{Delta r_j, Delta r_k}>,
/// quadratures ordered (x1, p1, ..., xN, pN), vacuum = identity.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;
    explicit CovarianceMatrix(Eigen::MatrixXd m);

    static CovarianceMatrix vacuum(int n_modes);
    static CovarianceMatrix from_symmetric(const SymmetricGaussianState& state);
    /// Two-mode squeezed vacuum with squeezing r.
    static CovarianceMatrix tmsv(double r);

    int modes() const { return static_cast<int>(m_.rows()) / 2; }
    const Eigen::MatrixXd& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    /// Standard symplectic form Omega for this mode count.
    static Eigen::MatrixXd symplectic_form(int n_modes);

    /// Smallest eigenvalue of gamma + i*Omega; >= 0 (up to slack) for
    /// physical states.
    double min_uncertainty_eigenvalue() const;
    bool physical(double slack = 1e-9) const {
        return min_uncertainty_eigenvalue() >= -slack;
    }

    /// Reads (C, S) off a two-mode matrix of the symmetric form; checks the
    /// structure within `tol`.
    SymmetricGaussianState to_symmetric(double tol = 1e-8) const;

private:
    Eigen::MatrixXd m_;
};

/// Gaussian completely positive map, described by the covariance matrix of
/// its Choi state split into output (1) and input (2) blocks:
///
///     Gamma = [ Gamma1    Gamma12 ]
///             [ Gamma12^T Gamma2  ]
///
/// Blocks are 2Nx2N for a map on N modes.
struct GaussianOperation {
    Eigen::MatrixXd gamma1;
    Eigen::MatrixXd gamma2;
    Eigen::MatrixXd gamma12;

    int modes() const { return static_cast<int>(gamma1.rows()) / 2; }
    /// Full 4Nx4N Choi covariance matrix.
    Eigen::MatrixXd full() const;
    bool admissible(double slack = 1e-9) const;

    /// Identity channel on n modes, approximated by EPR pairs with finite
    /// squeezing s (exact in the s -> inf limit).
    static GaussianOperation identity_channel(int n_modes, double s);
    /// Lossy channel of transmittance T via its beam-splitter dilation,
    /// again with an EPR ancilla of finite squeezing s.
    static GaussianOperation attenuation(int n_modes, double T, double s);
    /// The local two-mode filter of the noiseless-attenuation kind: a
    /// TMSV-pair resource with squeezing s on each side. Exact at finite s;
    /// equivalent to the Fock-diagonal filter tau^n with tau = tanh(s).
    static GaussianOperation symmetric_tmsv_filter(double s);
};

/// C = T cosh(2r) + 1 - T,  S = T sinh(2r).
SymmetricGaussianState cs_from_rt(double r, double T);
SymmetricGaussianState cs_from_rt(const ChannelParametrization& rt);

/// Inverse of cs_from_rt. States with S < 0 are canonicalized by a local
/// phase flip first (recorded in the result). Throws
/// DegenerateDecompositionError at C = 1, DomainError for inadmissible or
/// separable states.
ChannelParametrization rt_from_cs(const SymmetricGaussianState& state);

/// epsilon = (C^2 - S^2 - 1) / (2S), the invariant of the baseline
/// distillation protocol; equals (1 - T) tanh(r).
double epsilon_from_cs(const SymmetricGaussianState& state);

/// Purity P = 1/sqrt(det gamma).
double purity(const SymmetricGaussianState& state);

/// Closed form of the purity in terms of (r, epsilon):
/// P = [1 - 2 eps^2 - 2 eps^2 cosh(2r) + 2 eps sinh(2r)]^{-1}.
double purity_closed_form(double r, double epsilon);

/// Entanglement of formation (ebits) of the symmetric state, as a function
/// of the EPR variance delta = C - |S|:
///   E_f = c+ log2(c+) - c- log2(c-),  c+- = (delta^{-1/2} +- delta^{1/2})^2 / 4.
/// Zero for separable states. Coincides with the Schmidt entropy of the
/// two-mode squeezed vacuum at T = 1.
double eof_symmetric(const SymmetricGaussianState& state);

/// gamma' = T gamma + (1 - T) I  (identical channels on every mode).
CovarianceMatrix lossy_channel(const CovarianceMatrix& gamma, double T);

/// gamma' = Gamma1 - Gamma12 [Gamma2 + Sigma gamma Sigma^T]^{-1} Gamma12^T,
/// Sigma = diag(1,-1,...). Throws SingularMatrixError when the bracket is
/// not invertible.
CovarianceMatrix gaussian_cp_map(const GaussianOperation& op, const CovarianceMatrix& gamma);

/// Closed form of the symmetric local Gaussian filter with squeezing s:
///   C' = [C(cosh^2 2s + 1) + (C^2 - S^2 + 1) cosh 2s] / [(C + cosh 2s)^2 - S^2]
///   S' = S sinh^2 2s / [(C + cosh 2s)^2 - S^2]
SymmetricGaussianState symmetric_gaussian_filter(const SymmetricGaussianState& state, double s);

}  // namespace cvdistill

#endif
