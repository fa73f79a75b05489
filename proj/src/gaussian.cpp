#include "cvdistill/gaussian.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace cvdistill {

namespace {

Eigen::MatrixXd phase_flip_sigma(int n_modes) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) s(2 * m + 1, 2 * m + 1) = -1.0;
    return s;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0)
        throw DomainError("covariance matrix must be square with even dimension");
}

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
    return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

CovarianceMatrix CovarianceMatrix::from_symmetric(const SymmetricGaussianState& state) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
    g(0, 0) = g(1, 1) = g(2, 2) = g(3, 3) = state.C;
    g(0, 2) = g(2, 0) = state.S;
    g(1, 3) = g(3, 1) = -state.S;
    return CovarianceMatrix(std::move(g));
}

CovarianceMatrix CovarianceMatrix::tmsv(double r) {
    return from_symmetric({std::cosh(2 * r), std::sinh(2 * r)});
}

Eigen::MatrixXd CovarianceMatrix::symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    return omega;
}

double CovarianceMatrix::min_uncertainty_eigenvalue() const {
    const int n = static_cast<int>(m_.rows());
    Eigen::MatrixXcd h = m_.cast<std::complex<double>>();
    h += std::complex<double>(0, 1) * symplectic_form(n / 2).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SymmetricGaussianState CovarianceMatrix::to_symmetric(double tol) const {
    if (modes() != 2) throw DomainError("to_symmetric requires a two-mode covariance matrix");
    const double C = 0.25 * (m_(0, 0) + m_(1, 1) + m_(2, 2) + m_(3, 3));
    const double S = 0.5 * (m_(0, 2) - m_(1, 3));
    Eigen::MatrixXd ref = from_symmetric({C, S}).matrix();
    const double dev = (m_ - ref).cwiseAbs().maxCoeff();
    if (dev > tol) {
        std::ostringstream os;
        os << "covariance matrix is not of the symmetric form (deviation " << dev << ")";
        throw SymmetryViolationError(os.str());
    }
    return {C, S};
}

Eigen::MatrixXd GaussianOperation::full() const {
    const int n = static_cast<int>(gamma1.rows());
    Eigen::MatrixXd g(2 * n, 2 * n);
    g.topLeftCorner(n, n) = gamma1;
    g.topRightCorner(n, n) = gamma12;
    g.bottomLeftCorner(n, n) = gamma12.transpose();
    g.bottomRightCorner(n, n) = gamma2;
    return g;
}

bool GaussianOperation::admissible(double slack) const {
    return CovarianceMatrix(full()).physical(slack);
}

GaussianOperation GaussianOperation::identity_channel(int n_modes, double s) {
    // One EPR pair (out, in) per mode: gamma1 = gamma2 = cosh(2s) I,
    // gamma12 = sinh(2s) Z per mode.
    const int n = 2 * n_modes;
    GaussianOperation op;
    op.gamma1 = std::cosh(2 * s) * Eigen::MatrixXd::Identity(n, n);
    op.gamma2 = op.gamma1;
    op.gamma12 = std::sinh(2 * s) * phase_flip_sigma(n_modes);
    return op;
}

GaussianOperation GaussianOperation::attenuation(int n_modes, double T, double s) {
    if (T < 0.0 || T > 1.0) throw DomainError("attenuation requires T in [0, 1]");
    // Choi state of the channel: half of an EPR(s) pair through the loss.
    const int n = 2 * n_modes;
    const double c = std::cosh(2 * s), sh = std::sinh(2 * s);
    GaussianOperation op;
    op.gamma1 = (T * c + (1.0 - T)) * Eigen::MatrixXd::Identity(n, n);
    op.gamma2 = c * Eigen::MatrixXd::Identity(n, n);
    op.gamma12 = std::sqrt(T) * sh * phase_flip_sigma(n_modes);
    return op;
}

GaussianOperation GaussianOperation::symmetric_tmsv_filter(double s) {
    if (s < 0.0) throw DomainError("filter squeezing must be non-negative");
    return identity_channel(2, s);
}

SymmetricGaussianState cs_from_rt(double r, double T) {
    if (r < 0.0) throw DomainError("squeezing r must be non-negative");
    if (!(T > 0.0) || T > 1.0) throw DomainError("transmittance T must lie in (0, 1]");
    return {T * std::cosh(2 * r) + 1.0 - T, T * std::sinh(2 * r)};
}

SymmetricGaussianState cs_from_rt(const ChannelParametrization& rt) {
    SymmetricGaussianState s = cs_from_rt(rt.r, rt.T);
    if (rt.phase_flipped) s.S = -s.S;
    return s;
}

ChannelParametrization rt_from_cs(const SymmetricGaussianState& state) {
    const bool flipped = state.S < 0.0;
    const double S = std::abs(state.S);
    const double C = state.C;
    if (S != 0.0 && std::abs(C - 1.0) < 1e-14) {
        throw DegenerateDecompositionError(
            "C = 1: no lossy-channel decomposition exists for this state");
    }
    if (!state.admissible(1e-12)) throw DomainError("state violates the uncertainty relation");
    if (S == 0.0) throw DomainError("rt_from_cs requires S != 0");
    if (!state.entangled()) throw DomainError("rt_from_cs requires an entangled state");
    // tanh(2r) = 2S(C-1)/(S^2+(C-1)^2) collapses to tanh(r) = (C-1)/S, which
    // stays well conditioned at large squeezing
    ChannelParametrization rt;
    rt.r = std::atanh((C - 1.0) / S);
    rt.T = (S * S - (C - 1.0) * (C - 1.0)) / (2.0 * (C - 1.0));
    rt.phase_flipped = flipped;
    if (!(rt.T > 0.0) || rt.T > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "channel decomposition left the physical range: T = " << rt.T;
        throw DomainError(os.str());
    }
    rt.T = std::min(rt.T, 1.0);
    return rt;
}

double epsilon_from_cs(const SymmetricGaussianState& state) {
    if (state.S == 0.0) throw DomainError("epsilon is undefined at S = 0");
    return (state.C * state.C - state.S * state.S - 1.0) / (2.0 * state.S);
}

double purity(const SymmetricGaussianState& state) {
    if (!state.admissible(1e-12)) throw DomainError("state violates the uncertainty relation");
    const double det = CovarianceMatrix::from_symmetric(state).matrix().determinant();
    return 1.0 / std::sqrt(det);
}

double purity_closed_form(double r, double epsilon) {
    return 1.0 / (1.0 - 2.0 * epsilon * epsilon - 2.0 * epsilon * epsilon * std::cosh(2 * r) +
                  2.0 * epsilon * std::sinh(2 * r));
}

double eof_symmetric(const SymmetricGaussianState& state) {
    const double delta = state.epr_variance();
    if (delta >= 1.0) return 0.0;
    const double sq = std::sqrt(delta);
    const double cp = (1.0 / sq + sq) * (1.0 / sq + sq) / 4.0;
    const double cm = (1.0 / sq - sq) * (1.0 / sq - sq) / 4.0;
    return cp * std::log2(cp) - cm * std::log2(cm);
}

CovarianceMatrix lossy_channel(const CovarianceMatrix& gamma, double T) {
    if (T < 0.0 || T > 1.0) throw DomainError("lossy channel requires T in [0, 1]");
    const int n = static_cast<int>(gamma.matrix().rows());
    return CovarianceMatrix(T * gamma.matrix() + (1.0 - T) * Eigen::MatrixXd::Identity(n, n));
}

CovarianceMatrix gaussian_cp_map(const GaussianOperation& op, const CovarianceMatrix& gamma) {
    const int n = static_cast<int>(gamma.matrix().rows());
    if (op.gamma2.rows() != n)
        throw DomainError("operation and state mode counts do not match");
    const Eigen::MatrixXd sigma = phase_flip_sigma(n / 2);
    Eigen::MatrixXd bracket = op.gamma2 + sigma * gamma.matrix() * sigma.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(bracket);
    if (!lu.isInvertible())
        throw SingularMatrixError("Gamma2 + Sigma gamma Sigma^T is singular");
    Eigen::MatrixXd out = op.gamma1 - op.gamma12 * lu.solve(op.gamma12.transpose());
    return CovarianceMatrix(std::move(out));
}

SymmetricGaussianState symmetric_gaussian_filter(const SymmetricGaussianState& state, double s) {
    if (s < 0.0) throw DomainError("filter squeezing must be non-negative");
    const double C = state.C, S = state.S;
    const double ch = std::cosh(2 * s);
    const double sh = std::sinh(2 * s);
    const double denom = (C + ch) * (C + ch) - S * S;
    return {(C * (ch * ch + 1.0) + (C * C - S * S + 1.0) * ch) / denom,
            S * sh * sh / denom};
}

}  // namespace cvdistill
