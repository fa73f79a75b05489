#ifndef CVDISTILL_FOCK_HPP
#define CVDISTILL_FOCK_HPP

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cvdistill/errors.hpp"
#include "cvdistill/gaussian.hpp"
#include "cvdistill/tolerances.hpp"

namespace cvdistill {

/// Multimode array in the truncated Fock basis. Serves as a pure state
/// (column vector), a general operator, or a density matrix, over modes with
/// per-mode cutoff dims()[m] (occupation 0 .. dims()[m]-1).
///
/// Index convention: flat index = sum_m i_m * stride_m with mode 0 slowest
/// (mode-major). Density matrices are stored as D x D matrices with the ket
/// multi-index on rows and the bra multi-index on columns.
///
/// Mode ordering throughout the protocol code: Alice's modes before Bob's,
/// copy-major. Two copies of a shared two-mode state occupy
/// (A, B, C, D) = (0, 1, 2, 3) with A, C held by Alice and B, D by Bob.
class FockArray {
public:
    enum class Kind { PureState, Operator, DensityMatrix };

    FockArray() = default;

    static FockArray vacuum(int n_modes, int dim);
    static FockArray pure(std::vector<int> dims, Eigen::VectorXcd amplitudes);
    static FockArray density(std::vector<int> dims, Eigen::MatrixXcd matrix);
    static FockArray tensor(const FockArray& a, const FockArray& b);

    Kind kind() const { return kind_; }
    int num_modes() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    long total_dim() const;

    const Eigen::MatrixXcd& data() const { return data_; }

    std::complex<double> amplitude(std::span<const int> ket) const;
    std::complex<double> element(std::span<const int> ket, std::span<const int> bra) const;

    std::complex<double> trace() const;
    FockArray to_density() const;
    FockArray normalized() const;

    double hermiticity_error() const;
    double min_eigenvalue() const;
    /// tr(rho^2) / tr(rho)^2 for density matrices, 1 for pure states.
    double purity() const;
    /// Population of the top Fock level of one mode (truncation-leakage
    /// estimate), relative to the trace.
    double top_level_population(int mode) const;
    double max_leakage() const;

    /// Applies `op` (rows: new joint index of `out_dims`, cols: joint index
    /// of `modes`, both mode-major in the order given) to the ket side; for
    /// density matrices the conjugate is applied to the bra side as well,
    /// i.e. rho -> op rho op^dagger. The output modes take the positions of
    /// the first out_dims.size() input modes; remaining input modes vanish.
    /// `modes` must be strictly ascending.
    FockArray applied(const Eigen::MatrixXcd& op, std::span<const int> modes,
                      std::span<const int> out_dims) const;

    /// Ket-side-only application (rho -> op rho). Mode count must be
    /// preserved (out_dims = in dims).
    FockArray applied_left(const Eigen::MatrixXcd& op, std::span<const int> modes) const;

private:
    std::vector<int> dims_;
    Kind kind_ = Kind::PureState;
    Eigen::MatrixXcd data_;

    std::vector<long> strides() const;
    long flat_index(std::span<const int> idx) const;
};

/// Unnormalized conditional state plus its accumulated success weight: the
/// trace of the unnormalized state relative to a normalized pipeline input.
/// Weights multiply under composition. With the unnormalized-filter
/// convention (raw Z and <0|(a+q), no normalization constants) a weight may
/// exceed 1; it is a relative measure, not a probability.
struct WeightedState {
    FockArray rho;
    double weight = 1.0;
};

/// Elementary one-mode operators on a d-dimensional truncated space.
Eigen::MatrixXcd annihilation_op(int dim);
Eigen::MatrixXcd creation_op(int dim);
Eigen::MatrixXcd number_op(int dim);
Eigen::MatrixXcd quadrature_x(int dim);
Eigen::MatrixXcd quadrature_p(int dim);

/// Balanced beam splitter on two modes of equal cutoff, with the convention
/// U^dagger a U = (a + c)/sqrt(2), U^dagger c U = (a - c)/sqrt(2).
/// The matrix is an involution (U = U^dagger = U^{-1}) and is unitary on
/// every photon-number sector that fits the cutoff.
Eigen::MatrixXcd balanced_beam_splitter_op(int dim);

/// Two-mode squeezed vacuum sqrt(1-lambda^2) sum_n lambda^n |n,n>, truncated
/// at `dim` levels per mode. Throws CutoffError when the tail weight
/// lambda^(2 dim) exceeds `leakage_bound`.
FockArray tmsv(double lambda, int dim, double leakage_bound = Tolerances{}.leakage_bound);

/// (|00> + lambda |11>)/sqrt(1+lambda^2).
FockArray truncated_tmsv(double lambda, int dim);

/// Amplitude-damping channel of transmittance T on one mode, as the Kraus sum
/// rho -> sum_k K_k rho K_k^dagger with
/// K_k = sum_n sqrt(binom(n,k)) T^((n-k)/2) (1-T)^(k/2) |n-k><n|.
/// Exactly trace-preserving at any cutoff.
FockArray apply_loss(const FockArray& rho, double T, int mode);

/// Balanced beam splitter applied to modes (j, k); works on pure states,
/// operators and density matrices. Unitary whenever the support keeps
/// n_j + n_k below the cutoff.
FockArray beam_splitter(const FockArray& state, int mode_j, int mode_k);

enum class FilterKind {
    n_minus_1,   ///< Z = n - 1, annihilates the single-photon component
    n_plus_w,    ///< Z = n + w (the single-copy de-Gaussifier family)
    annihilate,  ///< Z = a
    create,      ///< Z = a^dagger
};

/// Applies the raw (unnormalized) filter Z to one mode: rho -> Z rho Z^dagger,
/// weight multiplied by the trace ratio. Throws ZeroWeightError when the
/// conditional trace falls below `weight_floor`.
WeightedState fock_filter(const FockArray& rho, int mode, FilterKind kind, double w = 0.0,
                          double weight_floor = Tolerances{}.weight_floor);

/// Measurement functional applied to one mode, which is then removed from
/// the array. Vacuum projection uses <0|; the q-state uses the unnormalized
/// <0|(a + q) = q<0| + <1|.
struct Projector {
    static Projector vacuum() { return {false, 0.0}; }
    static Projector q_state(double q) { return {true, q}; }
    bool is_q = false;
    double q = 0.0;
};

WeightedState project(const FockArray& rho, int mode, const Projector& target,
                      double weight_floor = Tolerances{}.weight_floor);

/// Reduced state with the listed modes traced out; trace preserved.
FockArray partial_trace(const FockArray& rho, std::span<const int> modes);

/// Covariance matrix gamma_jk = <{Delta r_j, Delta r_k}> of a (normalized)
/// density matrix or pure state, with x = (a + a^dag)/sqrt(2),
/// p = (a - a^dag)/(i sqrt(2)); vacuum = identity.
CovarianceMatrix covariance_of(const FockArray& rho);

/// epsilon = rho_{10,10} / rho_{11,00} for two-mode states of the symmetric
/// class. Throws when the denominator element (nearly) vanishes.
double epsilon_from_rho(const FockArray& rho);

}  // namespace cvdistill

#endif
