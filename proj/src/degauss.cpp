#include "cvdistill/degauss.hpp"

#include <cmath>

namespace cvdistill {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixXcd n_minus_1_diag(int dim) {
    MatrixXcd z = MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) z(n, n) = n - 1.0;
    return z;
}

}  // namespace

WeightedState single_photon_subtract(const FockArray& rho, double weight_floor) {
    if (rho.num_modes() != 2) throw DomainError("single_photon_subtract takes a two-mode state");
    WeightedState a = fock_filter(rho, 0, FilterKind::annihilate, 0.0, weight_floor);
    WeightedState b = fock_filter(a.rho, 1, FilterKind::annihilate, 0.0, weight_floor);
    return {std::move(b.rho), a.weight * b.weight};
}

WeightedState local_gaussian_filter_tau(const FockArray& rho, double tau) {
    if (!(tau > 0.0) || tau > 1.0) throw DomainError("tau^n filter requires tau in (0, 1]");
    if (rho.num_modes() != 2) throw DomainError("local_gaussian_filter_tau takes a two-mode state");
    FockArray out = rho.to_density();
    double weight = 1.0;
    for (int mode = 0; mode < 2; ++mode) {
        const int d = out.dims()[mode];
        MatrixXcd z = MatrixXcd::Zero(d, d);
        double p = 1.0;
        for (int n = 0; n < d; ++n, p *= tau) z(n, n) = p;
        const double t_in = std::abs(out.trace());
        const int modes[1] = {mode};
        const int out_dims[1] = {d};
        out = out.applied(z, modes, out_dims);
        weight *= std::abs(out.trace()) / t_in;
    }
    return {std::move(out), weight};
}

WeightedState two_copy_degauss(const FockArray& rho_ab, const FockArray& rho_cd,
                               const TwoCopyFilterSpec& spec, const Tolerances& tol) {
    if (rho_ab.num_modes() != 2 || rho_cd.num_modes() != 2)
        throw DomainError("two_copy_degauss takes two two-mode states");
    const int d = rho_ab.dims()[0];
    for (int dd : rho_ab.dims())
        if (dd != d) throw DomainError("two_copy_degauss requires a shared cutoff");
    for (int dd : rho_cd.dims())
        if (dd != d) throw DomainError("two_copy_degauss requires a shared cutoff");

    const double t_in = std::abs(rho_ab.trace()) * std::abs(rho_cd.trace());

    // modes (A, B, C, D) = (0, 1, 2, 3); Alice holds A, C and Bob holds B, D
    FockArray four = FockArray::tensor(rho_ab.to_density(), rho_cd.to_density());

    four = beam_splitter(four, 0, 2);
    four = beam_splitter(four, 1, 3);
    const MatrixXcd z = n_minus_1_diag(d);
    const int out_dims[1] = {d};
    for (int mode = 0; mode < 4; ++mode) {
        const int modes[1] = {mode};
        four = four.applied(z, modes, out_dims);
    }
    four = beam_splitter(four, 0, 2);
    four = beam_splitter(four, 1, 3);

    WeightedState pc = project(four, 2, Projector::q_state(spec.q), tol.weight_floor);
    WeightedState pd = project(pc.rho, 2, Projector::q_state(spec.q), tol.weight_floor);

    const double weight = std::abs(pd.rho.trace()) / t_in;
    if (weight < tol.weight_floor)
        throw ZeroWeightError("two-copy de-Gaussification weight fell below the floor", weight);
    return {std::move(pd.rho), weight};
}

FockArray two_copy_filter_circuit_action(int n, double q, int dim) {
    if (n < 0 || n >= dim) throw DomainError("Fock index outside the cutoff");
    VectorXcd v = VectorXcd::Zero(static_cast<long>(dim) * dim);
    v(static_cast<long>(n) * dim + 0) = q;
    if (dim > 1) v(static_cast<long>(n) * dim + 1) = 1.0;
    FockArray state = FockArray::pure({dim, dim}, std::move(v));
    state = beam_splitter(state, 0, 1);
    const MatrixXcd z = n_minus_1_diag(dim);
    const int out_dims[1] = {dim};
    for (int mode = 0; mode < 2; ++mode) {
        const int modes[1] = {mode};
        state = state.applied(z, modes, out_dims);
    }
    return beam_splitter(state, 0, 1);
}

FockArray two_copy_filter_fock_action(int n, double q, int dim) {
    if (n < 0 || n > 2) throw DomainError("closed-form filter action is stated for n = 0, 1, 2");
    if (dim < 4) throw DomainError("need at least four Fock levels for the filter action");
    VectorXcd v = VectorXcd::Zero(static_cast<long>(dim) * dim);
    switch (n) {
        case 0:
            v(0) = q;  // q|0,0>
            break;
        case 1:
            v(static_cast<long>(1) * dim + 1) = -1.0;  // -|1,1>
            break;
        case 2:
            v(static_cast<long>(2) * dim + 0) = -0.5 * q;
            v(static_cast<long>(2) * dim + 1) = -1.5;
            v(2) = -0.5 * q;
            v(3) = -0.5 * std::sqrt(3.0);
            break;
    }
    return FockArray::pure({dim, dim}, std::move(v));
}

Eigen::MatrixXcd two_copy_filter_matrix_circuit(double q, int dim) {
    MatrixXcd f(static_cast<long>(dim) * dim, dim);
    for (int n = 0; n < dim; ++n) f.col(n) = two_copy_filter_circuit_action(n, q, dim).data();
    return f;
}

Eigen::MatrixXcd two_copy_filter_matrix_closed_form(double q, int dim) {
    // F = q/4 (n-1)(n-4) (x) |0>_C + 1/4 n(n-5) (x) |1>_C
    //     - 1/4 a^2 (x) (q sqrt2 |2>_C + sqrt6 |3>_C)
    const MatrixXcd nn = number_op(dim);
    const MatrixXcd id = MatrixXcd::Identity(dim, dim);
    const MatrixXcd a = annihilation_op(dim);
    const MatrixXcd term0 = 0.25 * q * (nn - id) * (nn - 4.0 * id);
    const MatrixXcd term1 = 0.25 * nn * (nn - 5.0 * id);
    const MatrixXcd term2 = -0.25 * a * a;

    MatrixXcd f = MatrixXcd::Zero(static_cast<long>(dim) * dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            f(static_cast<long>(m) * dim + 0, n) += term0(m, n);
            f(static_cast<long>(m) * dim + 1, n) += term1(m, n);
            if (dim > 2) f(static_cast<long>(m) * dim + 2, n) += q * std::sqrt(2.0) * term2(m, n);
            if (dim > 3) f(static_cast<long>(m) * dim + 3, n) += std::sqrt(6.0) * term2(m, n);
        }
    return f;
}

SigmaElements two_copy_sigma_for_gaussian(double g10, double g11, double q) {
    if (q == 0.0) throw DomainError("two-copy filter requires q != 0");
    SigmaElements sig;
    sig.s10_10 = sig.s01_01 = (g10 * g10) / (q * q);
    sig.s11_00 = sig.s00_11 = (g11 * g11) / (q * q);
    return sig;
}

}  // namespace cvdistill
