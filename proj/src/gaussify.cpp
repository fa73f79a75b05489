#include "cvdistill/gaussify.hpp"

#include <cmath>
#include <sstream>

namespace cvdistill {

namespace {

using Eigen::MatrixXcd;

// <0|_c U_bs as a d x d^2 matrix: beam splitter fused with the vacuum
// projection of the second output. Applying it to the mode pair (j, k)
// replaces them by the single surviving mode at j's position.
MatrixXcd bs_vacuum_kraus(int dim) {
    const MatrixXcd u = balanced_beam_splitter_op(dim);
    MatrixXcd m(dim, dim * dim);
    for (int a = 0; a < dim; ++a) m.row(a) = u.row(a * dim + 0);
    return m;
}

}  // namespace

WeightedState gaussification_step(const FockArray& rho, const Tolerances& tol) {
    if (rho.num_modes() != 2) throw DomainError("gaussification_step takes a two-mode state");
    const int d = rho.dims()[0];
    if (rho.dims()[1] != d) throw DomainError("gaussification_step requires equal cutoffs");
    const double t = std::abs(rho.trace());
    if (std::abs(t - 1.0) > 1e-6)
        throw DomainError("gaussification_step expects a normalized input state");

    // two copies, modes (A,B,C,D); Alice interferes (A,C), Bob (B,D)
    FockArray four = FockArray::tensor(rho.to_density(), rho.to_density());
    const MatrixXcd m = bs_vacuum_kraus(d);
    const int out_dims[1] = {d};
    {
        const int modes[2] = {0, 2};
        four = four.applied(m, modes, out_dims);  // now (A, B, D)
    }
    {
        const int modes[2] = {1, 2};
        four = four.applied(m, modes, out_dims);  // now (A, B)
    }
    const double weight = std::abs(four.trace());
    if (weight < tol.weight_floor)
        throw ZeroWeightError("gaussification step weight fell below the floor", weight);
    return {std::move(four), weight};
}

SigmaElements sigma_from_rho1(const FockArray& rho1, const Tolerances& tol) {
    if (rho1.num_modes() != 2) throw DomainError("sigma_from_rho1 takes a two-mode state");
    const int k00[2] = {0, 0};
    const int k10[2] = {1, 0};
    const int k01[2] = {0, 1};
    const int k11[2] = {1, 1};
    const int k20[2] = {2, 0};
    const int k02[2] = {0, 2};

    const double r0000 = rho1.element(k00, k00).real();
    if (!(r0000 > 0.0))
        throw DomainError("rho_{00,00} must be positive to form sigma");

    auto rel = [&](std::span<const int> a, std::span<const int> b) {
        return rho1.element(a, b) / r0000;
    };

    SigmaElements sig;
    sig.s10_10 = rel(k10, k10).real();
    sig.s01_01 = rel(k01, k01).real();
    sig.s11_00 = rel(k11, k00).real();
    sig.s00_11 = rel(k00, k11).real();

    double zp = 0.0;
    if (rho1.dims()[0] > 2 && rho1.dims()[1] > 2) {
        zp = std::max({std::abs(rel(k20, k00)), std::abs(rel(k02, k00)),
                       std::abs(rel(k00, k20)), std::abs(rel(k00, k02))});
    }
    zp = std::max({zp, std::abs(rel(k10, k01)), std::abs(rel(k01, k10))});
    sig.zero_pattern_max = zp;
    sig.symmetry_error = std::max(std::abs(sig.s10_10 - sig.s01_01),
                                  std::abs(sig.s11_00 - sig.s00_11));

    if (zp > tol.zero_pattern || sig.symmetry_error > tol.zero_pattern) {
        std::ostringstream os;
        os << "sigma elements violate the symmetric-class pattern (zero-pattern max " << zp
           << ", pairing mismatch " << sig.symmetry_error << ")";
        throw SymmetryViolationError(os.str());
    }
    return sig;
}

double epsilon_from_sigma(const SigmaElements& sig) {
    if (std::abs(sig.s11_00) < 1e-300)
        throw DomainError("sigma_{11,00} vanishes; epsilon undefined");
    return sig.s10_10 / sig.s11_00;
}

std::pair<double, double> family_element_ratios(double lambda, double T, int cutoff) {
    FockArray rho = tmsv(lambda, cutoff, 1.0).to_density();
    rho = apply_loss(rho, T, 0);
    rho = apply_loss(rho, T, 1);
    const int k00[2] = {0, 0};
    const int k10[2] = {1, 0};
    const int k11[2] = {1, 1};
    const double r00 = rho.element(k00, k00).real();
    return {rho.element(k10, k10).real() / r00, rho.element(k11, k00).real() / r00};
}

SymmetricGaussianState asymptotic_state(const SigmaElements& sig, int cutoff,
                                        const Tolerances& tol) {
    const double s10 = sig.s10_10;
    const double s11 = sig.s11_00;
    if (!(s11 > 0.0)) throw DomainError("sigma_{11,00} must be positive");

    // epsilon = 0 (pure target): T' = 1 and lambda' = s11 exactly.
    if (std::abs(s10) < 1e-14 * s11) {
        const double lam = s11;
        if (lam >= 1.0) throw DomainError("sigma elements lie outside the state family");
        return cs_from_rt(std::atanh(lam), 1.0);
    }
    if (s10 < 0.0) throw DomainError("sigma_{10,10} must be non-negative");

    // seed from the geometric-series solution of the untruncated family
    const double eps = s10 / s11;
    double lam = eps + s11 * (1.0 - eps * eps);
    if (lam >= 1.0 || eps >= lam) {
        std::ostringstream os;
        os << "sigma elements (s10=" << s10 << ", s11=" << s11
           << ") do not match any lossy-TMSV family member";
        throw DomainError(os.str());
    }
    double T = 1.0 - eps / lam;

    auto clamp = [](double v, double lo, double hi) { return std::min(std::max(v, lo), hi); };
    const double scale = std::max(std::max(s10, s11), 1e-30);

    for (int it = 0; it < 80; ++it) {
        const auto [g1, g2] = family_element_ratios(lam, T, cutoff);
        const double f1 = g1 - s10;
        const double f2 = g2 - s11;
        if (std::max(std::abs(f1), std::abs(f2)) < tol.root_tol * scale)
            return cs_from_rt(std::atanh(lam), T);

        const double hl = 1e-7 * std::max(lam, 1e-3);
        const double ht = 1e-7;
        const double lp = clamp(lam + hl, 0.0, 1.0 - 1e-12);
        const double lm = clamp(lam - hl, 1e-12, 1.0);
        const double tp = clamp(T + ht, 0.0, 1.0);
        const double tm = clamp(T - ht, 1e-12, 1.0);
        const auto [g1lp, g2lp] = family_element_ratios(lp, T, cutoff);
        const auto [g1lm, g2lm] = family_element_ratios(lm, T, cutoff);
        const auto [g1tp, g2tp] = family_element_ratios(lam, tp, cutoff);
        const auto [g1tm, g2tm] = family_element_ratios(lam, tm, cutoff);
        const double j11 = (g1lp - g1lm) / (lp - lm);
        const double j21 = (g2lp - g2lm) / (lp - lm);
        const double j12 = (g1tp - g1tm) / (tp - tm);
        const double j22 = (g2tp - g2tm) / (tp - tm);

        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300)
            throw ConvergenceError("singular Jacobian in the fixed-point match");
        double dl = (f1 * j22 - f2 * j12) / det;
        double dt = (j11 * f2 - j21 * f1) / det;

        // keep the iterate strictly inside the family box
        double damp = 1.0;
        while (damp > 1e-6 &&
               (lam - damp * dl <= 0.0 || lam - damp * dl >= 1.0 || T - damp * dt <= 0.0 ||
                T - damp * dt > 1.0))
            damp *= 0.5;
        lam = clamp(lam - damp * dl, 1e-12, 1.0 - 1e-12);
        T = clamp(T - damp * dt, 1e-12, 1.0);
        if (std::abs(damp * dl) < 1e-15 && std::abs(damp * dt) < 1e-15) break;
    }
    const auto [g1, g2] = family_element_ratios(lam, T, cutoff);
    if (std::max(std::abs(g1 - s10), std::abs(g2 - s11)) < 1e3 * tol.root_tol * scale)
        return cs_from_rt(std::atanh(lam), T);
    std::ostringstream os;
    os << "fixed-point match did not converge (s10=" << s10 << ", s11=" << s11
       << ", lambda=" << lam << ", T=" << T << ")";
    throw ConvergenceError(os.str());
}

double trace_distance(const FockArray& a, const FockArray& b) {
    const MatrixXcd diff = a.to_density().data() - b.to_density().data();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (diff + diff.adjoint()),
                                                Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

GaussifyRun iterate_to_convergence(const FockArray& rho, int max_iters, double tol_td,
                                   const Tolerances& tol) {
    GaussifyRun run;
    run.state = rho.to_density().normalized();
    for (int it = 0; it < max_iters; ++it) {
        WeightedState next = gaussification_step(run.state, tol);
        run.weights.push_back(next.weight);
        FockArray normalized = next.rho.normalized();
        run.last_delta = trace_distance(normalized, run.state);
        run.state = std::move(normalized);
        run.iterations = it + 1;
        if (run.last_delta < tol_td) {
            run.converged = true;
            break;
        }
    }
    return run;
}

}  // namespace cvdistill
