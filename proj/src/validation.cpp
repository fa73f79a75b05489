#include "cvdistill/validation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cvdistill/degauss.hpp"
#include "cvdistill/fock.hpp"
#include "cvdistill/gaussian.hpp"
#include "cvdistill/gaussify.hpp"
#include "cvdistill/protocol.hpp"

namespace cvdistill {

namespace {

CheckResult make_result(std::string name, double metric, double threshold,
                        std::string detail = {}) {
    CheckResult r;
    r.name = std::move(name);
    r.metric = metric;
    r.threshold = threshold;
    r.passed = metric <= threshold;
    r.detail = std::move(detail);
    return r;
}

// random two-mode state supported on total photon number <= dim-1, so the
// beam splitter is exactly unitary on it
FockArray bounded_support_state(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<long>(dim) * dim);
    for (int a = 0; a < dim; ++a)
        for (int c = 0; c + a < dim; ++c)
            v(static_cast<long>(a) * dim + c) = std::complex<double>(gauss(rng), gauss(rng));
    v.normalize();
    return FockArray::pure({dim, dim}, v);
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationConfig& config) {
    std::vector<CheckResult> results;
    const Tolerances& tol = config.tol;

    {  // (r,T) <-> (C,S) roundtrip
        double worst = 0.0;
        for (double r = 0.1; r <= 3.0; r += 0.116)
            for (double T = 0.05; T <= 1.0; T += 0.0593) {
                const auto state = cs_from_rt(r, T);
                const auto rt = rt_from_cs(state);
                worst = std::max({worst, std::abs(rt.r - r), std::abs(rt.T - T)});
            }
        results.push_back(make_result("roundtrip-rt-cs", worst, 1e-12));
    }
    {  // epsilon identity vs (1-T) tanh r
        double worst = 0.0;
        for (double r = 0.1; r <= 3.0; r += 0.116)
            for (double T = 0.05; T < 1.0; T += 0.0593) {
                const auto state = cs_from_rt(r, T);
                worst = std::max(worst,
                                 std::abs(epsilon_from_cs(state) - (1.0 - T) * std::tanh(r)));
            }
        results.push_back(make_result("epsilon-identity", worst, 1e-12));
    }
    {  // purity closed form vs 1/sqrt(det gamma)
        double worst = 0.0;
        for (double r = 0.05; r <= 2.5; r += 0.0613)
            for (double T = 0.05; T <= 1.0; T += 0.0471) {
                const auto state = cs_from_rt(r, T);
                const double eps = T < 1.0 ? (1.0 - T) * std::tanh(r) : 0.0;
                worst = std::max(worst, std::abs(purity(state) - purity_closed_form(r, eps)));
            }
        results.push_back(make_result("purity-closed-form", worst, 1e-12));
    }
    {  // local Gaussian filter leaves epsilon invariant; outputs admissible
        double worst = 0.0, worst_phys = 0.0;
        for (double r = 0.2; r <= 1.4; r += 0.3)
            for (double T = 0.2; T < 1.0; T += 0.2)
                for (double s = 0.25; s <= 2.0; s += 0.25) {
                    const auto state = cs_from_rt(r, T);
                    const auto out = symmetric_gaussian_filter(state, s);
                    worst = std::max(worst,
                                     std::abs(epsilon_from_cs(out) - epsilon_from_cs(state)));
                    worst_phys = std::max(
                        worst_phys,
                        -CovarianceMatrix::from_symmetric(out).min_uncertainty_eigenvalue());
                }
        results.push_back(make_result("gaussian-filter-epsilon-invariance", worst, 1e-10));
        results.push_back(
            make_result("covariance-physicality", worst_phys, tol.positivity_slack));
    }
    {  // tmsv leakage gate at the configured (lambda, cutoff)
        const double leakage = std::pow(config.lambda, 2 * config.cutoff);
        std::ostringstream os;
        os << "lambda = " << config.lambda << ", cutoff = " << config.cutoff;
        results.push_back(
            make_result("tmsv-cutoff-leakage", leakage, tol.leakage_bound, os.str()));
    }
    {  // beam splitter unitarity on bounded-support states
        std::mt19937 rng(7);
        double worst = 0.0;
        for (int i = 0; i < 6; ++i) {
            const FockArray psi = bounded_support_state(8, rng);
            const FockArray rho = beam_splitter(psi.to_density(), 0, 1);
            worst = std::max({worst, std::abs(rho.trace().real() - 1.0),
                              std::abs(rho.purity() - 1.0)});
        }
        results.push_back(make_result("beam-splitter-unitarity", worst, 1e-12));
    }
    {  // loss channel trace preservation
        std::mt19937 rng(11);
        double worst = 0.0;
        for (double T : {0.0, 0.3, 0.7, 1.0}) {
            const FockArray psi = bounded_support_state(8, rng);
            const FockArray rho = apply_loss(psi.to_density(), T, 0);
            worst = std::max(worst, std::abs(rho.trace().real() - 1.0));
        }
        results.push_back(make_result("loss-trace-preservation", worst, 1e-12));
    }
    {  // baseline Gaussification leaves epsilon invariant
        double worst = 0.0;
        for (double r : {0.3, 0.8})
            for (double T : {0.4, 0.7}) {
                const auto state = cs_from_rt(r, T);
                const FockArray rho = fock_state_of(state, config.four_mode_cutoff);
                const WeightedState step = gaussification_step(rho.to_density(), tol);
                const SigmaElements sig = sigma_from_rho1(step.rho, tol);
                worst = std::max(worst,
                                 std::abs(epsilon_from_sigma(sig) - epsilon_from_cs(state)));
            }
        results.push_back(make_result("gaussification-epsilon-invariance", worst, 1e-6));
    }
    {  // two-copy squaring law through the full pipeline
        double worst = 0.0;
        for (double r : {0.5, 0.8})
            for (double q : {0.8, 1.5}) {
                const auto state = cs_from_rt(r, 0.5);
                const StageReport rep = run_stage(state, q, config.four_mode_cutoff, tol);
                const double eps = rep.input.epsilon;
                worst = std::max(worst, std::abs(rep.output.epsilon - eps * eps));
            }
        results.push_back(make_result("squaring-law", worst, 1e-5));
    }
    {  // photon-subtraction worsening ratio vs its closed form
        double worst = 0.0;
        double min_ratio = 2.0;
        const int d = 32;
        for (double r : {0.3, 0.6, 1.0})
            for (double T : {0.3, 0.5, 0.8}) {
                const double lam = std::tanh(r);
                FockArray rho = tmsv(lam, d, 1.0).to_density();
                rho = apply_loss(rho, T, 0);
                rho = apply_loss(rho, T, 1);
                const WeightedState sub = single_photon_subtract(rho);
                const double ratio = epsilon_from_rho(sub.rho) / ((1.0 - T) * lam);
                const double x = lam * lam * (1.0 - T) * (1.0 - T);
                const double expected = (2.0 + x) / (1.0 + 2.0 * x);
                worst = std::max(worst, std::abs(ratio - expected));
                min_ratio = std::min(min_ratio, ratio);
            }
        std::ostringstream os;
        os << "min ratio " << min_ratio;
        results.push_back(make_result("subtraction-worsening", worst, 1e-8, os.str()));
    }
    {  // tau^n filter scales rho_{10,10} by tau^2 and preserves the ratio
        const double tau = 0.7;
        FockArray rho = fock_state_of(cs_from_rt(0.8, 0.6), 10).to_density();
        const WeightedState filtered = local_gaussian_filter_tau(rho, tau);
        const int k10[2] = {1, 0};
        const int k11[2] = {1, 1};
        const int k00[2] = {0, 0};
        const double scale_err = std::abs(filtered.rho.element(k10, k10).real() -
                                          tau * tau * rho.element(k10, k10).real());
        const double ratio_err =
            std::abs(epsilon_from_rho(filtered.rho) - epsilon_from_rho(rho));
        results.push_back(
            make_result("local-filter-ratio-preservation", std::max(scale_err, ratio_err), 1e-12));
    }
    {  // sigma zero-pattern and weight composition along a pipeline
        const auto state = cs_from_rt(0.7, 0.6);
        const FockArray rho = fock_state_of(state, config.four_mode_cutoff).to_density();
        const WeightedState filtered = two_copy_degauss(rho, rho, TwoCopyFilterSpec(1.2), tol);
        const WeightedState step = gaussification_step(filtered.rho.normalized(), tol);
        const SigmaElements sig = sigma_from_rho1(step.rho, tol);
        results.push_back(make_result("sigma-zero-pattern", sig.zero_pattern_max,
                                      tol.zero_pattern));
        const double wc =
            std::abs(step.weight - step.rho.trace().real() / filtered.rho.normalized().trace().real());
        results.push_back(make_result("weight-composition", wc, 1e-12));
    }
    return results;
}

}  // namespace cvdistill
