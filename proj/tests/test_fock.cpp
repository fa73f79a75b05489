#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cvdistill/fock.hpp"

using namespace cvdistill;

namespace {

FockArray lossy_tmsv(double lambda, double T, int dim) {
    FockArray rho = tmsv(lambda, dim, 1.0).to_density();
    rho = apply_loss(rho, T, 0);
    return apply_loss(rho, T, 1);
}

FockArray random_bounded_state(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<long>(dim) * dim);
    for (int a = 0; a < dim; ++a)
        for (int c = 0; c + a < dim; ++c)
            v(static_cast<long>(a) * dim + c) = std::complex<double>(gauss(rng), gauss(rng));
    v.normalize();
    return FockArray::pure({dim, dim}, v);
}

}  // namespace

TEST_CASE("tmsv") {
    SUBCASE("lambda = 0 is the two-mode vacuum") {
        const FockArray psi = tmsv(0.0, 6);
        const int k00[2] = {0, 0};
        CHECK(std::abs(psi.amplitude(k00) - 1.0) < 1e-15);
        CHECK(std::abs(psi.trace().real() - 1.0) < 1e-15);
    }
    SUBCASE("mean photon number matches the geometric series") {
        const int d = 10;
        const FockArray psi = tmsv(0.5, d);
        const FockArray rho = partial_trace(psi, std::vector<int>{1});
        double mean = 0.0;
        for (int n = 0; n < d; ++n) {
            const int kn[1] = {n};
            mean += n * rho.element(kn, kn).real();
        }
        CHECK(mean == doctest::Approx(0.5 * 0.5 / (1.0 - 0.25)).epsilon(1e-5));
    }
    SUBCASE("covariance matches the pure-state Gaussian parametrization") {
        const double r = 0.55;
        const FockArray psi = tmsv(std::tanh(r), 20);
        const auto gamma = covariance_of(psi);
        const auto s = gamma.to_symmetric(1e-8);
        CHECK(s.C == doctest::Approx(std::cosh(2 * r)).epsilon(1e-9));
        CHECK(s.S == doctest::Approx(std::sinh(2 * r)).epsilon(1e-9));
    }
    SUBCASE("leakage gate") {
        CHECK_THROWS_AS(tmsv(0.9, 2), CutoffError);
        CHECK(tmsv(0.9, 2, 1.0).top_level_population(0) > 0.1);
    }
}

TEST_CASE("truncated_tmsv") {
    SUBCASE("lambda = 0 is vacuum") {
        const int k00[2] = {0, 0};
        CHECK(std::abs(truncated_tmsv(0.0, 4).amplitude(k00) - 1.0) < 1e-15);
    }
    SUBCASE("lambda = 1 has equal weights") {
        const FockArray psi = truncated_tmsv(1.0, 4);
        const int k00[2] = {0, 0};
        const int k11[2] = {1, 1};
        CHECK(std::abs(psi.amplitude(k00) - 1.0 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(psi.amplitude(k11) - 1.0 / std::sqrt(2.0)) < 1e-15);
    }
    SUBCASE("exactly normalized") {
        for (double lam : {0.2, 0.7, 1.0})
            CHECK(truncated_tmsv(lam, 5).trace().real() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("apply_loss") {
    SUBCASE("T = 1 is the identity") {
        std::mt19937 rng(3);
        const FockArray rho = random_bounded_state(5, rng).to_density();
        const FockArray out = apply_loss(rho, 1.0, 0);
        CHECK((out.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("truncated TMSV through two half-loss channels") {
        const FockArray rho = [&] {
            FockArray r = truncated_tmsv(1.0, 4).to_density();
            r = apply_loss(r, 0.5, 0);
            return apply_loss(r, 0.5, 1);
        }();
        const int k00[2] = {0, 0};
        const int k10[2] = {1, 0};
        const int k01[2] = {0, 1};
        const int k11[2] = {1, 1};
        CHECK(rho.element(k00, k00).real() == doctest::Approx(0.625).epsilon(1e-12));
        CHECK(rho.element(k11, k00).real() == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(rho.element(k10, k10).real() == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(rho.element(k01, k01).real() == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(rho.element(k11, k11).real() == doctest::Approx(0.125).epsilon(1e-12));
    }
    SUBCASE("trace preserved at any cutoff") {
        std::mt19937 rng(17);
        for (double T : {0.0, 0.35, 0.8}) {
            const FockArray rho = random_bounded_state(6, rng).to_density();
            CHECK(apply_loss(rho, T, 1).trace().real() == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
    SUBCASE("covariance agrees with the Gaussian-layer channel") {
        const FockArray rho = lossy_tmsv(std::tanh(1.0), 0.5, 30);
        const auto s = covariance_of(rho).to_symmetric(1e-4);
        CHECK(s.C == doctest::Approx(2.3810978455418157).epsilon(2e-5));
        CHECK(s.S == doctest::Approx(1.8134302039235095).epsilon(2e-5));
    }
    SUBCASE("rejects T outside [0, 1]") {
        const FockArray rho = truncated_tmsv(0.5, 3).to_density();
        CHECK_THROWS_AS(apply_loss(rho, -0.01, 0), DomainError);
        CHECK_THROWS_AS(apply_loss(rho, 1.01, 0), DomainError);
    }
}

TEST_CASE("beam_splitter") {
    const int d = 6;
    SUBCASE("vacuum is invariant") {
        const FockArray out = beam_splitter(FockArray::vacuum(2, d), 0, 1);
        const int k00[2] = {0, 0};
        CHECK(std::abs(out.amplitude(k00) - 1.0) < 1e-14);
    }
    SUBCASE("single photon splits evenly") {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
        v(1 * d + 0) = 1.0;
        const FockArray out = beam_splitter(FockArray::pure({d, d}, v), 0, 1);
        const int k10[2] = {1, 0};
        const int k01[2] = {0, 1};
        CHECK(std::abs(out.amplitude(k10) - 1.0 / std::sqrt(2.0)) < 1e-14);
        CHECK(std::abs(out.amplitude(k01) - 1.0 / std::sqrt(2.0)) < 1e-14);
    }
    SUBCASE("Hong-Ou-Mandel") {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
        v(1 * d + 1) = 1.0;
        const FockArray out = beam_splitter(FockArray::pure({d, d}, v), 0, 1);
        const int k20[2] = {2, 0};
        const int k02[2] = {0, 2};
        const int k11[2] = {1, 1};
        CHECK(std::abs(out.amplitude(k20) - 1.0 / std::sqrt(2.0)) < 1e-14);
        CHECK(std::abs(out.amplitude(k02) + 1.0 / std::sqrt(2.0)) < 1e-14);
        CHECK(std::abs(out.amplitude(k11)) < 1e-14);
    }
    SUBCASE("unitary on bounded-support states: trace and purity") {
        std::mt19937 rng(11);
        for (int i = 0; i < 8; ++i) {
            const FockArray rho = random_bounded_state(d, rng).to_density();
            const FockArray out = beam_splitter(rho, 0, 1);
            CHECK(std::abs(out.trace().real() - 1.0) < 1e-12);
            CHECK(std::abs(out.purity() - 1.0) < 1e-12);
            CHECK(out.hermiticity_error() < 1e-13);
        }
    }
    SUBCASE("involution: applying it twice restores the state") {
        std::mt19937 rng(5);
        const FockArray rho = random_bounded_state(d, rng).to_density();
        const FockArray back = beam_splitter(beam_splitter(rho, 0, 1), 0, 1);
        CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("fock_filter") {
    const int d = 5;
    SUBCASE("n-1 annihilates the single-photon state") {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(1) = 1.0;
        const FockArray rho = FockArray::pure({d}, v).to_density();
        CHECK_THROWS_AS(fock_filter(rho, 0, FilterKind::n_minus_1), ZeroWeightError);
        const WeightedState out = fock_filter(rho, 0, FilterKind::n_minus_1, 0.0, 0.0);
        CHECK(out.weight == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("n-1 fixes vacuum with weight one") {
        const FockArray rho = FockArray::vacuum(1, d).to_density();
        const WeightedState out = fock_filter(rho, 0, FilterKind::n_minus_1);
        CHECK(out.weight == doctest::Approx(1.0).epsilon(1e-15));
        const int k0[1] = {0};
        CHECK(out.rho.element(k0, k0).real() == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("n+w preserves the epsilon element ratio exactly") {
        const FockArray rho = lossy_tmsv(0.5, 0.6, 10);
        const double eps = epsilon_from_rho(rho);
        for (double w : {0.3, 1.0, 2.5}) {
            WeightedState f = fock_filter(rho, 0, FilterKind::n_plus_w, w);
            f = fock_filter(f.rho, 1, FilterKind::n_plus_w, w);
            CHECK(epsilon_from_rho(f.rho) == doctest::Approx(eps).epsilon(1e-12));
        }
    }
    SUBCASE("weights compose multiplicatively to the final trace") {
        const FockArray rho = lossy_tmsv(0.5, 0.7, 8);
        const WeightedState a = fock_filter(rho, 0, FilterKind::annihilate);
        const WeightedState b = fock_filter(a.rho, 1, FilterKind::create);
        CHECK(a.weight * b.weight ==
              doctest::Approx(b.rho.trace().real() / rho.trace().real()).epsilon(1e-12));
    }
}

TEST_CASE("project") {
    const int d = 5;
    SUBCASE("vacuum projection on vacuum removes the mode with weight 1") {
        const FockArray psi = FockArray::vacuum(2, d);
        const WeightedState out = project(psi, 1, Projector::vacuum());
        CHECK(out.weight == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(out.rho.num_modes() == 1);
    }
    SUBCASE("q-state on vacuum gives weight q^2") {
        for (double q : {0.5, 1.0, 2.0}) {
            const WeightedState out =
                project(FockArray::vacuum(1, d), 0, Projector::q_state(q));
            CHECK(out.weight == doctest::Approx(q * q).epsilon(1e-14));
            CHECK(out.rho.num_modes() == 0);
        }
    }
    SUBCASE("q-state on (|0>+|1>)/sqrt2 gives amplitude (q+1)/sqrt2") {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(0) = v(1) = 1.0 / std::sqrt(2.0);
        const double q = 0.8;
        const WeightedState out = project(FockArray::pure({d}, v), 0, Projector::q_state(q));
        CHECK(out.rho.data()(0, 0).real() ==
              doctest::Approx((q + 1.0) / std::sqrt(2.0)).epsilon(1e-14));
    }
    SUBCASE("impossible outcome trips the floor") {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(2) = 1.0;
        CHECK_THROWS_AS(project(FockArray::pure({d}, v), 0, Projector::vacuum()),
                        ZeroWeightError);
    }
}

TEST_CASE("partial_trace") {
    SUBCASE("half of a Bell-like state is maximally mixed") {
        const FockArray rho = partial_trace(truncated_tmsv(1.0, 4), std::vector<int>{1});
        const int k0[1] = {0};
        const int k1[1] = {1};
        CHECK(rho.element(k0, k0).real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(rho.element(k1, k1).real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(std::abs(rho.element(k0, k1)) < 1e-14);
    }
    SUBCASE("tracing out nothing is the identity") {
        const FockArray rho = truncated_tmsv(0.6, 4).to_density();
        const FockArray out = partial_trace(rho, {});
        CHECK((out.data() - rho.data()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("reduction of tmsv is thermal with known purity") {
        const double lam = 0.5;
        const FockArray red = partial_trace(tmsv(lam, 16), std::vector<int>{0});
        CHECK(red.purity() == doctest::Approx((1.0 - lam * lam) / (1.0 + lam * lam))
                                  .epsilon(1e-8));
        CHECK(red.trace().real() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("covariance_of") {
    SUBCASE("vacuum gives the identity") {
        const auto gamma = covariance_of(FockArray::vacuum(2, 4));
        CHECK((gamma.matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("tmsv at lambda = tanh 1 within truncation error") {
        const FockArray psi = tmsv(std::tanh(1.0), 30, 1.0);
        const auto s = covariance_of(psi).to_symmetric(1e-3);
        CHECK(s.C == doctest::Approx(std::cosh(2.0)).epsilon(1e-4));
        CHECK(s.S == doctest::Approx(std::sinh(2.0)).epsilon(1e-4));
    }
    SUBCASE("first moments are subtracted") {
        // displaced-ish state: (|0> + |1>)/sqrt2 has <x> != 0 but must still
        // report a physical covariance
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(6);
        v(0) = v(1) = 1.0 / std::sqrt(2.0);
        const auto gamma = covariance_of(FockArray::pure({6}, v));
        CHECK(gamma.physical(1e-9));
    }
}

TEST_CASE("epsilon_from_rho") {
    SUBCASE("lossy tmsv matches the Gaussian-layer epsilon") {
        const FockArray rho = lossy_tmsv(std::tanh(1.0), 0.5, 30);
        CHECK(epsilon_from_rho(rho) ==
              doctest::Approx(0.38079707797788244).epsilon(1e-12));
    }
    SUBCASE("truncated-state pipeline gives (1-T) lambda") {
        FockArray rho = truncated_tmsv(1.0, 4).to_density();
        rho = apply_loss(rho, 0.5, 0);
        rho = apply_loss(rho, 0.5, 1);
        CHECK(epsilon_from_rho(rho) == doctest::Approx(0.5).epsilon(1e-13));
    }
    SUBCASE("pure TMSV gives zero") {
        CHECK(epsilon_from_rho(tmsv(0.6, 12)) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("vanishing rho_{11,00} is rejected") {
        CHECK_THROWS_AS(epsilon_from_rho(FockArray::vacuum(2, 3)), DomainError);
    }
}

TEST_CASE("hermiticity and positivity maintained along pipelines") {
    std::mt19937 rng(23);
    const FockArray rho0 = random_bounded_state(5, rng).to_density();
    FockArray rho = apply_loss(rho0, 0.6, 0);
    rho = beam_splitter(rho, 0, 1);
    rho = apply_loss(rho, 0.9, 1);
    CHECK(rho.hermiticity_error() < 1e-10);
    CHECK(rho.min_eigenvalue() > -1e-9);
    const WeightedState f = fock_filter(rho, 0, FilterKind::n_minus_1);
    CHECK(f.rho.hermiticity_error() < 1e-10);
    CHECK(f.rho.min_eigenvalue() > -1e-9);
}
