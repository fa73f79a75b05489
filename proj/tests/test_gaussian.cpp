#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cvdistill/gaussian.hpp"

using namespace cvdistill;

namespace {

// independent oracle: Schmidt entropy of the two-mode squeezed vacuum,
// E = -sum_n p_n log2 p_n with p_n = (1 - lambda^2) lambda^(2n)
double schmidt_entropy(double r) {
    const double lam2 = std::tanh(r) * std::tanh(r);
    double e = 0.0, p = 1.0 - lam2;
    for (int n = 0; n < 4000 && p > 1e-300; ++n, p *= lam2)
        e -= p * std::log2(p);
    return e;
}

}  // namespace

TEST_CASE("cs_from_rt") {
    SUBCASE("vacuum fixed point") {
        const auto s = cs_from_rt(0.0, 0.7);
        CHECK(s.C == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.S == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("pure TMSV limit") {
        const auto s = cs_from_rt(1.0, 1.0);
        CHECK(s.C == doctest::Approx(std::cosh(2.0)).epsilon(1e-15));
        CHECK(s.S == doctest::Approx(std::sinh(2.0)).epsilon(1e-15));
    }
    SUBCASE("lossy point") {
        const auto s = cs_from_rt(1.0, 0.5);
        CHECK(s.C == doctest::Approx(2.3810978455418157).epsilon(1e-14));
        CHECK(s.S == doctest::Approx(1.8134302039235095).epsilon(1e-14));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(cs_from_rt(-0.1, 0.5), DomainError);
        CHECK_THROWS_AS(cs_from_rt(1.0, 0.0), DomainError);
        CHECK_THROWS_AS(cs_from_rt(1.0, 1.2), DomainError);
    }
}

TEST_CASE("rt_from_cs") {
    SUBCASE("inverts the lossy point") {
        const auto rt = rt_from_cs({2.3810978455418157, 1.8134302039235095});
        CHECK(rt.r == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rt.T == doctest::Approx(0.5).epsilon(1e-12));
        CHECK_FALSE(rt.phase_flipped);
    }
    SUBCASE("pure-state limit") {
        const auto rt = rt_from_cs({std::cosh(2.0), std::sinh(2.0)});
        CHECK(rt.r == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rt.T == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("roundtrip property over random entangled states") {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> ur(1e-3, 3.0), ut(1e-3, 1.0);
        for (int i = 0; i < 400; ++i) {
            const double r = ur(rng), T = ut(rng);
            const auto rt = rt_from_cs(cs_from_rt(r, T));
            CHECK(std::abs(rt.r - r) < 1e-12 * std::max(1.0, r));
            CHECK(std::abs(rt.T - T) < 1e-12);
        }
    }
    SUBCASE("negative S is canonicalized and recorded") {
        const auto s = cs_from_rt(0.8, 0.6);
        const auto rt = rt_from_cs({s.C, -s.S});
        CHECK(rt.phase_flipped);
        CHECK(rt.r == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(rt.T == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("degenerate and invalid inputs") {
        CHECK_THROWS_AS(rt_from_cs({1.0, 0.5}), DegenerateDecompositionError);
        CHECK_THROWS_AS(rt_from_cs({2.0, 0.0}), DomainError);      // S = 0
        CHECK_THROWS_AS(rt_from_cs({3.0, 1.2}), DomainError);      // separable
        CHECK_THROWS_AS(rt_from_cs({0.9, 0.1}), DomainError);      // inadmissible
    }
}

TEST_CASE("epsilon_from_cs") {
    SUBCASE("pure TMSV gives zero") {
        CHECK(epsilon_from_cs(cs_from_rt(1.3, 1.0)) == doctest::Approx(0.0).epsilon(1e-13));
    }
    SUBCASE("lossy point") {
        CHECK(epsilon_from_cs(cs_from_rt(1.0, 0.5)) ==
              doctest::Approx(0.38079707797788244).epsilon(1e-13));
    }
    SUBCASE("identity with (1-T) tanh r on a grid") {
        for (double r = 0.1; r <= 2.5; r += 0.117)
            for (double T = 0.05; T < 1.0; T += 0.083) {
                const double lhs = epsilon_from_cs(cs_from_rt(r, T));
                CHECK(std::abs(lhs - (1.0 - T) * std::tanh(r)) < 1e-12);
            }
    }
    SUBCASE("S = 0 is rejected") {
        CHECK_THROWS_AS(epsilon_from_cs({1.0, 0.0}), DomainError);
    }
}

TEST_CASE("purity") {
    SUBCASE("pure TMSV") {
        CHECK(purity(cs_from_rt(0.9, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("lossy point") {
        CHECK(purity(cs_from_rt(1.0, 0.5)) ==
              doctest::Approx(0.41997434161402607).epsilon(1e-13));
    }
    SUBCASE("closed form equals 1/sqrt(det gamma) on a dense grid") {
        for (double r = 0.05; r <= 2.5; r += 0.0495)
            for (double T = 0.05; T <= 1.0; T += 0.0483) {
                const double eps = (1.0 - T) * std::tanh(r);
                const double diff = std::abs(purity(cs_from_rt(r, T)) -
                                             purity_closed_form(r, eps));
                CHECK(diff < 1e-12);
            }
    }
    SUBCASE("decreasing in r at fixed epsilon") {
        // (r, eps) is realizable only for eps <= tanh r
        for (double eps : {0.1, 0.3, 0.6, 0.9}) {
            const double r0 = std::atanh(eps) + 0.05;
            double prev = purity_closed_form(r0, eps);
            for (double r = r0 + 0.2; r <= r0 + 3.0; r += 0.2) {
                const double p = purity_closed_form(r, eps);
                CHECK(p < prev);
                prev = p;
            }
        }
    }
}

TEST_CASE("eof_symmetric") {
    SUBCASE("separable states carry no entanglement") {
        CHECK(eof_symmetric({3.0, 1.5}) == 0.0);
        CHECK(eof_symmetric({1.0, 0.0}) == 0.0);
    }
    SUBCASE("pure TMSV r=1 matches the Schmidt entropy") {
        const double oracle = schmidt_entropy(1.0);
        CHECK(oracle == doctest::Approx(2.3369093005458968).epsilon(1e-12));
        CHECK(eof_symmetric(cs_from_rt(1.0, 1.0)) == doctest::Approx(oracle).epsilon(1e-12));
    }
    SUBCASE("pure-state agreement across squeezings") {
        for (double r : {0.3, 0.7, 1.4, 2.0})
            CHECK(eof_symmetric(cs_from_rt(r, 1.0)) ==
                  doctest::Approx(schmidt_entropy(r)).epsilon(1e-11));
    }
    SUBCASE("monotone decreasing in the EPR variance") {
        double prev = eof_symmetric({1.0, 0.95});
        for (double delta = 0.1; delta < 1.0; delta += 0.1) {
            // family member with C - |S| = delta
            const SymmetricGaussianState s{(delta + 1.0 / delta) / 2.0,
                                           (1.0 / delta - delta) / 2.0};
            (void)prev;
            prev = eof_symmetric(s);
        }
        double last = 1e300;
        for (double delta = 0.1; delta < 1.0; delta += 0.1) {
            const SymmetricGaussianState s{(delta + 1.0 / delta) / 2.0,
                                           (1.0 / delta - delta) / 2.0};
            const double e = eof_symmetric(s);
            CHECK(e < last);
            last = e;
        }
    }
}

TEST_CASE("lossy_channel") {
    const auto gam = CovarianceMatrix::tmsv(1.0);
    SUBCASE("T = 1 is the identity") {
        CHECK((lossy_channel(gam, 1.0).matrix() - gam.matrix()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("T = 0 gives vacuum") {
        CHECK((lossy_channel(gam, 0.0).matrix() - Eigen::MatrixXd::Identity(4, 4))
                  .cwiseAbs()
                  .maxCoeff() < 1e-15);
    }
    SUBCASE("matches cs_from_rt") {
        const auto out = lossy_channel(gam, 0.5).to_symmetric();
        const auto expected = cs_from_rt(1.0, 0.5);
        CHECK(out.C == doctest::Approx(expected.C).epsilon(1e-14));
        CHECK(out.S == doctest::Approx(expected.S).epsilon(1e-14));
    }
    SUBCASE("rejects T outside [0,1]") {
        CHECK_THROWS_AS(lossy_channel(gam, -0.1), DomainError);
        CHECK_THROWS_AS(lossy_channel(gam, 1.1), DomainError);
    }
}

TEST_CASE("gaussian_cp_map") {
    const auto state = cs_from_rt(0.8, 0.6);
    const auto gam = CovarianceMatrix::from_symmetric(state);

    SUBCASE("identity channel in the EPR limit") {
        const auto op = GaussianOperation::identity_channel(2, 10.0);
        CHECK(op.admissible(1e-6));
        const auto out = gaussian_cp_map(op, gam);
        CHECK((out.matrix() - gam.matrix()).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("TMSV-pair filter matches the closed form") {
        for (double s : {0.4, 0.9, 1.5}) {
            const auto op = GaussianOperation::symmetric_tmsv_filter(s);
            const auto out = gaussian_cp_map(op, gam).to_symmetric();
            const auto expected = symmetric_gaussian_filter(state, s);
            CHECK(out.C == doctest::Approx(expected.C).epsilon(1e-11));
            CHECK(out.S == doctest::Approx(expected.S).epsilon(1e-11));
        }
    }
    SUBCASE("pure-loss dilation matches lossy_channel") {
        const auto op = GaussianOperation::attenuation(2, 0.5, 10.0);
        const auto out = gaussian_cp_map(op, gam);
        const auto expected = lossy_channel(gam, 0.5);
        CHECK((out.matrix() - expected.matrix()).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("singular bracket is detected") {
        GaussianOperation op = GaussianOperation::identity_channel(2, 1.0);
        op.gamma2 = -Eigen::MatrixXd::Identity(4, 4);
        CHECK_THROWS_AS(gaussian_cp_map(op, CovarianceMatrix::vacuum(2)),
                        SingularMatrixError);
    }
}

TEST_CASE("symmetric_gaussian_filter") {
    SUBCASE("approaches the identity as s grows") {
        const auto state = cs_from_rt(1.0, 0.5);
        const auto out = symmetric_gaussian_filter(state, 10.0);
        CHECK(std::abs(out.C - state.C) < 1e-6);
        CHECK(std::abs(out.S - state.S) < 1e-6);
    }
    SUBCASE("leaves epsilon invariant on a grid") {
        for (double r = 0.2; r <= 1.6; r += 0.2)
            for (double T = 0.15; T < 1.0; T += 0.17)
                for (double s = 0.2; s <= 2.4; s += 0.3) {
                    const auto state = cs_from_rt(r, T);
                    const auto out = symmetric_gaussian_filter(state, s);
                    CHECK(std::abs(epsilon_from_cs(out) - epsilon_from_cs(state)) < 1e-10);
                }
    }
    SUBCASE("output admissible with no more entanglement") {
        for (double s : {0.3, 0.8, 1.5}) {
            const auto state = cs_from_rt(1.2, 0.7);
            const auto out = symmetric_gaussian_filter(state, s);
            CHECK(out.admissible(1e-12));
            CHECK(CovarianceMatrix::from_symmetric(out).physical());
            CHECK(eof_symmetric(out) <= eof_symmetric(state) + 1e-12);
        }
    }
}

TEST_CASE("covariance physicality of produced matrices") {
    for (double r = 0.2; r <= 2.0; r += 0.3)
        for (double T = 0.1; T <= 1.0; T += 0.15) {
            const auto gam = CovarianceMatrix::from_symmetric(cs_from_rt(r, T));
            CHECK(gam.min_uncertainty_eigenvalue() >= -1e-9);
            CHECK(lossy_channel(gam, 0.33).min_uncertainty_eigenvalue() >= -1e-9);
        }
}
