#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tcpkit/spectral.hpp"
#include "tcpkit/tensor.hpp"

using tcpkit::Tensor;

namespace {

TEST(CollatzWielandt, IdentityRatiosAreOne) {
    const Tensor id = Tensor::identity(3, 2);
    for (const std::vector<double> d : {std::vector<double>{1.0, 1.0},
                                        std::vector<double>{0.5, 3.0}}) {
        const auto cw = tcpkit::collatz_wielandt_bounds(id, d);
        EXPECT_EQ(cw.lower, 1.0);
        EXPECT_EQ(cw.upper, 1.0);
        EXPECT_FALSE(cw.zero_tensor);
    }
}

TEST(CollatzWielandt, ExampleBTensors) {
    // B for alpha = 4: b_1112 = 2, b_1122 = 4; B d^3 at d = e is (6, 0).
    const auto [r4, b4] = tcpkit::z_decompose(fixtures::nonsymmetric_m4(4.0));
    EXPECT_EQ(r4, 1.0);
    const auto cw4 = tcpkit::collatz_wielandt_bounds(b4, {1.0, 1.0});
    EXPECT_EQ(cw4.lower, 0.0);
    EXPECT_EQ(cw4.upper, 6.0);
    const std::vector<double> bd4 = oracle::naive_contract(b4, {1.0, 1.0});
    EXPECT_EQ(bd4[0], 6.0);
    EXPECT_EQ(bd4[1], 0.0);

    const auto [r0, b0] = tcpkit::z_decompose(fixtures::nonsymmetric_m4(0.0));
    const auto cw0 = tcpkit::collatz_wielandt_bounds(b0, {1.0, 1.0});
    EXPECT_EQ(cw0.lower, 0.0);
    EXPECT_EQ(cw0.upper, 2.0);
}

TEST(CollatzWielandt, ZeroTensorFlag) {
    const Tensor zero = Tensor::zeros(3, 2);
    const auto cw = tcpkit::collatz_wielandt_bounds(zero, {1.0, 2.0});
    EXPECT_TRUE(cw.zero_tensor);
    EXPECT_EQ(cw.lower, 0.0);
    EXPECT_EQ(cw.upper, 0.0);
}

TEST(CollatzWielandt, RejectsBadInputs) {
    const Tensor id = Tensor::identity(3, 2);
    EXPECT_THROW(tcpkit::collatz_wielandt_bounds(id, {1.0, 0.0}), tcpkit::TensorError);
    EXPECT_THROW(tcpkit::collatz_wielandt_bounds(id, {1.0, -1.0}), tcpkit::TensorError);
    const Tensor neg = fixtures::build(2, 2, {{{1, 2}, -1.0}});
    EXPECT_THROW(tcpkit::collatz_wielandt_bounds(neg, {1.0, 1.0}), tcpkit::TensorError);
}

TEST(SpectralRadius, ZeroAndIdentity) {
    const auto z = tcpkit::spectral_radius(Tensor::zeros(4, 3));
    EXPECT_TRUE(z.converged);
    EXPECT_EQ(z.rho, 0.0);

    const auto id = tcpkit::spectral_radius(Tensor::identity(4, 2));
    EXPECT_TRUE(id.converged);
    EXPECT_NEAR(id.rho, 1.0, 1e-10);
    EXPECT_LE(id.lower, id.rho);
    EXPECT_LE(id.rho, id.upper);
}

TEST(SpectralRadius, ExampleBTensorsAreNilpotent) {
    // B x^3 = (2x1^2 x2 + alpha x1 x2^2, 0); the second component forces
    // lambda x2^3 = 0, so rho = 0. The simplex grid oracle confirms.
    for (double alpha : {0.0, 4.0}) {
        const auto [r, b] = tcpkit::z_decompose(fixtures::nonsymmetric_m4(alpha));
        const double grid_rho = oracle::maxmin_rho_grid(b, 60);
        EXPECT_LE(grid_rho, 1e-12) << "alpha = " << alpha;
        const auto est = tcpkit::spectral_radius(b);
        EXPECT_TRUE(est.converged) << "alpha = " << alpha;
        EXPECT_LE(est.upper, 1e-8) << "alpha = " << alpha;
        EXPECT_GE(est.rho, 0.0);
    }
}

TEST(SpectralRadius, MatrixCaseMatchesCharPolyOracle) {
    oracle::TestRng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = rng.uniform_int(1, 4);
        std::vector<double> e(Tensor::size_for(2, n));
        for (auto& v : e) v = (rng.uniform01() < 0.3) ? 0.0 : rng.uniform01();
        const Tensor b(2, n, e);
        const double want = oracle::matrix_spectral_radius(e, n);
        const auto est = tcpkit::spectral_radius(b, 1e-10);
        ASSERT_TRUE(est.converged) << "trial " << trial;
        EXPECT_NEAR(est.rho, want, 1e-7 * (1.0 + want)) << "trial " << trial;
    }
}

TEST(SpectralRadius, SandwichOnRandomTensors) {
    oracle::TestRng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = rng.uniform_int(2, 4);
        const int n = rng.uniform_int(2, 3);
        const Tensor b = oracle::random_nonnegative_tensor(rng, m, n);
        const auto est = tcpkit::spectral_radius(b, 1e-10);
        ASSERT_TRUE(est.converged);
        for (int k = 0; k < 5; ++k) {
            std::vector<double> d(static_cast<std::size_t>(n));
            for (auto& v : d) v = rng.uniform(0.1, 2.0);
            const auto cw = tcpkit::collatz_wielandt_bounds(b, d);
            if (cw.zero_tensor) continue;
            EXPECT_LE(cw.lower, est.rho + 1e-10);
            EXPECT_GE(cw.upper, est.rho - 1e-10);
        }
    }
}

TEST(SpectralRadius, PrincipalSubtensorMonotonicity) {
    oracle::TestRng rng(41);
    const double tol = 1e-10;
    for (int trial = 0; trial < 10; ++trial) {
        const int m = rng.uniform_int(2, 4);
        const int n = 3;
        const Tensor b = oracle::random_nonnegative_tensor(rng, m, n);
        const auto full = tcpkit::spectral_radius(b, tol);
        ASSERT_TRUE(full.converged);
        const std::vector<std::vector<int>> subsets = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
        for (const auto& idx : subsets) {
            const Tensor sub = principal_subtensor(b, idx);
            const auto part = tcpkit::spectral_radius(sub, tol);
            ASSERT_TRUE(part.converged);
            EXPECT_LE(part.rho, full.rho + 2.0 * tol);
        }
    }
}

TEST(SpectralRadius, PerronResidualAtConvergence) {
    oracle::TestRng rng(43);
    const double tol = 1e-10;
    for (int trial = 0; trial < 10; ++trial) {
        const int m = rng.uniform_int(2, 4);
        const int n = rng.uniform_int(2, 3);
        std::vector<double> e(Tensor::size_for(m, n));
        for (auto& v : e) v = 0.1 + rng.uniform01();  // strictly positive: irreducible
        const Tensor b(m, n, std::move(e));
        const auto est = tcpkit::spectral_radius(b, tol);
        ASSERT_TRUE(est.converged);
        EXPECT_LE(tcpkit::eigen_residual(b, est.rho, est.vector),
                  10.0 * tol * (1.0 + est.rho) + 1e-12);
    }
}

TEST(Mu, IdentityAndZero) {
    EXPECT_NEAR(tcpkit::mu(Tensor::identity(3, 2)), 1.0, 1e-9);
    EXPECT_NEAR(tcpkit::mu(Tensor::zeros(3, 2)), 0.0, 1e-9);
}

TEST(Mu, ExampleTensorIsOne) {
    EXPECT_NEAR(tcpkit::mu(fixtures::nonsymmetric_m4(0.0)), 1.0, 1e-8);
    EXPECT_NEAR(tcpkit::mu(fixtures::nonsymmetric_m4(4.0)), 1.0, 1e-8);
}

TEST(Mu, ShiftInvariance) {
    oracle::TestRng rng(47);
    const double tol = 1e-10;
    for (int trial = 0; trial < 10; ++trial) {
        const int m = rng.uniform_int(2, 4);
        const int n = rng.uniform_int(2, 3);
        const Tensor b = oracle::random_nonnegative_tensor(rng, m, n);
        const double r = rng.uniform(0.5, 3.0);
        const double base = tcpkit::mu_from_decomposition({r, b}, tol);
        for (double s : {1.0, 10.0}) {
            const Tensor shifted = tcpkit::add_diagonal(b, s);
            const double moved = tcpkit::mu_from_decomposition({r + s, shifted}, tol);
            EXPECT_NEAR(moved, base, 3.0 * tol * (1.0 + std::fabs(base) + s));
        }
    }
}

TEST(EigenResidual, Examples) {
    const Tensor id = Tensor::identity(3, 2);
    EXPECT_EQ(tcpkit::eigen_residual(id, 1.0, {1.0, 1.0}), 0.0);
    EXPECT_EQ(tcpkit::eigen_residual(id, 2.0, {1.0, 1.0}), 1.0);
    const auto [r, b] = tcpkit::z_decompose(fixtures::nonsymmetric_m4(0.0));
    EXPECT_EQ(tcpkit::eigen_residual(b, 0.0, {1.0, 0.0}), 0.0);
    EXPECT_THROW(tcpkit::eigen_residual(id, 1.0, {0.0, 0.0}), tcpkit::TensorError);
}

TEST(DurandKerner, OracleSelfCheck) {
    // (x - 1)(x - 2)(x - 3): coefficients ascending -6, 11, -6, 1.
    const auto roots = oracle::durand_kerner({-6.0, 11.0, -6.0, 1.0});
    double maxmod = 0.0;
    for (const auto& z : roots) maxmod = std::max(maxmod, std::abs(z));
    EXPECT_NEAR(maxmod, 3.0, 1e-8);
}

TEST(MaxMinGrid, IdentityOracleSelfCheck) {
    EXPECT_NEAR(oracle::maxmin_rho_grid(Tensor::identity(3, 2), 40), 1.0, 1e-12);
}

}  // namespace
