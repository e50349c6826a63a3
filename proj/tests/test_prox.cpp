#include "olasso/prox.hpp"

#include "qp_oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using olasso::ProxRequest;
using olasso::Vector;

namespace {

Vector prox(const Vector& b, double lam) { return olasso::prox_monotone_nonneg({b, lam, {}, {}}); }

void expect_in_cone(const Vector& u) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        ASSERT_GE(u[i], 0.0);
        if (i + 1 < u.size()) ASSERT_GE(u[i], u[i + 1]);
    }
}

}  // namespace

TEST(Prox, ShiftedSequenceAlreadyFeasible) {
    Vector b(2);
    b << 3, 1;
    const Vector u = prox(b, 1.0);
    EXPECT_EQ(u[0], 2.0);
    EXPECT_EQ(u[1], 0.0);
}

TEST(Prox, FullyThresholded) {
    Vector b(2);
    b << 0.5, 0.2;
    EXPECT_EQ(prox(b, 1.0), Vector::Zero(2));
}

TEST(Prox, NegativeLambdaIsRejected) {
    EXPECT_THROW(prox(Vector::Ones(3), -0.1), olasso::Error);
}

TEST(Prox, RandomLengthSevenMatchesQp) {
    std::mt19937_64 rng(7);
    const Vector b = testutil::gaussian_vector(rng, 7);
    const Vector u = prox(b, 0.3);
    const Vector qp = oracle::monotone_prox(b, 0.3, Vector::Ones(7));
    EXPECT_LE((u - qp).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Prox, WeightedMatchesQp) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> wd(0.1, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 9;
        const Vector b = testutil::gaussian_vector(rng, n, 2.0);
        Vector w(n);
        for (Eigen::Index i = 0; i < n; ++i) w[i] = wd(rng);
        const double lam = 0.02 * trial;
        const Vector u = olasso::prox_monotone_nonneg({b, lam, w, {}});
        const Vector qp = oracle::monotone_prox(b, lam, w);
        ASSERT_LE((u - qp).cwiseAbs().maxCoeff(), 1e-7) << "trial " << trial;
    }
}

// Near-isotonic prox against a QP with slacks:
//   lam sum u + theta sum (u_{i+1} - u_i)_+ + 1/2 ||u - b||^2, u >= 0.
TEST(Prox, RelaxedOrderMatchesQp) {
    std::mt19937_64 rng(27);
    std::uniform_real_distribution<double> td(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + trial % 7;
        const Eigen::Index m = n - 1;
        const Vector b = testutil::gaussian_vector(rng, n, 2.0);
        const double lam = 0.3, theta = td(rng);
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n + m, n + m);
        Q.topLeftCorner(n, n).setIdentity();
        Vector q(n + m);
        q.head(n) = Vector::Constant(n, lam) - b;
        q.tail(m).setConstant(theta);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + 2 * m, n + m);
        for (Eigen::Index i = 0; i < n; ++i) G(i, i) = 1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            G(n + i, n + i) = 1.0;
            G(n + m + i, n + i) = 1.0;
            G(n + m + i, i) = 1.0;
            G(n + m + i, i + 1) = -1.0;
        }
        const Vector qp = oracle::solve_qp(Q, q, G, Vector::Zero(n + 2 * m)).x.head(n);
        const Vector u = olasso::prox_monotone_nonneg({b, lam, {}, theta});
        ASSERT_LE((u - qp).cwiseAbs().maxCoeff(), 1e-7) << "trial " << trial;
    }
}

TEST(Prox, ZeroLambdaIsConeProjection) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector b = testutil::gaussian_vector(rng, 1 + trial % 10, 3.0);
        const Vector u = prox(b, 0.0);
        expect_in_cone(u);
        const Vector qp = oracle::monotone_prox(b, 0.0, Vector::Ones(b.size()));
        ASSERT_LE((u - qp).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(Prox, NonexpansiveOnRandomPairs) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 500; ++trial) {
        const Eigen::Index n = 1 + trial % 12;
        const Vector a = testutil::gaussian_vector(rng, n, 2.0);
        const Vector b = testutil::gaussian_vector(rng, n, 2.0);
        const double lam = 0.01 * (trial % 50);
        ASSERT_LE((prox(a, lam) - prox(b, lam)).norm(), (a - b).norm() + 1e-12);
    }
}

TEST(Prox, L1NormShrinksWithLambda) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector b = testutil::gaussian_vector(rng, 10, 2.0);
        double previous = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 20; ++k) {
            const Vector u = prox(b, 0.1 * k);
            expect_in_cone(u);
            const double l1 = u.sum();
            ASSERT_LE(l1, previous + 1e-12);
            previous = l1;
        }
    }
}

TEST(Prox, LassoHalfIsSoftThreshold) {
    Vector b(3);
    b << 2.0, -1.0, 0.5;
    const Vector u = olasso::prox_nonneg_soft_threshold(b, 1.0);
    EXPECT_EQ(u[0], 1.0);
    EXPECT_EQ(u[1], 0.0);
    EXPECT_EQ(u[2], 0.0);
}
