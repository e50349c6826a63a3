#include "olasso/diagnostics.hpp"
#include "olasso/prox.hpp"
#include "olasso/timelag.hpp"

#include "qp_oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace olasso;

namespace {

BlockFit single_block(const Vector& beta) {
    SplitCoefficients c = SplitCoefficients::zeros(beta.size());
    c.plus = beta.cwiseMax(0.0);
    c.minus = (-beta).cwiseMax(0.0);
    BlockFit f;
    f.blocks.push_back(c);
    return f;
}

}  // namespace

TEST(RollingDesign, UnivariateRows) {
    Vector s(4);
    s << 1, 2, 3, 4;
    LagSpec spec;
    spec.max_lag = 2;
    const LagDesign d = build_rolling_design(Matrix(s), s, spec);
    ASSERT_EQ(d.Z.rows(), 2);
    ASSERT_EQ(d.Z.cols(), 2);
    EXPECT_EQ(d.Z(0, 0), 2);
    EXPECT_EQ(d.Z(0, 1), 1);
    EXPECT_EQ(d.Z(1, 0), 3);
    EXPECT_EQ(d.Z(1, 1), 2);
    EXPECT_EQ(d.response[0], 3);
    EXPECT_EQ(d.response[1], 4);
    EXPECT_EQ(d.dropped_rows, 2u);
}

TEST(RollingDesign, TwoPredictorsSingleLag) {
    Matrix s(4, 2);
    s << 1, 10, 2, 20, 3, 30, 4, 40;
    LagSpec spec;
    spec.predictors = 2;
    spec.max_lag = 1;
    const LagDesign d = build_rolling_design(s, s.col(0), spec);
    ASSERT_EQ(d.Z.rows(), 3);
    EXPECT_EQ(d.Z, s.topRows(3));
    EXPECT_EQ(d.response, s.col(0).tail(3));
}

TEST(RollingDesign, ExhaustiveIndexIdentity) {
    std::mt19937_64 rng(5);
    for (std::size_t p = 1; p <= 3; ++p) {
        for (std::size_t K = 1; K <= 4; ++K) {
            const Eigen::Index n = 12;
            const Matrix s = testutil::gaussian_matrix(rng, n, static_cast<Eigen::Index>(p));
            const Vector y = testutil::gaussian_vector(rng, n);
            LagSpec spec;
            spec.predictors = p;
            spec.max_lag = K;
            const LagDesign d = build_rolling_design(s, y, spec);
            ASSERT_EQ(d.Z.rows(), n - static_cast<Eigen::Index>(K));
            for (Eigen::Index r = 0; r < d.Z.rows(); ++r) {
                const Eigen::Index t = r + static_cast<Eigen::Index>(K);  // 0-based time of the row
                EXPECT_EQ(d.response[r], y[t]);
                for (std::size_t j = 0; j < p; ++j)
                    for (std::size_t k = 1; k <= K; ++k)
                        EXPECT_EQ(d.Z(r, static_cast<Eigen::Index>(j * K + k - 1)),
                                  s(t - static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)));
            }
        }
    }
}

TEST(RollingDesign, TooShort) {
    Vector s(3);
    s << 1, 2, 3;
    LagSpec spec;
    spec.max_lag = 3;
    try {
        build_rolling_design(Matrix(s), s, spec);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
        EXPECT_STREQ(e.what(), "series shorter than maximum lag");
    }
}

TEST(FitStatic, SingleBlockMatchesPlainFit) {
    std::mt19937_64 rng(7);
    const Matrix X = testutil::gaussian_matrix(rng, 30, 6);
    const Vector y = X * Vector::LinSpaced(6, 3.0, 0.0) + testutil::gaussian_vector(rng, 30);
    const Dataset d = center(make_dataset(X, y));
    FitConfig cfg;
    cfg.lam = 2.0;
    const BlockFit blocked = fit_static(d, 6, cfg);
    const OrderedLassoFit plain = fit_ordered_lasso(d, cfg);
    EXPECT_LE((blocked.combined() - plain.beta()).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_NEAR(blocked.intercept, plain.intercept, 1e-10);
}

TEST(FitStatic, OrthogonalBlocksMatchIndependentFits) {
    std::mt19937_64 rng(11);
    // Orthonormal columns: blocks are mutually orthogonal.
    const Matrix raw = testutil::gaussian_matrix(rng, 40, 9);
    // Orthonormal and orthogonal to the ones vector, so centering keeps it.
    Matrix B(40, 10);
    B << Vector::Ones(40), raw;
    const Matrix Q = (Eigen::HouseholderQR<Matrix>(B).householderQ() * Matrix::Identity(40, 10)).rightCols(9);
    const Vector y = Q * Vector::LinSpaced(9, 4.0, -1.0) + testutil::gaussian_vector(rng, 40, 0.5);
    const Dataset d = center(make_dataset(Q, y));
    FitConfig cfg;
    cfg.lam = 0.3;
    cfg.tol = 1e-14;
    cfg.max_iter = 100000;
    const BlockFit joint = fit_static(d, 3, cfg);
    for (Eigen::Index j = 0; j < 3; ++j) {
        const Dataset part = center(make_dataset(Q.middleCols(3 * j, 3), y));
        const OrderedLassoFit f = fit_ordered_lasso(part, cfg);
        EXPECT_LE((joint.combined().segment(3 * j, 3) - f.beta()).lpNorm<Eigen::Infinity>(), 1e-6);
    }
    EXPECT_LE(joint.cycles, 2);
}

TEST(FitStatic, MatchesFullQpOracle) {
    std::mt19937_64 rng(13);
    const Matrix X = testutil::gaussian_matrix(rng, 20, 12);
    Vector truth = Vector::Zero(12);
    truth.segment(0, 4) << 2, 1.5, 1, 0.5;
    truth.segment(4, 4) << -1, -0.5, 0, 0;
    const Vector y = X * truth + testutil::gaussian_vector(rng, 20, 0.5);
    const Dataset d = center(make_dataset(X, y));
    FitConfig cfg;
    cfg.lam = 0.4;
    cfg.tol = 1e-12;
    BlockConfig bc;
    bc.tol = 1e-12;
    bc.max_cycles = 5000;
    const BlockFit fit = fit_static(d, 4, cfg, nullptr, bc);
    const double oracle = oracle::ordered_lasso_min(d.X, d.y, 0.4, 4);
    EXPECT_NEAR(fit.objective, oracle, 1e-5 * (1.0 + std::abs(oracle)));
    for (const SplitCoefficients& b : fit.blocks) EXPECT_TRUE(b.feasible());
}

TEST(FitStatic, BlockUpdatesNeverIncreaseObjective) {
    diagnostics::reset();
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix X = testutil::gaussian_matrix(rng, 25, 15);
        const Vector y = testutil::gaussian_vector(rng, 25, 3.0);
        const Dataset d = center(make_dataset(X, y));
        FitConfig cfg;
        cfg.lam = 0.5 + trial;
        fit_static(d, 5, cfg);
    }
    EXPECT_GT(diagnostics::steps_checked(), 0u);
    EXPECT_EQ(diagnostics::violations(), 0u) << diagnostics::last_violation();
}

TEST(FitStatic, WarmStartAgrees) {
    std::mt19937_64 rng(19);
    const Matrix X = testutil::gaussian_matrix(rng, 30, 8);
    const Vector y = X * Vector::LinSpaced(8, 2.0, 0.0) + testutil::gaussian_vector(rng, 30);
    const Dataset d = center(make_dataset(X, y));
    FitConfig cfg;
    cfg.lam = 5.0;
    const BlockFit first = fit_static(d, 4, cfg);
    cfg.lam = 3.0;
    const BlockFit warm = fit_static(d, 4, cfg, &first);
    const BlockFit cold = fit_static(d, 4, cfg);
    EXPECT_NEAR(warm.objective, cold.objective, 1e-6 * cold.objective);
}

TEST(FitStatic, DimensionMismatch) {
    const Dataset d = center(make_dataset(Matrix::Identity(5, 5), Vector::Ones(5)));
    try {
        fit_static(d, 2, FitConfig{});
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
    }
}

TEST(FitRolling, NoiseSeriesGivesZeroFit) {
    std::mt19937_64 rng(23);
    const Matrix s = testutil::gaussian_matrix(rng, 200, 2);
    const Vector y = testutil::gaussian_vector(rng, 200);
    LagSpec spec;
    spec.predictors = 2;
    spec.max_lag = 5;
    const LagDesign design = build_rolling_design(s, y, spec);
    const Dataset d = center(make_dataset(design.Z, design.response));
    // Moderate lambda: past the zero-solution threshold, which the prox fixed
    // point at zero certifies independently of the solver.
    const double lam = 1.01 * lambda_zero_bound(d);
    const Vector grad = d.X.transpose() * d.y;
    for (Eigen::Index j = 0; j < 2; ++j) {
        const Vector g = grad.segment(5 * j, 5);
        EXPECT_TRUE(prox_monotone_nonneg({g, lam, {}, {}}).isZero(0.0));
        EXPECT_TRUE(prox_monotone_nonneg({-g, lam, {}, {}}).isZero(0.0));
    }
    FitConfig cfg;
    cfg.lam = lam;
    const BlockFit fit = fit_rolling(s, y, spec, cfg);
    EXPECT_TRUE(fit.combined().isZero(0.0));
    EXPECT_EQ(effective_lags(fit), (std::vector<int>{0, 0}));
}

TEST(FitRolling, SingleBlockEqualsPlainFitOnLagMatrix) {
    std::mt19937_64 rng(29);
    Vector s = testutil::gaussian_vector(rng, 150);
    for (Eigen::Index t = 1; t < s.size(); ++t) s[t] += 0.6 * s[t - 1];
    LagSpec spec;
    spec.max_lag = 6;
    FitConfig cfg;
    cfg.lam = 3.0;
    const BlockFit rolled = fit_rolling(Matrix(s), s, spec, cfg);
    const LagDesign design = build_rolling_design(Matrix(s), s, spec);
    const OrderedLassoFit plain = fit_ordered_lasso(center(make_dataset(design.Z, design.response)), cfg);
    EXPECT_LE((rolled.combined() - plain.beta()).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(EffectiveLags, Definition) {
    Vector b(5);
    b << 2.1, 0.5, 0, 0, 0;
    EXPECT_EQ(effective_lags(single_block(b)), std::vector<int>{2});
    EXPECT_EQ(effective_lags(single_block(Vector::Zero(5))), std::vector<int>{0});
    b << 1, 0, 0, 0, -1e-9;
    EXPECT_EQ(effective_lags(single_block(b)), std::vector<int>{1});
    b << 1, 0, 0, 0, -1e-3;
    EXPECT_EQ(effective_lags(single_block(b)), std::vector<int>{5});
}
