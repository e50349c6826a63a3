#include "olasso/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace olasso;

namespace {

std::string data_path(const char* name) { return std::string(OLASSO_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Designs, MatchCaptionParameters) {
    const LaggedSimulation f2 = fig2_design();
    EXPECT_EQ(f2.truth.size(), 4u);
    EXPECT_EQ(f2.max_lag(), 5u);
    EXPECT_EQ(f2.n_time, 111u);
    EXPECT_EQ(f2.sigma, 7.0);
    EXPECT_EQ(f2.truth_vector().sum(), 7 + 5 + 4 + 2 + 5 + 3 + 3);

    const LaggedSimulation f3 = fig3_design();
    EXPECT_EQ(f3.max_lag(), 20u);
    EXPECT_DOUBLE_EQ(f3.truth[0][0], 5.0);
    EXPECT_DOUBLE_EQ(f3.truth[0][19], 1.0);
    EXPECT_DOUBLE_EQ(f3.truth[1][9], 1.0);
    EXPECT_DOUBLE_EQ(f3.truth[1][10], 0.0);
    EXPECT_DOUBLE_EQ(f3.truth[2][4], 1.0);
    EXPECT_DOUBLE_EQ(f3.truth[2][5], 0.0);
    EXPECT_TRUE(f3.truth[3].isZero(0.0));
    EXPECT_DOUBLE_EQ(equally_spaced(5, 1, 5)[1], 4.0);
}

TEST(Designs, SimulatedShapeAndScrambling) {
    Rng a(1), b(1);
    const SimulatedSample s = simulate_lagged(fig2_design(), false, a);
    EXPECT_EQ(s.data.X.rows(), 106);
    EXPECT_EQ(s.data.X.cols(), 20);
    EXPECT_EQ(s.truth, fig2_design().truth_vector());
    const SimulatedSample t = simulate_lagged(fig2_design(), true, b);
    Vector x = t.truth, y = s.truth;
    std::sort(x.data(), x.data() + x.size());
    std::sort(y.data(), y.data() + y.size());
    EXPECT_EQ(x, y);
    EXPECT_NE(t.truth, s.truth);
}

TEST(TruthRecovery, PathRowsAndMonotonicity) {
    SimulationOptions opt;
    opt.n_lambdas = 30;
    const Fig1Result r = run_fig1(3, opt);
    EXPECT_EQ(r.table.rows.size(), 60u);
    const std::string csv = r.paths_csv();
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 61);
    for (const BlockFit& f : r.ordered.fits) EXPECT_TRUE(f.blocks.front().feasible());
}

TEST(TruthRecovery, OrderedRecoversTruthBetterInMostSeeds) {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Fig1Result r = run_fig1(seed);
        if (r.ordered_best_distance < r.lasso_best_distance) ++wins;
    }
    EXPECT_GT(wins, 10);
}

TEST(ThreePredictorSimulation, DeterministicAndOrderedWins) {
    const MseComparison a = run_fig2(5, 7);
    const MseComparison b = run_fig2(5, 7);
    EXPECT_EQ(a.table.csv(), b.table.csv());
    EXPECT_EQ(a.table.summary.dump(), b.table.summary.dump());
    EXPECT_EQ(a.ordered.mse.size(), 5u);
    EXPECT_LT(a.ordered.mean, a.lasso.mean);
}

TEST(ThreePredictorSimulation, EffectiveLagsTrackTruth) {
    const MseComparison r = run_fig2(20, 1);
    int first_long = 0;
    double first = 0.0, last = 0.0;
    for (const std::vector<int>& lags : r.ordered.effective_lags) {
        ASSERT_EQ(lags.size(), 4u);
        if (lags[0] >= 4) ++first_long;
        first += lags[0];
        last += lags[3];
    }
    EXPECT_GT(first_long, 10);
    EXPECT_GT(first, last);
}

TEST(ThreePredictorSimulation, SingleLagSinglePredictorMethodsCoincide) {
    LaggedSimulation d;
    d.truth = {Vector::Constant(1, 2.0)};
    d.n_time = 60;
    d.sigma = 1.0;
    Rng rng(5);
    const SimulatedSample s = simulate_lagged(d, false, rng);
    PathConfig pc;
    pc.n_lambdas = 20;
    const LambdaPath ordered = lambda_path(s.data, pc);
    pc.fit.penalty = Penalty::kLasso;
    const LambdaPath lasso = lambda_path(s.data, pc);
    for (std::size_t l = 0; l < 20; ++l)
        EXPECT_NEAR(ordered.fits[l].combined()[0], lasso.fits[l].combined()[0], 1e-8);
}

TEST(ResultRows, CsvLayout) {
    const std::vector<ResultRow> rows{{"e", "m", 2, 0.5, "mse", 1.25},
                                      {"e", "m", 0, std::numeric_limits<double>::quiet_NaN(), "n", 3}};
    EXPECT_EQ(rows_to_csv(rows), "experiment,method,replicate,lambda,metric,value\ne,m,2,0.5,mse,1.25\ne,m,0,,n,3\n");
}

TEST(Ozone, CurvesAndBlocks) {
    const OzoneResult r = run_ozone(data_path("ozone.csv"));
    EXPECT_EQ(r.predictors.size(), 8u);
    EXPECT_EQ(r.ordered.error.size(), 100u);
    EXPECT_LE(r.ordered.min_error(), r.cross_sectional.min_error());
    EXPECT_LE(r.ordered.df_at_min(), r.lagged_lasso.df_at_min());
    ASSERT_EQ(r.ordered_coefficients.size(), 160);
    for (Eigen::Index j = 0; j < 8; ++j) {
        const Vector b = r.ordered_coefficients.segment(20 * j, 20);
        // With one sign per block (the usual case) magnitudes are monotone.
        if ((b.array() >= 0).all() || (b.array() <= 0).all())
            for (Eigen::Index k = 1; k < 20; ++k) EXPECT_LE(std::abs(b[k]), std::abs(b[k - 1]) + 1e-12);
    }
}

TEST(Ozone, SchemaErrors) {
    const auto dir = std::filesystem::temp_directory_path();
    const std::string path = (dir / "olasso_ozone_bad.csv").string();
    std::ofstream(path) << "a,b\n1,2\n3,4\n";
    try {
        run_ozone(path);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("expected a header row"), std::string::npos) << e.what();
    }
    EXPECT_THROW(run_ozone((dir / "olasso_no_such_file.csv").string()), Error);
}

TEST(Sunspot, AicOrderAndTables) {
    const SunspotResult r = run_sunspot(data_path("sunspot_year.csv"));
    EXPECT_EQ(r.aic.selected_order, 9);
    EXPECT_EQ(r.table.summary["ols-aic"]["selected_order"], 9);
    EXPECT_EQ(r.ordered.coefficients.size(), 20);
}

TEST(ArOrderSimulation, TableRows) {
    const ExperimentResult r = run_table1(3, 2);
    EXPECT_EQ(r.rows.size(), 22u);
    EXPECT_EQ(r.summary["simulations"], 3);
}
