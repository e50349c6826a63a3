#pragma once

#include "olasso/autoregress.hpp"
#include "olasso/io.hpp"
#include "olasso/modelsel.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace olasso {

/// One long-format output record.
struct ResultRow {
    std::string experiment;
    std::string method;
    int replicate = 0;
    double lam = std::numeric_limits<double>::quiet_NaN();  // NaN when not tied to a lambda
    std::string metric;
    double value = 0.0;
};

struct ExperimentResult {
    std::string experiment;
    std::vector<ResultRow> rows;
    nlohmann::json summary;

    std::string csv() const;
};

/// Columns experiment,method,replicate,lambda,metric,value.
std::string rows_to_csv(const std::vector<ResultRow>& rows);

// Rolling time-lagged simulation: p iid N(0, 1) predictor series of length
// n_time, response y_t = sum_j sum_k x_{t-k,j} beta_kj + sigma z_t on the
// n_time - K rows with full history.
struct LaggedSimulation {
    std::vector<Vector> truth;  // one length-K block per predictor
    std::size_t n_time = 111;
    double sigma = 7.0;

    std::size_t max_lag() const { return truth.empty() ? 0 : static_cast<std::size_t>(truth.front().size()); }
    Vector truth_vector() const;
};

LaggedSimulation fig2_design();
// f(a, b, L) is the equally spaced sequence from a to b of length L.
Vector equally_spaced(double a, double b, std::size_t length);
LaggedSimulation fig3_design();

struct SimulatedSample {
    Dataset data;  // centered lag design
    Vector truth;  // the coefficient vector used for this replicate
};

/// With `scrambled`, the full coefficient vector (all K p entries) is
/// randomly permuted first, so blocks are generally no longer monotone.
SimulatedSample simulate_lagged(const LaggedSimulation& design, bool scrambled, Rng& rng);

struct MethodSummary {
    std::string method;
    std::vector<double> mse;  // per replicate, at that replicate's best lambda
    std::vector<double> best_lambda;
    std::vector<std::vector<int>> effective_lags;
    double mean = 0.0;
    double std_error = 0.0;

    void finish();
};

struct MseComparison {
    MethodSummary ordered;
    MethodSummary lasso;
    ExperimentResult table;
};

struct SimulationOptions {
    std::size_t n_lambdas = 100;
    double min_ratio = 1e-3;
};

/// Coefficient error is the total sum (beta_hat - beta)^2 over all K p
/// coefficients, minimized over the path per replicate (oracle choice of
/// lambda). Rows also carry the per-coefficient mean.
MseComparison run_fig2(std::size_t n_replicates, std::uint64_t seed, const SimulationOptions& opt = {});
MseComparison run_fig3(std::size_t n_replicates, std::uint64_t seed, bool scrambled,
                       const SimulationOptions& opt = {});

struct Fig1Result {
    Vector truth;
    LambdaPath ordered;
    LambdaPath lasso;
    double ordered_best_distance = 0.0;  // l2 distance to truth at the best lambda
    double lasso_best_distance = 0.0;
    ExperimentResult table;  // l2 distance to truth per method and lambda

    /// Wide format: method,lambda,b1..bp; one row per method and lambda.
    std::string paths_csv() const;
};

/// N = 30, p = 20, beta = (10, 9, ..., 1, 0, ..., 0), sigma = 7.
Fig1Result run_fig1(std::uint64_t seed, const SimulationOptions& opt = {});

struct ValidationCurve {
    std::string method;
    std::vector<double> lambdas;
    std::vector<double> error;  // mean squared validation error
    std::vector<int> df;        // plateaus (ordered) or nonzeros (lasso)
    std::size_t best = 0;

    double min_error() const { return error[best]; }
    int df_at_min() const { return df[best]; }
};

struct OzoneResult {
    ValidationCurve cross_sectional;
    ValidationCurve lagged_lasso;
    ValidationCurve ordered;
    std::vector<std::string> predictors;
    std::size_t max_lag = 20;
    Vector ordered_coefficients;  // at the best lambda, predictor-major
    Vector lasso_coefficients;
    std::vector<int> ordered_effective_lags;
    ExperimentResult table;
};

struct OzoneOptions {
    std::string response = "ozone";
    std::vector<std::string> ignore{"doy"};
    std::size_t max_lag = 20;  // lags 0 .. max_lag - 1
    std::size_t n_lambdas = 100;
    double min_ratio = 1e-3;
};

/// Log response, predictors standardized with training-half statistics,
/// first half of the usable days for training and the second for validation.
OzoneResult run_ozone(const std::string& csv_path, const OzoneOptions& opt = {});

struct SunspotResult {
    ArFit aic;
    ArFit ordered;
    ArFit lasso;
    ExperimentResult table;
};

SunspotResult run_sunspot(const std::string& csv_path, std::size_t max_lag = 20,
                          const std::string& column = "count");

ExperimentResult run_table1(std::size_t n_sims, std::uint64_t seed);
ExperimentResult table1_table(const Table1Result& r, std::uint64_t seed);

}  // namespace olasso
