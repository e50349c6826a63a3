#pragma once

#include "olasso/modelsel.hpp"
#include "olasso/rng.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace olasso {

enum class ArMethod { kOrderedLasso, kOlsAic, kLasso };

const char* to_string(ArMethod m);

struct ArConfig {
    FitConfig fit;  // fit.penalty == kLasso gives the unconstrained lasso AR fit
    std::size_t n_lambdas = 100;
    double min_ratio = 1e-3;
};

struct ArFit {
    ArMethod method = ArMethod::kOrderedLasso;
    Vector coefficients;  // length K, lag 1 first
    double intercept = 0.0;
    int selected_order = 0;
    double validation_error = 0.0;
    std::optional<double> lam;

    // Penalized fits: the grid and the validation curve it was chosen on.
    std::vector<double> lambdas;
    std::vector<double> validation_curve;
    // AIC fits: score per candidate order (NaN where the design was singular).
    std::vector<double> aic;
    std::vector<std::string> warnings;
};

/// Univariate lag design: row t holds y_{t-1} .. y_{t-K}, response y_t.
LagDesign build_autoregressive_design(std::span<const double> series, std::size_t max_lag);

/// Ordered lasso (or lasso) AR fit. The usable rows are split into a first
/// (training) and second (validation) half; lambda minimizes validation
/// error over a path fitted on the training half, and the order is the
/// effective lag of the training fit at that lambda.
ArFit fit_ar_ordered(std::span<const double> series, std::size_t max_lag, const ArConfig& cfg = {});

/// Least-squares AR(k) fits for k = 0..K on the common usable rows; picks the
/// smallest AIC = M log(RSS / M) + 2k, ties to the smaller order.
ArFit fit_ar_ols_aic(std::span<const double> series, std::size_t max_lag);

/// y_t = sum_k coef_k y_{t-k} + sigma z_t, started at zero; the first
/// `burn_in` values are discarded.
std::vector<double> simulate_ar_series(std::span<const double> coef, double sigma, std::size_t length,
                                       std::size_t burn_in, Rng& rng);

struct Table1Design {
    std::vector<double> coefficients{0.35, 0.25, 0.25};
    double sigma = 4.0;
    std::size_t length = 1000;
    std::size_t burn_in = 100;
    std::size_t max_lag = 10;
};

struct Table1Result {
    std::size_t n_sims = 0;
    Table1Design design;
    // counts[k] = number of simulations selecting order k, k = 0..max_lag.
    std::vector<int> aic_counts;
    std::vector<int> ordered_counts;
};

Table1Result simulate_table1(std::size_t n_sims, std::uint64_t seed, const Table1Design& design = {});

}  // namespace olasso
