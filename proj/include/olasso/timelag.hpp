#pragma once

#include "olasso/solver.hpp"

#include <vector>

namespace olasso {

/// `predictors` series, each entering at lags first_lag .. first_lag+max_lag-1.
/// first_lag = 1 is the usual rolling setup; 0 also uses same-time values.
struct LagSpec {
    std::size_t predictors = 1;
    std::size_t max_lag = 1;
    std::size_t first_lag = 1;

    std::size_t history() const { return first_lag + max_lag - 1; }
    void validate() const;
};

enum class LagOrigin { kStatic, kRolling };

/// Expanded feature matrix: p blocks of K columns, block j column k holding
/// predictor j at lag first_lag + k.
struct LagDesign {
    Matrix Z;
    Vector response;
    LagSpec spec;
    LagOrigin origin = LagOrigin::kRolling;
    std::size_t dropped_rows = 0;

    std::size_t block_width() const { return spec.max_lag; }
    std::size_t blocks() const { return spec.predictors; }
};

/// Rows t = history()+1 .. N of the series (1-based), response aligned to y_t.
LagDesign build_rolling_design(const Matrix& series, const Vector& response, const LagSpec& spec);

struct BlockConfig {
    double tol = 1e-7;
    int max_cycles = 200;
};

struct BlockFit {
    std::vector<SplitCoefficients> blocks;
    double intercept = 0.0;
    double lam = 0.0;
    double objective = 0.0;
    int cycles = 0;
    bool converged = false;
    std::vector<int> effective_lag;

    Vector combined() const;
    SplitCoefficients split() const;
    std::size_t block_width() const { return blocks.empty() ? 0 : static_cast<std::size_t>(blocks.front().size()); }
};

BlockFit as_block_fit(const OrderedLassoFit& fit);

/// Blockwise coordinate descent over contiguous column blocks of width
/// `block_width`: each block is refitted by fit_ordered_lasso's inner loop
/// against the partial residual of all other blocks, in fixed order, until
/// the full objective stops moving. A single block is fit_ordered_lasso.
BlockFit fit_static(const Dataset& lagged, std::size_t block_width, const FitConfig& cfg,
                    const BlockFit* warm = nullptr, const BlockConfig& block_cfg = {});

/// build_rolling_design followed by centering and fit_static.
BlockFit fit_rolling(const Matrix& series, const Vector& response, const LagSpec& spec,
                     const FitConfig& cfg, const BlockConfig& block_cfg = {});

/// Per block, the largest lag position k (1-based) with |beta_k| > tol.
std::vector<int> effective_lags(const BlockFit& fit, double tol = 1e-8);

}  // namespace olasso
