#pragma once

#include "olasso/timelag.hpp"

#include <cstdint>
#include <vector>

namespace olasso {

struct PathConfig {
    std::size_t n_lambdas = 100;
    double min_ratio = 1e-3;
    FitConfig fit;
    // Width of the ordered blocks; 0 means one block spanning every column.
    std::size_t block_width = 0;
    BlockConfig block;
};

struct LambdaPath {
    std::vector<double> lambdas;
    std::vector<BlockFit> fits;
    // False when the fit at the largest lambda has a nonzero coefficient.
    bool top_is_empty = true;
};

/// n values log-spaced from lam_max down to min_ratio * lam_max.
std::vector<double> lambda_grid(double lam_max, std::size_t n, double min_ratio = 1e-3);

/// Warm-started path over lambda_grid(lambda_zero_bound(data), ...).
LambdaPath lambda_path(const Dataset& data, const PathConfig& cfg);

/// Same, over a caller-supplied strictly decreasing grid.
LambdaPath lambda_path(const Dataset& data, const PathConfig& cfg, const std::vector<double>& lambdas);

struct DfEstimate {
    int plateau_count = 0;
    double lam = 0.0;
};

/// Number of maximal runs of equal nonzero |beta| within each block, summed
/// over blocks. Values within `tol` count as equal; |beta| <= tol is zero.
DfEstimate df_plateaus(const BlockFit& fit, double tol = 1e-8);
DfEstimate df_plateaus(const OrderedLassoFit& fit, double tol = 1e-8);

int nonzero_count(const BlockFit& fit, double tol = 1e-8);

enum class FoldScheme {
    kContiguous,  // time-ordered segments, required for series data
    kRandom,      // shuffled assignment for exchangeable rows
};

struct CvConfig {
    std::size_t folds = 2;
    FoldScheme scheme = FoldScheme::kContiguous;
    std::uint64_t seed = 1;
    PathConfig path;
};

struct CvResult {
    std::vector<double> lambdas;
    std::vector<double> mean_error;
    std::vector<double> std_error;
    // fold_error[f][l]: mean squared error on fold f's held-out rows.
    std::vector<std::vector<double>> fold_error;
    std::size_t best_index = 0;
    double best_lambda = 0.0;
    std::vector<int> fold_of_row;
};

/// Fold labels 0..folds-1 for `rows` observations.
std::vector<int> assign_folds(std::size_t rows, std::size_t folds, FoldScheme scheme, std::uint64_t seed);

/// Squared validation error per lambda pooled over held-out rows, on one
/// grid anchored at the full data. Ties resolve to the larger lambda.
CvResult cross_validate(const Dataset& data, const CvConfig& cfg);
CvResult cross_validate(const Dataset& data, const std::vector<int>& fold_of_row, const PathConfig& cfg);

/// Index of the smallest error, first occurrence (largest lambda on a
/// decreasing grid).
std::size_t argmin_first(const std::vector<double>& values);

}  // namespace olasso
