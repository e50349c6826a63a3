#include "olasso/modelsel.hpp"

#include "olasso/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace olasso {

std::vector<double> lambda_grid(double lam_max, std::size_t n, double min_ratio) {
    require(n >= 2, ErrorCode::kInvalidArgument, "a lambda path needs at least two values");
    require(min_ratio > 0.0 && min_ratio < 1.0, ErrorCode::kInvalidArgument,
            "lambda ratio must lie in (0, 1)");
    require(std::isfinite(lam_max) && lam_max >= 0.0, ErrorCode::kInvalidArgument,
            "largest lambda must be finite and nonnegative");
    if (lam_max == 0.0) lam_max = 1.0;  // zero response: any positive grid is empty
    std::vector<double> grid(n);
    const double log_hi = std::log(lam_max);
    const double log_lo = std::log(lam_max * min_ratio);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        grid[i] = std::exp(log_hi + frac * (log_lo - log_hi));
    }
    grid.front() = lam_max;
    return grid;
}

LambdaPath lambda_path(const Dataset& data, const PathConfig& cfg) {
    return lambda_path(data, cfg, lambda_grid(lambda_zero_bound(data), cfg.n_lambdas, cfg.min_ratio));
}

LambdaPath lambda_path(const Dataset& data, const PathConfig& cfg, const std::vector<double>& lambdas) {
    require(!lambdas.empty(), ErrorCode::kInvalidArgument, "empty lambda grid");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        require(lambdas[i] < lambdas[i - 1], ErrorCode::kInvalidArgument,
                "lambda grid must be strictly decreasing");
    const std::size_t width = cfg.block_width == 0 ? static_cast<std::size_t>(data.cols()) : cfg.block_width;

    LambdaPath path;
    path.lambdas = lambdas;
    path.fits.reserve(lambdas.size());
    for (double lam : lambdas) {
        FitConfig fc = cfg.fit;
        fc.lam = lam;
        const BlockFit* warm = path.fits.empty() ? nullptr : &path.fits.back();
        path.fits.push_back(fit_static(data, width, fc, warm, cfg.block));
    }
    path.top_is_empty = nonzero_count(path.fits.front(), 0.0) == 0;
    return path;
}

DfEstimate df_plateaus(const BlockFit& fit, double tol) {
    DfEstimate df;
    df.lam = fit.lam;
    for (const auto& block : fit.blocks) {
        const Vector mag = block.combined().cwiseAbs();
        double run_value = 0.0;
        bool in_run = false;
        for (Eigen::Index k = 0; k < mag.size(); ++k) {
            if (mag[k] <= tol) {
                in_run = false;
                continue;
            }
            if (!in_run || std::abs(mag[k] - run_value) > tol) ++df.plateau_count;
            in_run = true;
            run_value = mag[k];
        }
    }
    return df;
}

DfEstimate df_plateaus(const OrderedLassoFit& fit, double tol) {
    return df_plateaus(as_block_fit(fit), tol);
}

int nonzero_count(const BlockFit& fit, double tol) {
    int count = 0;
    for (const auto& block : fit.blocks)
        count += static_cast<int>((block.combined().cwiseAbs().array() > tol).count());
    return count;
}

std::vector<int> assign_folds(std::size_t rows, std::size_t folds, FoldScheme scheme, std::uint64_t seed) {
    require(folds >= 2, ErrorCode::kInvalidArgument, "cross-validation needs at least two folds");
    require(rows >= 2 * folds, ErrorCode::kInvalidArgument, "fold smaller than 2 rows");
    std::vector<int> labels(rows);
    for (std::size_t i = 0; i < rows; ++i)
        labels[i] = static_cast<int>((i * folds) / rows);
    if (scheme == FoldScheme::kRandom) {
        Rng rng(seed);
        rng.shuffle(labels);
    }
    return labels;
}

std::size_t argmin_first(const std::vector<double>& values) {
    require(!values.empty(), ErrorCode::kInvalidArgument, "empty sequence");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best]) best = i;
    return best;
}

CvResult cross_validate(const Dataset& data, const CvConfig& cfg) {
    return cross_validate(data, assign_folds(static_cast<std::size_t>(data.rows()), cfg.folds, cfg.scheme, cfg.seed),
                          cfg.path);
}

CvResult cross_validate(const Dataset& data, const std::vector<int>& fold_of_row, const PathConfig& cfg) {
    const auto n = static_cast<std::size_t>(data.rows());
    require(fold_of_row.size() == n, ErrorCode::kDimensionMismatch, "fold labels differ in length from rows");
    const int folds = *std::max_element(fold_of_row.begin(), fold_of_row.end()) + 1;
    require(folds >= 2, ErrorCode::kInvalidArgument, "cross-validation needs at least two folds");
    for (int f = 0; f < folds; ++f) {
        const auto size = std::count(fold_of_row.begin(), fold_of_row.end(), f);
        require(size >= 2 && static_cast<std::size_t>(size) + 2 <= n, ErrorCode::kInvalidArgument,
                "fold smaller than 2 rows");
    }

    const Dataset full = center(data);
    CvResult out;
    out.fold_of_row = fold_of_row;
    out.lambdas = lambda_grid(lambda_zero_bound(full), cfg.n_lambdas, cfg.min_ratio);
    const std::size_t L = out.lambdas.size();

    // Per-row squared errors so the pooled mean does not depend on how the
    // folds are labelled.
    Matrix row_error(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(L));
    out.fold_error.assign(static_cast<std::size_t>(folds), std::vector<double>(L, 0.0));
    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> train, test;
        for (std::size_t i = 0; i < n; ++i)
            (fold_of_row[i] == f ? test : train).push_back(static_cast<Eigen::Index>(i));
        const Dataset fold_train = center(make_dataset(data.X(train, Eigen::all), data.y(train)));
        const LambdaPath path = lambda_path(fold_train, cfg, out.lambdas);
        for (std::size_t l = 0; l < L; ++l) {
            const BlockFit& fit = path.fits[l];
            const Vector pred = (data.X(test, Eigen::all) * fit.combined()).array() + fit.intercept;
            const Vector err = data.y(test) - pred;
            out.fold_error[static_cast<std::size_t>(f)][l] = err.squaredNorm() / static_cast<double>(test.size());
            for (std::size_t t = 0; t < test.size(); ++t)
                row_error(test[t], static_cast<Eigen::Index>(l)) = err[static_cast<Eigen::Index>(t)] *
                                                                     err[static_cast<Eigen::Index>(t)];
        }
    }

    out.mean_error.resize(L);
    out.std_error.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        const auto col = row_error.col(static_cast<Eigen::Index>(l));
        const double mean = col.mean();
        const double var = n > 1 ? (col.array() - mean).square().sum() / static_cast<double>(n - 1) : 0.0;
        out.mean_error[l] = mean;
        out.std_error[l] = std::sqrt(var / static_cast<double>(n));
    }
    out.best_index = argmin_first(out.mean_error);
    out.best_lambda = out.lambdas[out.best_index];
    return out;
}

}  // namespace olasso
