#include "olasso/timelag.hpp"

#include "olasso/diagnostics.hpp"
#include "split_solver.hpp"

#include <cmath>

namespace olasso {

void LagSpec::validate() const {
    require(predictors >= 1, ErrorCode::kInvalidArgument, "need at least one predictor");
    require(max_lag >= 1, ErrorCode::kInvalidArgument, "maximum lag must be at least 1");
}

LagDesign build_rolling_design(const Matrix& series, const Vector& response, const LagSpec& spec) {
    spec.validate();
    require(static_cast<std::size_t>(series.cols()) == spec.predictors, ErrorCode::kDimensionMismatch,
            "series column count differs from the lag spec");
    require(series.rows() == response.size(), ErrorCode::kDimensionMismatch,
            "response length differs from series length");
    const auto n = static_cast<std::size_t>(series.rows());
    const std::size_t history = spec.history();
    require(n > history, ErrorCode::kInvalidArgument, "series shorter than maximum lag");

    const std::size_t rows = n - history;
    const std::size_t K = spec.max_lag;
    LagDesign d;
    d.spec = spec;
    d.origin = LagOrigin::kRolling;
    d.dropped_rows = history;
    d.Z.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(K * spec.predictors));
    d.response = response.tail(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = history + r;  // 0-based time index of the response
        for (std::size_t j = 0; j < spec.predictors; ++j) {
            for (std::size_t k = 0; k < K; ++k) {
                d.Z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j * K + k)) =
                    series(static_cast<Eigen::Index>(t - spec.first_lag - k), static_cast<Eigen::Index>(j));
            }
        }
    }
    return d;
}

Vector BlockFit::combined() const {
    const std::size_t width = block_width();
    Vector out(static_cast<Eigen::Index>(width * blocks.size()));
    for (std::size_t j = 0; j < blocks.size(); ++j)
        out.segment(static_cast<Eigen::Index>(j * width), static_cast<Eigen::Index>(width)) = blocks[j].combined();
    return out;
}

SplitCoefficients BlockFit::split() const {
    const std::size_t width = block_width();
    const auto total = static_cast<Eigen::Index>(width * blocks.size());
    SplitCoefficients out{Vector(total), Vector(total)};
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        out.plus.segment(static_cast<Eigen::Index>(j * width), static_cast<Eigen::Index>(width)) = blocks[j].plus;
        out.minus.segment(static_cast<Eigen::Index>(j * width), static_cast<Eigen::Index>(width)) = blocks[j].minus;
    }
    return out;
}

BlockFit as_block_fit(const OrderedLassoFit& fit) {
    BlockFit out;
    out.blocks = {fit.coefficients};
    out.intercept = fit.intercept;
    out.lam = fit.lam;
    out.objective = fit.objective;
    out.cycles = 1;
    out.converged = fit.converged;
    out.effective_lag = effective_lags(out);
    return out;
}

namespace {

double blocks_penalty(const std::vector<SplitCoefficients>& blocks, const FitConfig& cfg) {
    double pen = 0.0;
    for (const auto& b : blocks) pen += detail::split_penalty(b, cfg);
    return pen;
}

}  // namespace

BlockFit fit_static(const Dataset& lagged, std::size_t block_width, const FitConfig& cfg,
                    const BlockFit* warm, const BlockConfig& block_cfg) {
    cfg.validate();
    require_centered(lagged);
    require(block_width >= 1 && lagged.X.cols() % static_cast<Eigen::Index>(block_width) == 0,
            ErrorCode::kDimensionMismatch, "column count is not a multiple of the block width");
    require(block_cfg.max_cycles >= 1 && block_cfg.tol > 0.0, ErrorCode::kInvalidArgument,
            "invalid block coordinate descent settings");
    const std::size_t nblocks = static_cast<std::size_t>(lagged.X.cols()) / block_width;
    const auto K = static_cast<Eigen::Index>(block_width);
    if (warm) {
        require(warm->blocks.size() == nblocks && warm->block_width() == block_width,
                ErrorCode::kDimensionMismatch, "warm start block layout differs from the data");
    }

    if (nblocks == 1) {
        const OrderedLassoFit single =
            fit_ordered_lasso(lagged, cfg, warm ? &warm->blocks.front() : nullptr);
        return as_block_fit(single);
    }

    std::vector<SplitCoefficients> blocks =
        warm ? warm->blocks : std::vector<SplitCoefficients>(nblocks, SplitCoefficients::zeros(K));
    std::vector<Matrix> grams(nblocks);
    for (std::size_t j = 0; j < nblocks; ++j) {
        const auto cols = lagged.X.middleCols(static_cast<Eigen::Index>(j) * K, K);
        grams[j] = cols.transpose() * cols;
    }

    auto fitted_values = [&] {
        Vector f = Vector::Zero(lagged.X.rows());
        for (std::size_t j = 0; j < nblocks; ++j)
            f += lagged.X.middleCols(static_cast<Eigen::Index>(j) * K, K) * blocks[j].combined();
        return f;
    };
    double current = 0.5 * (lagged.y - fitted_values()).squaredNorm() + blocks_penalty(blocks, cfg);

    BlockFit out;
    for (int cycle = 1; cycle <= block_cfg.max_cycles; ++cycle) {
        const double cycle_start = current;
        for (std::size_t j = 0; j < nblocks; ++j) {
            const auto cols = lagged.X.middleCols(static_cast<Eigen::Index>(j) * K, K);
            // Partial residual against every other block, rebuilt from scratch.
            Vector partial = lagged.y;
            for (std::size_t l = 0; l < nblocks; ++l) {
                if (l == j) continue;
                partial -= lagged.X.middleCols(static_cast<Eigen::Index>(l) * K, K) * blocks[l].combined();
            }
            detail::QuadraticModel model;
            model.gram = grams[j];
            model.linear = cols.transpose() * partial;
            model.constant = 0.5 * partial.squaredNorm();

            const double others = blocks_penalty(blocks, cfg) - detail::split_penalty(blocks[j], cfg);
            const double before = model.value(blocks[j].combined()) + detail::split_penalty(blocks[j], cfg) + others;
            detail::SplitResult res = detail::solve_split(model, cfg, blocks[j], "fit_static block");
            blocks[j] = std::move(res.coef);
            current = res.objective + others;
            diagnostics::record_step("fit_static cycle", before, current);
        }
        out.cycles = cycle;
        if (std::abs(cycle_start - current) <= block_cfg.tol * std::abs(cycle_start)) {
            out.converged = true;
            break;
        }
    }

    out.blocks = std::move(blocks);
    out.lam = cfg.lam;
    const Vector beta = out.combined();
    out.objective = 0.5 * (lagged.y - lagged.X * beta).squaredNorm() + blocks_penalty(out.blocks, cfg);
    out.intercept = lagged.y_mean - lagged.column_means.dot(beta);
    out.effective_lag = effective_lags(out);
    return out;
}

BlockFit fit_rolling(const Matrix& series, const Vector& response, const LagSpec& spec,
                     const FitConfig& cfg, const BlockConfig& block_cfg) {
    const LagDesign design = build_rolling_design(series, response, spec);
    const Dataset data = center(make_dataset(design.Z, design.response));
    return fit_static(data, spec.max_lag, cfg, nullptr, block_cfg);
}

std::vector<int> effective_lags(const BlockFit& fit, double tol) {
    std::vector<int> out;
    out.reserve(fit.blocks.size());
    for (const auto& b : fit.blocks) {
        const Vector beta = b.combined();
        int lag = 0;
        for (Eigen::Index k = beta.size(); k > 0; --k) {
            if (std::abs(beta[k - 1]) > tol) {
                lag = static_cast<int>(k);
                break;
            }
        }
        out.push_back(lag);
    }
    return out;
}

}  // namespace olasso
