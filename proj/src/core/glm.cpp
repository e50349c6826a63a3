#include "olasso/glm.hpp"

#include "olasso/diagnostics.hpp"
#include "split_solver.hpp"

#include <algorithm>
#include <cmath>

namespace olasso {

namespace {

void require_binary(const Matrix& X, const Vector& y) {
    require(X.rows() == y.size(), ErrorCode::kDimensionMismatch, "response length differs from row count");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        require(y[i] == 0.0 || y[i] == 1.0, ErrorCode::kInvalidArgument, "response must be 0/1");
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double blocks_penalty(const std::vector<SplitCoefficients>& blocks, const FitConfig& cfg) {
    double pen = 0.0;
    for (const auto& b : blocks) pen += detail::split_penalty(b, cfg);
    return pen;
}

Vector combine(const std::vector<SplitCoefficients>& blocks) {
    Eigen::Index p = 0;
    for (const auto& b : blocks) p += b.size();
    Vector beta(p);
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
        beta.segment(off, b.size()) = b.combined();
        off += b.size();
    }
    return beta;
}

// Blockwise descent on a quadratic model over all columns. A single block is
// one call to the split solver.
std::vector<SplitCoefficients> solve_blocks(const detail::QuadraticModel& model, const FitConfig& cfg,
                                            std::vector<SplitCoefficients> blocks, const BlockConfig& bc) {
    if (blocks.size() == 1) return {detail::solve_split(model, cfg, std::move(blocks.front()), "irls subproblem").coef};

    const Eigen::Index K = blocks.front().size();
    auto total = [&] { return model.value(combine(blocks)) + blocks_penalty(blocks, cfg); };
    double current = total();
    for (int cycle = 1; cycle <= bc.max_cycles; ++cycle) {
        const double cycle_start = current;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            const Eigen::Index off = static_cast<Eigen::Index>(j) * K;
            Vector beta = combine(blocks);
            beta.segment(off, K).setZero();
            detail::QuadraticModel sub;
            sub.gram = model.gram.block(off, off, K, K);
            sub.linear = model.linear.segment(off, K) - model.gram.middleRows(off, K) * beta;
            sub.constant = model.value(beta);
            const double others = blocks_penalty(blocks, cfg) - detail::split_penalty(blocks[j], cfg);
            const double before = current;
            detail::SplitResult res = detail::solve_split(sub, cfg, blocks[j], "irls block");
            blocks[j] = std::move(res.coef);
            current = res.objective + others;
            diagnostics::record_step("irls block cycle", before, current);
        }
        if (std::abs(cycle_start - current) <= bc.tol * std::abs(cycle_start)) break;
    }
    return blocks;
}

}  // namespace

double log_likelihood(const Matrix& X, const Vector& y, double intercept, const Vector& beta) {
    require_binary(X, y);
    require(beta.size() == X.cols(), ErrorCode::kDimensionMismatch, "coefficient length differs from column count");
    const Vector eta = (X * beta).array() + intercept;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y[i] * eta[i] - softplus(eta[i]);
    return ll;
}

Vector log_likelihood_gradient(const Matrix& X, const Vector& y, double intercept, const Vector& beta) {
    require_binary(X, y);
    require(beta.size() == X.cols(), ErrorCode::kDimensionMismatch, "coefficient length differs from column count");
    const Vector eta = (X * beta).array() + intercept;
    Vector r(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) r[i] = y[i] - sigmoid(eta[i]);
    Vector g(X.cols() + 1);
    g[0] = r.sum();
    g.tail(X.cols()) = X.transpose() * r;
    return g;
}

IrlsState irls_state(const Matrix& X, const Vector& y, double intercept, const Vector& beta, double prob_clip) {
    require_binary(X, y);
    require(prob_clip > 0.0 && prob_clip < 0.5, ErrorCode::kInvalidArgument, "probability clip must be in (0, 0.5)");
    const Vector eta = (X * beta).array() + intercept;
    IrlsState s;
    s.probabilities.resize(eta.size());
    s.weights.resize(eta.size());
    s.working_response.resize(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double p = std::clamp(sigmoid(eta[i]), prob_clip, 1.0 - prob_clip);
        s.probabilities[i] = p;
        s.weights[i] = p * (1.0 - p);
        s.working_response[i] = eta[i] + (y[i] - p) / s.weights[i];
    }
    return s;
}

void LogisticConfig::validate() const {
    fit.validate();
    require(prob_clip > 0.0 && prob_clip < 0.5, ErrorCode::kInvalidArgument, "probability clip must be in (0, 0.5)");
    require(outer_tol > 0.0 && max_outer >= 1 && max_halvings >= 0, ErrorCode::kInvalidArgument,
            "invalid IRLS settings");
}

Vector LogisticFit::beta() const { return combine(blocks); }

SplitCoefficients LogisticFit::split() const {
    const Eigen::Index p = beta().size();
    SplitCoefficients s = SplitCoefficients::zeros(p);
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
        s.plus.segment(off, b.size()) = b.plus;
        s.minus.segment(off, b.size()) = b.minus;
        off += b.size();
    }
    return s;
}

LogisticFit fit_logistic_ordered(const Matrix& X, const Vector& y, const LogisticConfig& cfg, const LogisticFit* warm) {
    cfg.validate();
    require_binary(X, y);
    require(X.rows() >= 2 && X.cols() >= 1, ErrorCode::kInvalidArgument, "need at least 2 rows and 1 column");
    const Eigen::Index p = X.cols();
    const auto width = static_cast<Eigen::Index>(cfg.block_width == 0 ? static_cast<std::size_t>(p) : cfg.block_width);
    require(p % width == 0, ErrorCode::kDimensionMismatch, "column count is not a multiple of the block width");
    const auto nblocks = static_cast<std::size_t>(p / width);

    // Predictors centered for conditioning; the intercept is mapped back at the end.
    const Vector means = X.colwise().mean();
    const Matrix Xc = X.rowwise() - means.transpose();

    std::vector<SplitCoefficients> blocks(nblocks, SplitCoefficients::zeros(width));
    double b0 = 0.0;
    if (warm) {
        require(warm->blocks.size() == nblocks && warm->blocks.front().size() == width,
                ErrorCode::kDimensionMismatch, "warm start block layout differs from the data");
        blocks = warm->blocks;
        b0 = warm->intercept + means.dot(combine(blocks));
    } else {
        const double ybar = std::clamp(y.mean(), cfg.prob_clip, 1.0 - cfg.prob_clip);
        b0 = std::log(ybar / (1.0 - ybar));
    }

    auto penalized = [&](double icpt, const std::vector<SplitCoefficients>& bl) {
        return log_likelihood(Xc, y, icpt, combine(bl)) - blocks_penalty(bl, cfg.fit);
    };

    LogisticFit out;
    double current = penalized(b0, blocks);
    out.trace.push_back(current);
    for (int outer = 1; outer <= cfg.max_outer; ++outer) {
        out.outer_iterations = outer;
        const IrlsState s = irls_state(Xc, y, b0, combine(blocks), cfg.prob_clip);
        const Vector& w = s.weights;
        const double wsum = w.sum();
        // Profile the unpenalized intercept out of the weighted problem.
        const Vector xbar = Xc.transpose() * w / wsum;
        const double zbar = w.dot(s.working_response) / wsum;
        const Matrix Xt = Xc.rowwise() - xbar.transpose();
        const Vector zt = s.working_response.array() - zbar;
        detail::QuadraticModel model;
        model.gram = Xt.transpose() * w.asDiagonal() * Xt;
        model.linear = Xt.transpose() * w.cwiseProduct(zt);
        model.constant = 0.5 * zt.dot(w.cwiseProduct(zt));

        const std::vector<SplitCoefficients> target = solve_blocks(model, cfg.fit, blocks, cfg.block);
        const double target_b0 = zbar - xbar.dot(combine(target));

        // Damped move toward the subproblem solution. Convex combinations of
        // feasible split coefficients stay feasible.
        double alpha = 1.0;
        bool accepted = false;
        std::vector<SplitCoefficients> trial = target;
        double trial_b0 = target_b0, trial_value = 0.0;
        for (int h = 0; h <= cfg.max_halvings; ++h) {
            for (std::size_t j = 0; j < nblocks; ++j) {
                trial[j].plus = blocks[j].plus + alpha * (target[j].plus - blocks[j].plus);
                trial[j].minus = blocks[j].minus + alpha * (target[j].minus - blocks[j].minus);
            }
            trial_b0 = b0 + alpha * (target_b0 - b0);
            trial_value = penalized(trial_b0, trial);
            if (trial_value >= current - diagnostics::kDescentSlack * std::max(1.0, std::abs(current))) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // no ascent along the IRLS direction; flagged as unconverged

        diagnostics::record_step("irls outer", current, trial_value, diagnostics::Direction::kMaximize);
        const double change = std::abs(trial_value - current);
        blocks = std::move(trial);
        b0 = trial_b0;
        const double previous = current;
        current = trial_value;
        out.trace.push_back(current);
        if (change <= cfg.outer_tol * std::max(1.0, std::abs(previous))) {
            out.converged = true;
            break;
        }
    }

    const Vector beta = combine(blocks);
    out.blocks = std::move(blocks);
    out.lam = cfg.fit.lam;
    out.intercept = b0 - means.dot(beta);
    out.log_likelihood = log_likelihood(X, y, out.intercept, beta);
    out.penalized = out.log_likelihood - blocks_penalty(out.blocks, cfg.fit);
    return out;
}

}  // namespace olasso
