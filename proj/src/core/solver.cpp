#include "olasso/solver.hpp"

#include "olasso/diagnostics.hpp"
#include "olasso/prox.hpp"
#include "split_solver.hpp"

#include <algorithm>
#include <cmath>

namespace olasso {

Dataset make_dataset(Matrix X, Vector y) {
    require(X.rows() >= 1 && X.cols() >= 1, ErrorCode::kInvalidArgument,
            "dataset needs at least one row and one column");
    require(X.rows() == y.size(), ErrorCode::kDimensionMismatch,
            "response length differs from the number of rows");
    Dataset d;
    d.X = std::move(X);
    d.y = std::move(y);
    d.column_means = Vector::Zero(d.X.cols());
    return d;
}

Dataset center(const Dataset& raw) {
    require(raw.X.rows() == raw.y.size(), ErrorCode::kDimensionMismatch,
            "response length differs from the number of rows");
    require(raw.X.rows() >= 1 && raw.X.cols() >= 1, ErrorCode::kInvalidArgument,
            "dataset needs at least one row and one column");
    if (raw.centered) return raw;
    Dataset d;
    d.column_means = raw.X.colwise().mean().transpose();
    d.y_mean = raw.y.mean();
    d.X = raw.X.rowwise() - d.column_means.transpose();
    d.y = raw.y.array() - d.y_mean;
    d.centered = true;
    return d;
}

void require_centered(const Dataset& data) {
    require(data.centered, ErrorCode::kNotCentered, "data must be centered before fitting");
    require(data.X.rows() == data.y.size(), ErrorCode::kDimensionMismatch,
            "response length differs from the number of rows");
    const double n = static_cast<double>(data.X.rows());
    const double xscale = std::max(1.0, data.X.cwiseAbs().maxCoeff());
    const double yscale = std::max(1.0, data.y.cwiseAbs().maxCoeff());
    require((data.X.colwise().sum().cwiseAbs() / n).maxCoeff() <= 1e-10 * xscale &&
                std::abs(data.y.sum() / n) <= 1e-10 * yscale,
            ErrorCode::kNotCentered, "data flagged centered but column means are nonzero");
}

SplitCoefficients SplitCoefficients::zeros(Eigen::Index p) {
    return {Vector::Zero(p), Vector::Zero(p)};
}

bool SplitCoefficients::feasible() const {
    if (plus.size() != minus.size()) return false;
    if ((plus.array() < 0.0).any() || (minus.array() < 0.0).any()) return false;
    for (Eigen::Index j = 0; j + 1 < plus.size(); ++j) {
        if (plus[j + 1] > plus[j] || minus[j + 1] > minus[j]) return false;
    }
    return true;
}

void FitConfig::validate() const {
    require(std::isfinite(lam) && lam >= 0.0, ErrorCode::kInvalidArgument,
            "lambda must be finite and nonnegative");
    require(max_iter >= 1, ErrorCode::kInvalidArgument, "max_iter must be positive");
    require(tol > 0.0, ErrorCode::kInvalidArgument, "tol must be positive");
    require(backtrack_shrink > 0.0 && backtrack_shrink < 1.0, ErrorCode::kInvalidArgument,
            "backtrack shrink must lie in (0, 1)");
    require(initial_step > 0.0 && std::isfinite(initial_step), ErrorCode::kInvalidArgument,
            "initial step must be positive");
    require(!theta || *theta >= 0.0, ErrorCode::kInvalidArgument, "theta must be nonnegative");
}

double objective(const Dataset& data, const SplitCoefficients& coef, double lam) {
    require(coef.plus.size() == data.X.cols() && coef.minus.size() == data.X.cols(),
            ErrorCode::kDimensionMismatch, "coefficient length differs from column count");
    require(data.X.rows() == data.y.size(), ErrorCode::kDimensionMismatch,
            "response length differs from the number of rows");
    const Vector residual = data.y - data.X * coef.combined();
    return 0.5 * residual.squaredNorm() + lam * (coef.plus.sum() + coef.minus.sum());
}

double penalized_objective(const Dataset& data, const SplitCoefficients& coef, const FitConfig& cfg) {
    const Vector residual = data.y - data.X * coef.combined();
    require(coef.plus.size() == data.X.cols(), ErrorCode::kDimensionMismatch,
            "coefficient length differs from column count");
    return 0.5 * residual.squaredNorm() + detail::split_penalty(coef, cfg);
}

double lambda_zero_bound(const Dataset& data) {
    return (data.X.transpose() * data.y).cwiseAbs().maxCoeff();
}

bool magnitudes_monotone(const Vector& beta) {
    for (Eigen::Index j = 0; j + 1 < beta.size(); ++j) {
        if (std::abs(beta[j + 1]) > std::abs(beta[j])) return false;
    }
    return true;
}

namespace detail {

QuadraticModel least_squares_model(const Matrix& X, const Vector& y) {
    QuadraticModel m;
    m.gram = X.transpose() * X;
    m.linear = X.transpose() * y;
    m.constant = 0.5 * y.squaredNorm();
    return m;
}

namespace {

double up_jumps(const Vector& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i + 1 < v.size(); ++i) s += std::max(0.0, v[i + 1] - v[i]);
    return s;
}

Vector apply_prox(const FitConfig& cfg, Vector point, double step) {
    if (cfg.penalty == Penalty::kLasso) return prox_nonneg_soft_threshold(point, step * cfg.lam);
    ProxRequest req;
    req.point = std::move(point);
    req.lam = step * cfg.lam;
    if (cfg.theta && std::isfinite(*cfg.theta)) req.theta = step * *cfg.theta;
    return prox_monotone_nonneg(req);
}

}  // namespace

double split_penalty(const SplitCoefficients& coef, const FitConfig& cfg) {
    double pen = cfg.lam * (coef.plus.sum() + coef.minus.sum());
    if (cfg.penalty == Penalty::kOrdered && cfg.theta && std::isfinite(*cfg.theta))
        pen += *cfg.theta * (up_jumps(coef.plus) + up_jumps(coef.minus));
    return pen;
}

double split_half_step(const QuadraticModel& model, const FitConfig& cfg, Vector& half,
                       double sign, Vector& beta, double step) {
    // Gradient of the smooth part with respect to this half.
    const Vector grad = sign * (model.gram * beta - model.linear);
    constexpr int kMaxBacktracks = 80;
    for (int attempt = 0; attempt < kMaxBacktracks; ++attempt) {
        Vector candidate = apply_prox(cfg, half - step * grad, step);
        const Vector delta = candidate - half;
        const double dd = delta.squaredNorm();
        if (dd == 0.0) return step;
        // f is quadratic, so f(b + s d) - f(b) - <grad, d> = 1/2 d'Gd exactly;
        // sufficient decrease asks this to be at most ||d||^2 / (2 step).
        const double curvature = delta.dot(model.gram * delta);
        if (step * curvature <= dd * (1.0 + 1e-12)) {
            half = std::move(candidate);
            beta += sign * delta;
            return step;
        }
        step *= cfg.backtrack_shrink;
    }
    return step;
}

SplitResult solve_split(const QuadraticModel& model, const FitConfig& cfg,
                        SplitCoefficients start, const char* where) {
    SplitResult out;
    out.coef = std::move(start);
    Vector beta = out.coef.combined();
    double step_plus = cfg.initial_step;
    double step_minus = cfg.initial_step;

    double current = model.value(beta) + split_penalty(out.coef, cfg);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const double before = current;
        step_plus = split_half_step(model, cfg, out.coef.plus, 1.0, beta, step_plus);
        const double mid = model.value(beta) + split_penalty(out.coef, cfg);
        diagnostics::record_step(where, before, mid);
        step_minus = split_half_step(model, cfg, out.coef.minus, -1.0, beta, step_minus);
        current = model.value(beta) + split_penalty(out.coef, cfg);
        diagnostics::record_step(where, mid, current);

        out.iterations = it;
        if (std::abs(before - current) <= cfg.tol * std::abs(before)) {
            out.converged = true;
            break;
        }
    }
    out.objective = current;
    return out;
}

}  // namespace detail

OrderedLassoFit fit_ordered_lasso(const Dataset& data, const FitConfig& cfg,
                                  const SplitCoefficients* warm) {
    cfg.validate();
    require_centered(data);
    const Eigen::Index p = data.X.cols();
    SplitCoefficients start = SplitCoefficients::zeros(p);
    if (warm) {
        require(warm->plus.size() == p && warm->minus.size() == p, ErrorCode::kDimensionMismatch,
                "warm start length differs from column count");
        require(warm->feasible() || cfg.penalty == Penalty::kLasso || cfg.theta,
                ErrorCode::kInvalidArgument, "warm start violates the order constraint");
        start = *warm;
    }

    const detail::QuadraticModel model = detail::least_squares_model(data.X, data.y);
    detail::SplitResult res = detail::solve_split(model, cfg, std::move(start), "fit_ordered_lasso");

    OrderedLassoFit fit;
    fit.coefficients = std::move(res.coef);
    fit.lam = cfg.lam;
    fit.iterations = res.iterations;
    fit.converged = res.converged;
    fit.objective = penalized_objective(data, fit.coefficients, cfg);
    const Vector beta = fit.coefficients.combined();
    fit.intercept = data.y_mean - data.column_means.dot(beta);
    fit.monotone_magnitudes = magnitudes_monotone(beta);
    return fit;
}

}  // namespace olasso
