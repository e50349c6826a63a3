#pragma once

#include "olasso/common.hpp"

#include <optional>

namespace olasso {

/// Design matrix and response. `center()` produces the zero-mean copy the
/// solvers require and keeps the means for intercept recovery.
struct Dataset {
    Matrix X;
    Vector y;
    Vector column_means;
    double y_mean = 0.0;
    bool centered = false;

    Eigen::Index rows() const { return X.rows(); }
    Eigen::Index cols() const { return X.cols(); }
};

Dataset make_dataset(Matrix X, Vector y);
Dataset center(const Dataset& raw);

/// Throws kNotCentered unless `data` came out of center() (means re-checked).
void require_centered(const Dataset& data);

/// beta = plus - minus, each half non-increasing and nonnegative.
struct SplitCoefficients {
    Vector plus;
    Vector minus;

    static SplitCoefficients zeros(Eigen::Index p);
    Eigen::Index size() const { return plus.size(); }
    Vector combined() const { return plus - minus; }
    bool feasible() const;
};

enum class Penalty {
    kOrdered,  // monotone-cone prox (isotonic shift and clip)
    kLasso,    // nonnegative soft threshold, no order constraint
};

struct FitConfig {
    double lam = 0.0;
    int max_iter = 10000;
    double tol = 1e-8;
    std::optional<double> theta;
    double backtrack_shrink = 0.5;
    double initial_step = 1.0;
    Penalty penalty = Penalty::kOrdered;

    void validate() const;
};

struct OrderedLassoFit {
    SplitCoefficients coefficients;
    double intercept = 0.0;
    double lam = 0.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    bool monotone_magnitudes = true;

    Vector beta() const { return coefficients.combined(); }
};

/// 1/2 ||y - X (plus - minus)||^2 + lam * sum(plus + minus).
double objective(const Dataset& data, const SplitCoefficients& coef, double lam);

/// objective() plus the up-jump penalty of a finite cfg.theta.
double penalized_objective(const Dataset& data, const SplitCoefficients& coef, const FitConfig& cfg);

/// Alternating proximal-gradient steps on the plus half (minus held fixed)
/// and then the minus half, each with its own backtracked step size.
/// Starts from zero unless `warm` is given.
OrderedLassoFit fit_ordered_lasso(const Dataset& data, const FitConfig& cfg,
                                  const SplitCoefficients* warm = nullptr);

/// ||X^T y||_inf; at or above this value the zero vector solves the problem.
double lambda_zero_bound(const Dataset& data);

/// True when |beta_j| is non-increasing in j.
bool magnitudes_monotone(const Vector& beta);

}  // namespace olasso
