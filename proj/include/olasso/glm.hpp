#pragma once

#include "olasso/timelag.hpp"

#include <vector>

namespace olasso {

/// sum_i y_i eta_i - log(1 + exp(eta_i)), eta = intercept + X beta.
/// y must be 0/1.
double log_likelihood(const Matrix& X, const Vector& y, double intercept, const Vector& beta);

/// Gradient of log_likelihood: entry 0 is d/d intercept, then d/d beta.
Vector log_likelihood_gradient(const Matrix& X, const Vector& y, double intercept, const Vector& beta);

/// Quadratic approximation of the log-likelihood at the current parameters.
struct IrlsState {
    Vector probabilities;  // clipped to [clip, 1 - clip]
    Vector weights;        // p (1 - p)
    Vector working_response;
};

IrlsState irls_state(const Matrix& X, const Vector& y, double intercept, const Vector& beta,
                     double prob_clip = 1e-5);

struct LogisticConfig {
    FitConfig fit;  // lam, penalty and the inner solver's tolerance
    double prob_clip = 1e-5;
    double outer_tol = 1e-8;
    int max_outer = 100;
    int max_halvings = 30;
    // 0 fits one ordered block over every column; otherwise the weighted
    // subproblem is solved blockwise over blocks of this width.
    std::size_t block_width = 0;
    BlockConfig block;

    void validate() const;
};

struct LogisticFit {
    std::vector<SplitCoefficients> blocks;
    double intercept = 0.0;  // on the original (uncentered) predictor scale
    double lam = 0.0;
    double log_likelihood = 0.0;
    double penalized = 0.0;  // log-likelihood minus penalty
    int outer_iterations = 0;
    bool converged = false;
    std::vector<double> trace;  // penalized log-likelihood after each accepted step

    Vector beta() const;
    SplitCoefficients split() const;
};

/// Maximizes log-likelihood - penalty under the per-block monotone split
/// constraints by safeguarded IRLS: each outer step solves the weighted
/// least-squares subproblem, then halves the step toward it until the
/// penalized log-likelihood does not drop.
LogisticFit fit_logistic_ordered(const Matrix& X, const Vector& y, const LogisticConfig& cfg,
                                 const LogisticFit* warm = nullptr);

}  // namespace olasso
