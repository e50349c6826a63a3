#pragma once

#include "olasso/solver.hpp"

namespace olasso::detail {

// Smooth part f(b) = 1/2 b'Gb - c'b + k of a least-squares problem, so every
// solver (plain, blockwise, IRLS subproblem) shares one inner loop.
struct QuadraticModel {
    Matrix gram;
    Vector linear;
    double constant = 0.0;

    double value(const Vector& beta) const {
        return 0.5 * beta.dot(gram * beta) - linear.dot(beta) + constant;
    }
};

QuadraticModel least_squares_model(const Matrix& X, const Vector& y);

// lam * sum(plus + minus) plus the finite-theta up-jump terms.
double split_penalty(const SplitCoefficients& coef, const FitConfig& cfg);

struct SplitResult {
    SplitCoefficients coef;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Runs the alternating prox-gradient loop to convergence from `start`.
SplitResult solve_split(const QuadraticModel& model, const FitConfig& cfg,
                        SplitCoefficients start, const char* where);

// One backtracked prox-gradient step on a single half. `sign` is +1 for the
// plus half and -1 for the minus half; `beta` is updated in place.
// Returns the accepted step size.
double split_half_step(const QuadraticModel& model, const FitConfig& cfg, Vector& half,
                       double sign, Vector& beta, double step);

}  // namespace olasso::detail
