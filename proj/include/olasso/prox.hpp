#pragma once

#include "olasso/common.hpp"

#include <optional>

namespace olasso {

/// Argument of the proximal map of lam * sum(u) restricted to the cone
/// {u_1 >= ... >= u_n >= 0}.
struct ProxRequest {
    Vector point;
    double lam = 0.0;
    // Quadratic term becomes 1/2 sum w_i (u_i - point_i)^2 when present.
    std::optional<Vector> weights;
    // Finite theta swaps the hard order constraint for the up-jump penalty
    // theta * sum (u_{i+1} - u_i)_+ (already scaled by the step, like lam).
    std::optional<double> theta;
};

/// Isotonic (non-increasing) fit of point - lam / w, clipped at zero.
Vector prox_monotone_nonneg(const ProxRequest& req);

/// Unconstrained counterpart used by the plain lasso baseline:
/// argmin_u lam * sum(u) + 1/2 ||u - point||^2 subject to u >= 0.
Vector prox_nonneg_soft_threshold(const Vector& point, double lam);

}  // namespace olasso
