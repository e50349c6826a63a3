#pragma once

#include "olasso/common.hpp"

#include <limits>
#include <span>
#include <vector>

namespace olasso {

/// Values to be fitted plus positive per-point weights.
struct WeightedSequence {
    Vector values;
    Vector weights;

    static WeightedSequence unit(Vector values);
    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
    void validate() const;
};

/// Half-open index range [start, end) sharing one fitted value.
struct Plateau {
    std::size_t start = 0;
    std::size_t end = 0;
    double value = 0.0;
};

struct IsotonicFit {
    Vector fitted;
    std::vector<Plateau> plateaus;
};

struct NearIsoConfig {
    static constexpr double kExact = std::numeric_limits<double>::infinity();

    // Penalty on up-jumps. kExact (infinity) means the hard constraint.
    double theta = kExact;
};

/// Weighted least-squares fit under theta_1 >= theta_2 >= ... >= theta_n.
/// Pool-adjacent-violators on a block stack, linear time.
IsotonicFit pava_nonincreasing(const WeightedSequence& seq);

/// Minimizer of 1/2 sum w_i (y_i - t_i)^2 + theta * sum_i (t_{i+1} - t_i)_+.
///
/// Follows the solution path in theta from 0: adjacent groups fuse when their
/// values meet and never split again, and between fusion events every group
/// moves linearly. theta = 0 returns the input and theta = kExact defers to
/// pava_nonincreasing.
IsotonicFit near_iso(const WeightedSequence& seq, NearIsoConfig cfg);

/// Penalized objective minimized by near_iso (the hard-constraint objective
/// is the theta -> infinity limit on the feasible set).
double near_iso_objective(const WeightedSequence& seq, const Vector& fitted, double theta);

/// Groups consecutive values that agree within `rel_tol` (relative to the
/// larger magnitude, absolute below 1).
std::vector<Plateau> find_plateaus(std::span<const double> values, double rel_tol = 1e-8);

}  // namespace olasso
