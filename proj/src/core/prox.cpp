#include "olasso/prox.hpp"

#include "olasso/isotonic.hpp"

#include <cmath>

namespace olasso {

Vector prox_monotone_nonneg(const ProxRequest& req) {
    require(req.lam >= 0.0 && std::isfinite(req.lam), ErrorCode::kInvalidArgument,
            "prox penalty must be finite and nonnegative");
    require(req.point.size() > 0, ErrorCode::kInvalidArgument, "empty sequence");

    WeightedSequence shifted;
    if (req.weights) {
        require(req.weights->size() == req.point.size(), ErrorCode::kDimensionMismatch,
                "prox weights differ in length from the point");
        shifted.weights = *req.weights;
        shifted.values = req.point.array() - req.lam / req.weights->array();
    } else {
        shifted.weights = Vector::Ones(req.point.size());
        shifted.values = req.point.array() - req.lam;
    }

    NearIsoConfig cfg;
    if (req.theta) cfg.theta = *req.theta;
    IsotonicFit iso = near_iso(shifted, cfg);
    return iso.fitted.cwiseMax(0.0);
}

Vector prox_nonneg_soft_threshold(const Vector& point, double lam) {
    require(lam >= 0.0 && std::isfinite(lam), ErrorCode::kInvalidArgument,
            "prox penalty must be finite and nonnegative");
    return (point.array() - lam).max(0.0).matrix();
}

}  // namespace olasso
