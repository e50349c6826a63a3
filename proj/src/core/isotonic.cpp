#include "olasso/isotonic.hpp"

#include <algorithm>
#include <cmath>

namespace olasso {

WeightedSequence WeightedSequence::unit(Vector values) {
    WeightedSequence seq;
    seq.weights = Vector::Ones(values.size());
    seq.values = std::move(values);
    return seq;
}

void WeightedSequence::validate() const {
    require(values.size() > 0, ErrorCode::kInvalidArgument, "empty sequence");
    require(weights.size() == values.size(), ErrorCode::kDimensionMismatch,
            "weights and values differ in length");
    require((weights.array() > 0.0).all(), ErrorCode::kInvalidArgument,
            "weights must be positive");
    require(values.allFinite() && weights.allFinite(), ErrorCode::kInvalidArgument,
            "sequence contains non-finite entries");
}

namespace {

struct Block {
    std::size_t start;
    double weight;
    double weighted_sum;
    double value;
};

std::vector<Plateau> exact_plateaus(const Vector& fitted) {
    std::vector<Plateau> out;
    const auto n = static_cast<std::size_t>(fitted.size());
    std::size_t start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i == n || fitted[static_cast<Eigen::Index>(i)] != fitted[static_cast<Eigen::Index>(start)]) {
            out.push_back({start, i, fitted[static_cast<Eigen::Index>(start)]});
            start = i;
        }
    }
    return out;
}

}  // namespace

IsotonicFit pava_nonincreasing(const WeightedSequence& seq) {
    seq.validate();
    const auto n = seq.size();

    std::vector<Block> stack;
    stack.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        const double w = seq.weights[idx];
        stack.push_back({i, w, w * seq.values[idx], seq.values[idx]});
        // Pool while the previous block sits strictly below the newest one.
        while (stack.size() > 1 && stack[stack.size() - 2].value < stack.back().value) {
            const Block top = stack.back();
            stack.pop_back();
            Block& prev = stack.back();
            prev.weight += top.weight;
            prev.weighted_sum += top.weighted_sum;
            prev.value = prev.weighted_sum / prev.weight;
        }
    }

    IsotonicFit fit;
    fit.fitted.resize(static_cast<Eigen::Index>(n));
    for (std::size_t b = 0; b < stack.size(); ++b) {
        const std::size_t end = b + 1 < stack.size() ? stack[b + 1].start : n;
        for (std::size_t i = stack[b].start; i < end; ++i)
            fit.fitted[static_cast<Eigen::Index>(i)] = stack[b].value;
    }
    // Unpooled neighbours can carry identical means; report them as one plateau.
    fit.plateaus = exact_plateaus(fit.fitted);
    return fit;
}

namespace {

struct Group {
    std::size_t start;
    std::size_t end;
    double weight;
    double value;
    double slope = 0.0;
};

void update_slopes(std::vector<Group>& groups) {
    const std::size_t m = groups.size();
    for (std::size_t g = 0; g < m; ++g) {
        const double up_from_left = (g > 0 && groups[g].value > groups[g - 1].value) ? 1.0 : 0.0;
        const double up_to_right = (g + 1 < m && groups[g + 1].value > groups[g].value) ? 1.0 : 0.0;
        groups[g].slope = (up_to_right - up_from_left) / groups[g].weight;
    }
}

void fuse(std::vector<Group>& groups, std::size_t g) {
    Group& a = groups[g];
    const Group& b = groups[g + 1];
    a.value = (a.weight * a.value + b.weight * b.value) / (a.weight + b.weight);
    a.weight += b.weight;
    a.end = b.end;
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(g + 1));
}

}  // namespace

IsotonicFit near_iso(const WeightedSequence& seq, NearIsoConfig cfg) {
    require(!(cfg.theta < 0.0) && !std::isnan(cfg.theta), ErrorCode::kInvalidArgument,
            "near-isotonic theta must be nonnegative");
    if (std::isinf(cfg.theta)) return pava_nonincreasing(seq);
    seq.validate();

    const auto n = seq.size();
    std::vector<Group> groups;
    groups.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        const double y = seq.values[idx];
        const double w = seq.weights[idx];
        // Equal neighbours are fused from the start of the path.
        if (!groups.empty() && groups.back().value == y) {
            Group& last = groups.back();
            last.weight += w;
            last.end = i + 1;
        } else {
            groups.push_back({i, i + 1, w, y});
        }
    }

    double position = 0.0;
    while (groups.size() > 1) {
        update_slopes(groups);
        double next = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
            const double gap = groups[g + 1].value - groups[g].value;
            const double closing = groups[g + 1].slope - groups[g].slope;
            if (gap * closing < 0.0) next = std::min(next, position - gap / closing);
        }
        if (next >= cfg.theta) break;

        const double advance = next - position;
        for (auto& grp : groups) grp.value += grp.slope * advance;
        position = next;

        // Fuse every pair that meets at this event, including near-ties that
        // rounding kept apart.
        for (std::size_t g = 0; g + 1 < groups.size();) {
            const double scale = std::max({1.0, std::abs(groups[g].value), std::abs(groups[g + 1].value)});
            if (std::abs(groups[g + 1].value - groups[g].value) <= 1e-12 * scale) {
                fuse(groups, g);
            } else {
                ++g;
            }
        }
    }
    update_slopes(groups);
    for (auto& grp : groups) grp.value += grp.slope * (cfg.theta - position);

    IsotonicFit fit;
    fit.fitted.resize(static_cast<Eigen::Index>(n));
    for (const auto& grp : groups) {
        for (std::size_t i = grp.start; i < grp.end; ++i)
            fit.fitted[static_cast<Eigen::Index>(i)] = grp.value;
    }
    fit.plateaus = exact_plateaus(fit.fitted);
    return fit;
}

double near_iso_objective(const WeightedSequence& seq, const Vector& fitted, double theta) {
    require(fitted.size() == seq.values.size(), ErrorCode::kDimensionMismatch,
            "fitted length differs from sequence length");
    double loss = 0.5 * (seq.weights.array() * (seq.values - fitted).array().square()).sum();
    double jumps = 0.0;
    for (Eigen::Index i = 0; i + 1 < fitted.size(); ++i)
        jumps += std::max(0.0, fitted[i + 1] - fitted[i]);
    if (jumps == 0.0) return loss;
    return loss + theta * jumps;
}

std::vector<Plateau> find_plateaus(std::span<const double> values, double rel_tol) {
    std::vector<Plateau> out;
    const std::size_t n = values.size();
    std::size_t start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        bool same = false;
        if (i < n) {
            const double scale = std::max({1.0, std::abs(values[i]), std::abs(values[start])});
            same = std::abs(values[i] - values[start]) <= rel_tol * scale;
        }
        if (!same) {
            double sum = 0.0;
            for (std::size_t k = start; k < i; ++k) sum += values[k];
            if (i > start) out.push_back({start, i, sum / static_cast<double>(i - start)});
            start = i;
        }
    }
    return out;
}

}  // namespace olasso
