#include "olasso/autoregress.hpp"

#include <cmath>
#include <limits>

namespace olasso {

const char* to_string(ArMethod m) {
    switch (m) {
        case ArMethod::kOrderedLasso: return "ordered-lasso";
        case ArMethod::kOlsAic: return "ols-aic";
        case ArMethod::kLasso: return "lasso";
    }
    return "unknown";
}

LagDesign build_autoregressive_design(std::span<const double> series, std::size_t max_lag) {
    const Vector y = Eigen::Map<const Vector>(series.data(), static_cast<Eigen::Index>(series.size()));
    LagSpec spec;
    spec.predictors = 1;
    spec.max_lag = max_lag;
    return build_rolling_design(Matrix(y), y, spec);
}

namespace {

void require_long_enough(std::span<const double> series, std::size_t max_lag) {
    require(max_lag >= 1, ErrorCode::kInvalidArgument, "maximum lag must be at least 1");
    require(series.size() > 2 * max_lag, ErrorCode::kInvalidArgument,
            "series too short: need more than twice the maximum lag");
}

double mean_squared(const Vector& v) { return v.squaredNorm() / static_cast<double>(v.size()); }

// Least squares with intercept on the first `order` columns. Returns false
// when the design is rank deficient.
bool ols_fit(const Matrix& Z, const Vector& y, std::size_t order, Vector& coef, double& intercept, double& rss) {
    const Eigen::Index m = Z.rows();
    const auto k = static_cast<Eigen::Index>(order);
    Matrix A(m, k + 1);
    A.col(0).setOnes();
    A.rightCols(k) = Z.leftCols(k);
    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    if (qr.rank() < k + 1) return false;
    const Vector sol = qr.solve(y);
    intercept = sol[0];
    coef = sol.tail(k);
    rss = (y - A * sol).squaredNorm();
    return true;
}

}  // namespace

ArFit fit_ar_ordered(std::span<const double> series, std::size_t max_lag, const ArConfig& cfg) {
    require_long_enough(series, max_lag);
    const LagDesign design = build_autoregressive_design(series, max_lag);
    const Eigen::Index m = design.Z.rows();
    const Eigen::Index half = m / 2;
    require(half >= 2 && m - half >= 2, ErrorCode::kInvalidArgument, "fold smaller than 2 rows");

    const Dataset train = center(make_dataset(design.Z.topRows(half), design.response.head(half)));
    const Matrix valid_X = design.Z.bottomRows(m - half);
    const Vector valid_y = design.response.tail(m - half);

    PathConfig pc;
    pc.n_lambdas = cfg.n_lambdas;
    pc.min_ratio = cfg.min_ratio;
    pc.fit = cfg.fit;
    const LambdaPath path = lambda_path(train, pc);

    ArFit out;
    out.method = cfg.fit.penalty == Penalty::kLasso ? ArMethod::kLasso : ArMethod::kOrderedLasso;
    out.lambdas = path.lambdas;
    out.validation_curve.reserve(path.fits.size());
    for (const BlockFit& fit : path.fits) {
        const Vector pred = (valid_X * fit.combined()).array() + fit.intercept;
        out.validation_curve.push_back(mean_squared(valid_y - pred));
    }
    const std::size_t best = argmin_first(out.validation_curve);
    const BlockFit& chosen = path.fits[best];
    out.coefficients = chosen.combined();
    out.intercept = chosen.intercept;
    out.lam = path.lambdas[best];
    out.validation_error = out.validation_curve[best];
    out.selected_order = effective_lags(chosen).front();
    return out;
}

ArFit fit_ar_ols_aic(std::span<const double> series, std::size_t max_lag) {
    require_long_enough(series, max_lag);
    const LagDesign design = build_autoregressive_design(series, max_lag);
    const Eigen::Index m = design.Z.rows();

    ArFit out;
    out.method = ArMethod::kOlsAic;
    out.aic.assign(max_lag + 1, std::numeric_limits<double>::quiet_NaN());
    double best_aic = std::numeric_limits<double>::infinity();
    std::size_t best_order = 0;
    bool any = false;
    for (std::size_t k = 0; k <= max_lag; ++k) {
        Vector coef;
        double intercept = 0.0, rss = 0.0;
        if (!ols_fit(design.Z, design.response, k, coef, intercept, rss)) {
            out.warnings.push_back("singular design at order " + std::to_string(k) + "; skipped");
            continue;
        }
        const double md = static_cast<double>(m);
        const double aic = md * std::log(rss / md) + 2.0 * static_cast<double>(k);
        out.aic[k] = aic;
        // An exact fit (RSS = 0) scores -inf and wins outright.
        if (!any || aic < best_aic) {
            any = true;
            best_aic = aic;
            best_order = k;
        }
    }
    require(any, ErrorCode::kInvalidArgument, "no AR order could be fitted");

    Vector coef;
    double intercept = 0.0, rss = 0.0;
    ols_fit(design.Z, design.response, best_order, coef, intercept, rss);
    out.coefficients = Vector::Zero(static_cast<Eigen::Index>(max_lag));
    out.coefficients.head(static_cast<Eigen::Index>(best_order)) = coef;
    out.intercept = intercept;
    out.selected_order = static_cast<int>(best_order);

    // Held-out error of the selected order: refit on the first half of the
    // rows, score on the second.
    const Eigen::Index half = m / 2;
    Vector train_coef;
    double train_icpt = 0.0, train_rss = 0.0;
    if (ols_fit(design.Z.topRows(half), design.response.head(half), best_order, train_coef, train_icpt, train_rss)) {
        const Vector pred = (design.Z.bottomRows(m - half).leftCols(static_cast<Eigen::Index>(best_order)) *
                             train_coef).array() + train_icpt;
        out.validation_error = mean_squared(design.response.tail(m - half) - pred);
    } else {
        out.validation_error = std::numeric_limits<double>::quiet_NaN();
        out.warnings.push_back("singular training design at the selected order");
    }
    return out;
}

std::vector<double> simulate_ar_series(std::span<const double> coef, double sigma, std::size_t length,
                                       std::size_t burn_in, Rng& rng) {
    const std::size_t total = length + burn_in;
    std::vector<double> y(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double v = sigma * rng.normal();
        for (std::size_t k = 1; k <= coef.size() && k <= t; ++k) v += coef[k - 1] * y[t - k];
        y[t] = v;
    }
    return {y.begin() + static_cast<std::ptrdiff_t>(burn_in), y.end()};
}

Table1Result simulate_table1(std::size_t n_sims, std::uint64_t seed, const Table1Design& design) {
    require(n_sims >= 1, ErrorCode::kInvalidArgument, "need at least one simulation");
    Table1Result out;
    out.n_sims = n_sims;
    out.design = design;
    out.aic_counts.assign(design.max_lag + 1, 0);
    out.ordered_counts.assign(design.max_lag + 1, 0);
    for (std::size_t s = 0; s < n_sims; ++s) {
        Rng rng = Rng::stream(seed, s);
        const std::vector<double> series =
            simulate_ar_series(design.coefficients, design.sigma, design.length, design.burn_in, rng);
        require(series.size() == design.length, ErrorCode::kInternal, "generated series has the wrong length");
        ++out.aic_counts[static_cast<std::size_t>(fit_ar_ols_aic(series, design.max_lag).selected_order)];
        ++out.ordered_counts[static_cast<std::size_t>(fit_ar_ordered(series, design.max_lag).selected_order)];
    }
    return out;
}

}  // namespace olasso
