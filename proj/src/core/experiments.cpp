#include "olasso/experiments.hpp"

#include <charconv>
#include <cmath>

namespace olasso {

namespace {

std::string number(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double coefficient_mse(const Vector& estimate, const Vector& truth) { return (estimate - truth).squaredNorm(); }

nlohmann::json summary_json(const MethodSummary& m) {
    return {{"mean_mse", m.mean}, {"std_error", m.std_error}, {"replicates", m.mse.size()}};
}

ValidationCurve validation_curve(const std::string& method, const Matrix& Z, const Vector& y, Eigen::Index train_rows,
                                 Penalty penalty, std::size_t block_width, std::size_t n_lambdas, double min_ratio,
                                 std::vector<BlockFit>* keep_best) {
    const Dataset train = center(make_dataset(Z.topRows(train_rows), y.head(train_rows)));
    const Matrix valid_X = Z.bottomRows(Z.rows() - train_rows);
    const Vector valid_y = y.tail(Z.rows() - train_rows);
    PathConfig pc;
    pc.n_lambdas = n_lambdas;
    pc.min_ratio = min_ratio;
    pc.fit.penalty = penalty;
    pc.block_width = block_width;
    const LambdaPath path = lambda_path(train, pc);

    ValidationCurve c;
    c.method = method;
    c.lambdas = path.lambdas;
    for (const BlockFit& fit : path.fits) {
        const Vector pred = (valid_X * fit.combined()).array() + fit.intercept;
        c.error.push_back((valid_y - pred).squaredNorm() / static_cast<double>(valid_y.size()));
        c.df.push_back(penalty == Penalty::kOrdered ? df_plateaus(fit).plateau_count : nonzero_count(fit));
    }
    c.best = argmin_first(c.error);
    if (keep_best) keep_best->push_back(path.fits[c.best]);
    return c;
}

void curve_rows(const std::string& experiment, const ValidationCurve& c, std::vector<ResultRow>& rows) {
    for (std::size_t l = 0; l < c.lambdas.size(); ++l) {
        rows.push_back({experiment, c.method, 0, c.lambdas[l], "validation_mse", c.error[l]});
        rows.push_back({experiment, c.method, 0, c.lambdas[l], "df", static_cast<double>(c.df[l])});
    }
}

nlohmann::json curve_json(const ValidationCurve& c) {
    return {{"min_validation_mse", c.min_error()}, {"df_at_min", c.df_at_min()}, {"best_lambda", c.lambdas[c.best]}};
}

MseComparison run_comparison(const std::string& name, const LaggedSimulation& design, std::size_t n_replicates,
                             std::uint64_t seed, bool scrambled, const SimulationOptions& opt) {
    require(n_replicates >= 1, ErrorCode::kInvalidArgument, "need at least one replicate");
    MseComparison out;
    out.ordered.method = "ordered-lasso";
    out.lasso.method = "lasso";
    out.table.experiment = name;
    const std::size_t K = design.max_lag();

    for (std::size_t r = 0; r < n_replicates; ++r) {
        Rng rng = Rng::stream(seed, r);
        const SimulatedSample sample = simulate_lagged(design, scrambled, rng);
        for (MethodSummary* m : {&out.ordered, &out.lasso}) {
            PathConfig pc;
            pc.n_lambdas = opt.n_lambdas;
            pc.min_ratio = opt.min_ratio;
            const bool ordered = m == &out.ordered;
            pc.fit.penalty = ordered ? Penalty::kOrdered : Penalty::kLasso;
            // The lasso is separable across blocks, so one block is the same fit.
            pc.block_width = ordered ? K : 0;
            const LambdaPath path = lambda_path(sample.data, pc);
            std::vector<double> mse;
            for (const BlockFit& fit : path.fits) mse.push_back(coefficient_mse(fit.combined(), sample.truth));
            const std::size_t best = argmin_first(mse);
            m->mse.push_back(mse[best]);
            m->best_lambda.push_back(path.lambdas[best]);
            BlockFit best_fit = path.fits[best];
            if (!ordered) {
                // Report lasso lags per predictor block as well.
                const SplitCoefficients s = best_fit.blocks.front();
                best_fit.blocks.clear();
                for (std::size_t j = 0; j < design.truth.size(); ++j) {
                    SplitCoefficients b = SplitCoefficients::zeros(static_cast<Eigen::Index>(K));
                    b.plus = s.plus.segment(static_cast<Eigen::Index>(j * K), static_cast<Eigen::Index>(K));
                    b.minus = s.minus.segment(static_cast<Eigen::Index>(j * K), static_cast<Eigen::Index>(K));
                    best_fit.blocks.push_back(b);
                }
            }
            m->effective_lags.push_back(effective_lags(best_fit));
            const int rep = static_cast<int>(r);
            out.table.rows.push_back({name, m->method, rep, path.lambdas[best], "best_mse", mse[best]});
            out.table.rows.push_back({name, m->method, rep, path.lambdas[best], "best_mse_per_coefficient",
                                      mse[best] / static_cast<double>(sample.truth.size())});
            for (std::size_t l = 0; l < mse.size(); ++l)
                out.table.rows.push_back({name, m->method, rep, path.lambdas[l], "mse", mse[l]});
        }
    }
    out.ordered.finish();
    out.lasso.finish();
    out.table.summary = {{"experiment", name},
                         {"seed", seed},
                         {"replicates", n_replicates},
                         {"scrambled", scrambled},
                         {"mse_normalization", "sum of squared coefficient errors over all K p coefficients"},
                         {"ordered_lasso", summary_json(out.ordered)},
                         {"lasso", summary_json(out.lasso)}};
    return out;
}

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "experiment,method,replicate,lambda,metric,value\n";
    for (const ResultRow& r : rows) {
        out += r.experiment + ',' + r.method + ',' + std::to_string(r.replicate) + ',' + number(r.lam) + ',' + r.metric +
               ',' + number(r.value) + '\n';
    }
    return out;
}

std::string ExperimentResult::csv() const { return rows_to_csv(rows); }

Vector LaggedSimulation::truth_vector() const {
    const auto K = static_cast<Eigen::Index>(max_lag());
    Vector v(K * static_cast<Eigen::Index>(truth.size()));
    for (std::size_t j = 0; j < truth.size(); ++j) v.segment(static_cast<Eigen::Index>(j) * K, K) = truth[j];
    return v;
}

Vector equally_spaced(double a, double b, std::size_t length) {
    require(length >= 1, ErrorCode::kInvalidArgument, "sequence length must be positive");
    if (length == 1) return Vector::Constant(1, a);
    return Vector::LinSpaced(static_cast<Eigen::Index>(length), a, b);
}

LaggedSimulation fig2_design() {
    LaggedSimulation d;
    d.truth = {(Vector(5) << 7, 5, 4, 2, 0).finished(), (Vector(5) << 5, 3, 0, 0, 0).finished(),
               (Vector(5) << 3, 0, 0, 0, 0).finished(), Vector::Zero(5)};
    d.n_time = 111;
    d.sigma = 7.0;
    return d;
}

LaggedSimulation fig3_design() {
    auto join = [](const Vector& a, const Vector& b) {
        Vector v(a.size() + b.size());
        v << a, b;
        return v;
    };
    LaggedSimulation d;
    d.truth = {equally_spaced(5, 1, 20), join(equally_spaced(5, 1, 10), Vector::Zero(10)),
               join(equally_spaced(5, 1, 5), Vector::Zero(15)), Vector::Zero(20)};
    d.n_time = 111;
    d.sigma = 7.0;
    return d;
}

SimulatedSample simulate_lagged(const LaggedSimulation& design, bool scrambled, Rng& rng) {
    const std::size_t p = design.truth.size();
    const std::size_t K = design.max_lag();
    require(p >= 1 && K >= 1 && design.n_time > K, ErrorCode::kInvalidArgument, "invalid lagged simulation design");
    for (const Vector& b : design.truth)
        require(static_cast<std::size_t>(b.size()) == K, ErrorCode::kDimensionMismatch, "truth blocks differ in length");

    Vector truth = design.truth_vector();
    if (scrambled) {
        std::vector<double> v(truth.data(), truth.data() + truth.size());
        rng.shuffle(v);
        truth = Eigen::Map<const Vector>(v.data(), truth.size());
    }
    const Matrix series = rng.normal_matrix(static_cast<Eigen::Index>(design.n_time), static_cast<Eigen::Index>(p));
    LagSpec spec;
    spec.predictors = p;
    spec.max_lag = K;
    LagDesign lagged = build_rolling_design(series, Vector::Zero(series.rows()), spec);
    const Vector y = lagged.Z * truth + rng.normal_vector(lagged.Z.rows(), design.sigma);
    require(lagged.Z.rows() == static_cast<Eigen::Index>(design.n_time - K) &&
                lagged.Z.cols() == static_cast<Eigen::Index>(K * p),
            ErrorCode::kInternal, "simulated design has the wrong shape");
    return {center(make_dataset(std::move(lagged.Z), y)), truth};
}

void MethodSummary::finish() {
    const auto n = static_cast<double>(mse.size());
    mean = 0.0;
    for (double v : mse) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : mse) ss += (v - mean) * (v - mean);
    std_error = mse.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
}

MseComparison run_fig2(std::size_t n_replicates, std::uint64_t seed, const SimulationOptions& opt) {
    return run_comparison("fig2", fig2_design(), n_replicates, seed, false, opt);
}

MseComparison run_fig3(std::size_t n_replicates, std::uint64_t seed, bool scrambled, const SimulationOptions& opt) {
    return run_comparison(scrambled ? "fig3-scrambled" : "fig3", fig3_design(), n_replicates, seed, scrambled, opt);
}

Fig1Result run_fig1(std::uint64_t seed, const SimulationOptions& opt) {
    constexpr Eigen::Index n = 30, p = 20;
    Fig1Result out;
    out.truth = Vector::Zero(p);
    for (Eigen::Index k = 0; k < 10; ++k) out.truth[k] = static_cast<double>(10 - k);
    Rng rng = Rng::stream(seed, 0);
    const Matrix X = rng.normal_matrix(n, p);
    const Vector y = X * out.truth + rng.normal_vector(n, 7.0);
    const Dataset data = center(make_dataset(X, y));

    PathConfig pc;
    pc.n_lambdas = opt.n_lambdas;
    pc.min_ratio = opt.min_ratio;
    out.ordered = lambda_path(data, pc);
    pc.fit.penalty = Penalty::kLasso;
    out.lasso = lambda_path(data, pc);

    out.table.experiment = "fig1";
    auto distances = [&](const LambdaPath& path, const char* method) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < path.fits.size(); ++l) {
            const double d = (path.fits[l].combined() - out.truth).norm();
            best = std::min(best, d);
            out.table.rows.push_back({"fig1", method, 0, path.lambdas[l], "l2_distance", d});
        }
        return best;
    };
    out.ordered_best_distance = distances(out.ordered, "ordered-lasso");
    out.lasso_best_distance = distances(out.lasso, "lasso");
    out.table.summary = {{"experiment", "fig1"},
                         {"seed", seed},
                         {"ordered_lasso", {{"best_l2_distance", out.ordered_best_distance}}},
                         {"lasso", {{"best_l2_distance", out.lasso_best_distance}}}};
    return out;
}

std::string Fig1Result::paths_csv() const {
    std::string out = "method,lambda";
    for (Eigen::Index k = 0; k < truth.size(); ++k) out += ",b" + std::to_string(k + 1);
    out += '\n';
    for (const auto& [method, path] : {std::pair{"ordered-lasso", &ordered}, std::pair{"lasso", &lasso}}) {
        for (std::size_t l = 0; l < path->fits.size(); ++l) {
            out += std::string(method) + ',' + number(path->lambdas[l]);
            const Vector b = path->fits[l].combined();
            for (Eigen::Index k = 0; k < b.size(); ++k) out += ',' + number(b[k]);
            out += '\n';
        }
    }
    return out;
}

OzoneResult run_ozone(const std::string& csv_path, const OzoneOptions& opt) {
    const Table table = read_csv(csv_path);
    const std::string schema = "expected a header row with a '" + opt.response +
                               "' column and numeric predictor columns, and more than " +
                               std::to_string(2 * opt.max_lag) + " data rows";
    std::size_t response_col = 0;
    try {
        response_col = table.column(opt.response);
    } catch (const Error& e) {
        throw Error(ErrorCode::kInvalidArgument, csv_path + ": " + e.what() + "; " + schema);
    }
    std::vector<std::size_t> skip{response_col};
    for (const std::string& name : opt.ignore)
        for (std::size_t j = 0; j < table.header.size(); ++j)
            if (table.header[j] == name) skip.push_back(j);
    require(opt.max_lag >= 1, ErrorCode::kInvalidArgument, "maximum lag must be at least 1");
    require(static_cast<std::size_t>(table.values.rows()) > 2 * opt.max_lag, ErrorCode::kInvalidArgument,
            csv_path + ": too few rows; " + schema);

    OzoneResult out;
    out.predictors = table.names_except(skip);
    out.max_lag = opt.max_lag;
    require(!out.predictors.empty(), ErrorCode::kInvalidArgument, csv_path + ": no predictor columns; " + schema);
    Matrix X = table.columns_except(skip);
    Vector y = table.values.col(static_cast<Eigen::Index>(response_col));
    require((y.array() > 0.0).all(), ErrorCode::kInvalidArgument, csv_path + ": response must be positive (it is logged)");
    y = y.array().log();

    const auto n = X.rows();
    const auto K = static_cast<Eigen::Index>(opt.max_lag);
    const Eigen::Index m = n - (K - 1);  // days with a full history
    const Eigen::Index half = m / 2;

    // Standardize with the days the training rows can see.
    const Eigen::Index seen = half + K - 1;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double mean = X.col(j).head(seen).mean();
        const double sd = std::sqrt((X.col(j).head(seen).array() - mean).square().sum() / static_cast<double>(seen - 1));
        require(sd > 0.0, ErrorCode::kInvalidArgument, csv_path + ": predictor '" + out.predictors[static_cast<std::size_t>(j)] +
                                                           "' is constant on the training days");
        X.col(j) = (X.col(j).array() - mean) / sd;
    }

    LagSpec lagged;
    lagged.predictors = static_cast<std::size_t>(X.cols());
    lagged.max_lag = opt.max_lag;
    lagged.first_lag = 0;
    const LagDesign full = build_rolling_design(X, y, lagged);
    LagSpec same_day = lagged;
    same_day.max_lag = 1;
    const LagDesign cross = build_rolling_design(X, y, same_day);
    require(full.Z.rows() == m, ErrorCode::kInternal, "lag design has the wrong row count");

    std::vector<BlockFit> best;
    out.cross_sectional = validation_curve("cross-sectional-lasso", cross.Z.bottomRows(m), cross.response.tail(m), half,
                                           Penalty::kLasso, 0, opt.n_lambdas, opt.min_ratio, nullptr);
    out.lagged_lasso = validation_curve("lasso", full.Z, full.response, half, Penalty::kLasso, 0, opt.n_lambdas,
                                        opt.min_ratio, &best);
    out.ordered = validation_curve("ordered-lasso", full.Z, full.response, half, Penalty::kOrdered, opt.max_lag,
                                   opt.n_lambdas, opt.min_ratio, &best);
    out.lasso_coefficients = best[0].combined();
    out.ordered_coefficients = best[1].combined();
    out.ordered_effective_lags = effective_lags(best[1]);

    out.table.experiment = "ozone";
    for (const ValidationCurve* c : {&out.cross_sectional, &out.lagged_lasso, &out.ordered})
        curve_rows("ozone", *c, out.table.rows);
    for (const auto& [method, coef, curve] :
         {std::tuple{"lasso", &out.lasso_coefficients, &out.lagged_lasso},
          std::tuple{"ordered-lasso", &out.ordered_coefficients, &out.ordered}}) {
        for (std::size_t j = 0; j < out.predictors.size(); ++j)
            for (Eigen::Index k = 0; k < K; ++k)
                out.table.rows.push_back({"ozone", method, 0, curve->lambdas[curve->best],
                                          "coef_" + out.predictors[j] + "_lag" + std::to_string(k),
                                          (*coef)[static_cast<Eigen::Index>(j) * K + k]});
    }
    nlohmann::json lags;
    for (std::size_t j = 0; j < out.predictors.size(); ++j) lags[out.predictors[j]] = out.ordered_effective_lags[j];
    out.table.summary = {{"experiment", "ozone"},
                         {"rows", m},
                         {"training_rows", half},
                         {"max_lag", opt.max_lag},
                         {"cross_sectional_lasso", curve_json(out.cross_sectional)},
                         {"lasso", curve_json(out.lagged_lasso)},
                         {"ordered_lasso", curve_json(out.ordered)},
                         {"ordered_lasso_last_nonzero_lag", lags}};
    return out;
}

SunspotResult run_sunspot(const std::string& csv_path, std::size_t max_lag, const std::string& column) {
    const Table table = read_csv(csv_path);
    const Vector v = table.column_values(column);
    const std::vector<double> series(v.data(), v.data() + v.size());

    SunspotResult out;
    out.aic = fit_ar_ols_aic(series, max_lag);
    out.ordered = fit_ar_ordered(series, max_lag);
    ArConfig lasso;
    lasso.fit.penalty = Penalty::kLasso;
    out.lasso = fit_ar_ordered(series, max_lag, lasso);

    out.table.experiment = "sunspot";
    nlohmann::json summary = {{"experiment", "sunspot"}, {"observations", series.size()}, {"max_lag", max_lag}};
    for (const ArFit* f : {&out.aic, &out.ordered, &out.lasso}) {
        const std::string method = to_string(f->method);
        const double lam = f->lam.value_or(std::numeric_limits<double>::quiet_NaN());
        out.table.rows.push_back({"sunspot", method, 0, lam, "selected_order", static_cast<double>(f->selected_order)});
        out.table.rows.push_back({"sunspot", method, 0, lam, "validation_mse", f->validation_error});
        for (Eigen::Index k = 0; k < f->coefficients.size(); ++k)
            out.table.rows.push_back({"sunspot", method, 0, lam, "coef_lag" + std::to_string(k + 1), f->coefficients[k]});
        summary[method] = {{"selected_order", f->selected_order}, {"validation_mse", f->validation_error}};
        if (f->lam) summary[method]["lambda"] = *f->lam;
    }
    out.table.summary = summary;
    return out;
}

ExperimentResult table1_table(const Table1Result& r, std::uint64_t seed) {
    ExperimentResult out;
    out.experiment = "table1";
    for (const auto& [method, counts] :
         {std::pair{"ols-aic", &r.aic_counts}, std::pair{"ordered-lasso", &r.ordered_counts}}) {
        for (std::size_t k = 0; k < counts->size(); ++k)
            out.rows.push_back({"table1", method, 0, std::numeric_limits<double>::quiet_NaN(),
                                "count_order_" + std::to_string(k), static_cast<double>((*counts)[k])});
    }
    out.summary = {{"experiment", "table1"},
                   {"seed", seed},
                   {"simulations", r.n_sims},
                   {"coefficients", r.design.coefficients},
                   {"sigma", r.design.sigma},
                   {"length", r.design.length},
                   {"burn_in", r.design.burn_in},
                   {"max_lag", r.design.max_lag},
                   {"ols_aic_counts", r.aic_counts},
                   {"ordered_lasso_counts", r.ordered_counts}};
    return out;
}

ExperimentResult run_table1(std::size_t n_sims, std::uint64_t seed) {
    return table1_table(simulate_table1(n_sims, seed), seed);
}

}  // namespace olasso
