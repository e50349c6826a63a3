#include "olasso/olasso.h"

#include "olasso/experiments.hpp"
#include "olasso/glm.hpp"
#include "olasso/io.hpp"

#include <charconv>
#include <cmath>
#include <new>
#include <string>

using nlohmann::json;

struct olasso_dataset {
    olasso::Matrix X;
    olasso::Vector y;
    std::vector<std::string> predictors;
    std::string response;
};

struct olasso_result {
    std::string json;
    std::string csv;
    olasso::Vector coefficients;
};

namespace {

thread_local std::string last_error;

olasso_status to_status(olasso::ErrorCode code) {
    switch (code) {
        case olasso::ErrorCode::kInvalidArgument: return OLASSO_INVALID_ARGUMENT;
        case olasso::ErrorCode::kDimensionMismatch: return OLASSO_DIMENSION_MISMATCH;
        case olasso::ErrorCode::kIo: return OLASSO_IO;
        case olasso::ErrorCode::kParse: return OLASSO_PARSE;
        case olasso::ErrorCode::kNotCentered: return OLASSO_NOT_CENTERED;
        case olasso::ErrorCode::kInternal: return OLASSO_INTERNAL;
    }
    return OLASSO_INTERNAL;
}

template <class F>
olasso_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return OLASSO_OK;
    } catch (const olasso::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown error";
    }
    return OLASSO_INTERNAL;
}

void need(const void* p, const char* what) {
    if (!p) throw olasso::Error(olasso::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

olasso::FitConfig fit_config(const olasso_options& o) {
    olasso::FitConfig c;
    c.lam = o.lambda;
    c.max_iter = o.max_iter;
    c.tol = o.tol;
    c.backtrack_shrink = o.backtrack_shrink;
    olasso::require(o.penalty == OLASSO_PENALTY_ORDERED || o.penalty == OLASSO_PENALTY_LASSO,
                    olasso::ErrorCode::kInvalidArgument, "unknown penalty");
    c.penalty = o.penalty == OLASSO_PENALTY_LASSO ? olasso::Penalty::kLasso : olasso::Penalty::kOrdered;
    if (o.theta > 0.0 && std::isfinite(o.theta)) c.theta = o.theta;
    c.validate();
    return c;
}

olasso::BlockConfig block_config(const olasso_options& o) {
    olasso::BlockConfig b;
    b.tol = o.block_tol;
    b.max_cycles = o.max_cycles;
    return b;
}

olasso::PathConfig path_config(const olasso_options& o) {
    olasso::PathConfig p;
    p.n_lambdas = o.n_lambdas;
    p.min_ratio = o.min_ratio;
    p.fit = fit_config(o);
    p.block_width = o.block_width;
    p.block = block_config(o);
    return p;
}

std::vector<double> as_std(const olasso::Vector& v) { return {v.data(), v.data() + v.size()}; }

const char* penalty_name(const olasso::FitConfig& c) {
    return c.penalty == olasso::Penalty::kLasso ? "lasso" : "ordered";
}

std::string number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

json fit_json(const olasso::BlockFit& fit, const olasso::FitConfig& cfg, int iterations) {
    const olasso::SplitCoefficients s = fit.split();
    bool monotone = true;
    for (const auto& b : fit.blocks) monotone = monotone && olasso::magnitudes_monotone(b.combined());
    json j = {{"schema_version", OLASSO_SCHEMA_VERSION},
              {"kind", "fit"},
              {"penalty", penalty_name(cfg)},
              {"lambda", fit.lam},
              {"intercept", fit.intercept},
              {"objective", fit.objective},
              {"coefficients", {{"beta", as_std(fit.combined())}, {"plus", as_std(s.plus)}, {"minus", as_std(s.minus)}}},
              {"block_width", fit.block_width()},
              {"df", olasso::df_plateaus(fit).plateau_count},
              {"nonzero", olasso::nonzero_count(fit)},
              {"iterations", iterations},
              {"cycles", fit.cycles},
              {"converged", fit.converged},
              {"monotone_magnitudes", monotone},
              {"effective_lags", olasso::effective_lags(fit)}};
    if (cfg.theta) j["theta"] = *cfg.theta;
    return j;
}

std::string fit_csv(const olasso::BlockFit& fit) {
    std::string out = "index,block,position,plus,minus,beta\n";
    const olasso::SplitCoefficients s = fit.split();
    const auto K = static_cast<Eigen::Index>(fit.block_width());
    for (Eigen::Index i = 0; i < s.plus.size(); ++i) {
        out += std::to_string(i + 1) + ',' + std::to_string(i / K + 1) + ',' + std::to_string(i % K + 1) + ',' +
               number(s.plus[i]) + ',' + number(s.minus[i]) + ',' + number(s.plus[i] - s.minus[i]) + '\n';
    }
    return out;
}

olasso_result* make_result(json j, std::string csv, olasso::Vector coef) {
    auto* r = new olasso_result;
    r->json = j.dump(2);
    r->csv = std::move(csv);
    r->coefficients = std::move(coef);
    return r;
}

olasso_result* fit_result(const olasso::Dataset& data, const olasso_options& o, json extra = json::object()) {
    const olasso::FitConfig cfg = fit_config(o);
    olasso::BlockFit fit;
    int iterations = 0;
    if (o.block_width == 0 || o.block_width == static_cast<std::size_t>(data.cols())) {
        const olasso::OrderedLassoFit single = olasso::fit_ordered_lasso(data, cfg);
        fit = olasso::as_block_fit(single);
        iterations = single.iterations;
    } else {
        fit = olasso::fit_static(data, o.block_width, cfg, nullptr, block_config(o));
    }
    json j = fit_json(fit, cfg, iterations);
    j.update(extra);
    return make_result(std::move(j), fit_csv(fit), fit.combined());
}

const olasso_options& options_or_default(const olasso_options* opts, olasso_options& storage) {
    if (opts) return *opts;
    olasso_options_default(&storage);
    return storage;
}

}  // namespace

extern "C" {

void olasso_options_default(olasso_options* opts) {
    if (!opts) return;
    const olasso::FitConfig f;
    const olasso::BlockConfig b;
    const olasso::PathConfig p;
    const olasso::CvConfig cv;
    const olasso::LogisticConfig lg;
    opts->lambda = f.lam;
    opts->theta = 0.0;
    opts->max_iter = f.max_iter;
    opts->tol = f.tol;
    opts->backtrack_shrink = f.backtrack_shrink;
    opts->penalty = OLASSO_PENALTY_ORDERED;
    opts->block_width = 0;
    opts->block_tol = b.tol;
    opts->max_cycles = b.max_cycles;
    opts->n_lambdas = p.n_lambdas;
    opts->min_ratio = p.min_ratio;
    opts->folds = cv.folds;
    opts->fold_scheme = OLASSO_FOLDS_CONTIGUOUS;
    opts->seed = cv.seed;
    opts->prob_clip = lg.prob_clip;
}

const char* olasso_last_error(void) { return last_error.c_str(); }

const char* olasso_version(void) { return "1.0.0"; }

olasso_status olasso_dataset_create(const double* x, size_t rows, size_t cols, const double* y, olasso_dataset** out) {
    return guarded([&] {
        need(out, "output handle");
        need(x, "x");
        need(y, "y");
        olasso::require(rows >= 1 && cols >= 1, olasso::ErrorCode::kInvalidArgument, "empty data");
        auto* d = new olasso_dataset;
        d->X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            x, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        d->y = Eigen::Map<const olasso::Vector>(y, static_cast<Eigen::Index>(rows));
        for (size_t j = 0; j < cols; ++j) d->predictors.push_back("x" + std::to_string(j + 1));
        d->response = "y";
        *out = d;
    });
}

olasso_status olasso_dataset_from_csv(const char* path, const char* response, olasso_dataset** out) {
    return guarded([&] {
        need(out, "output handle");
        need(path, "path");
        need(response, "response");
        const olasso::Table t = olasso::read_csv(path);
        const std::size_t rc = t.column(response);
        olasso::require(t.values.rows() >= 1, olasso::ErrorCode::kParse, std::string(path) + ": no data rows");
        auto* d = new olasso_dataset;
        d->X = t.columns_except({rc});
        d->y = t.values.col(static_cast<Eigen::Index>(rc));
        d->predictors = t.names_except({rc});
        d->response = t.header[rc];
        *out = d;
    });
}

olasso_status olasso_dataset_shape(const olasso_dataset* data, size_t* rows, size_t* cols) {
    if (!data || !rows || !cols) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    *rows = static_cast<size_t>(data->X.rows());
    *cols = static_cast<size_t>(data->X.cols());
    return OLASSO_OK;
}

olasso_status olasso_dataset_response(const olasso_dataset* data, double* out, size_t cap, size_t* len) {
    if (!data || !len || (cap > 0 && !out)) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    const auto n = static_cast<size_t>(data->y.size());
    *len = n;
    for (size_t i = 0; i < n && i < cap; ++i) out[i] = data->y[static_cast<Eigen::Index>(i)];
    return OLASSO_OK;
}

void olasso_dataset_free(olasso_dataset* data) { delete data; }

olasso_status olasso_fit(const olasso_dataset* data, const olasso_options* opts, olasso_result** out) {
    if (!data || !out) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    return guarded([&] {
        olasso_options storage;
        const olasso_options& o = options_or_default(opts, storage);
        const olasso::Dataset d = olasso::center(olasso::make_dataset(data->X, data->y));
        *out = fit_result(d, o, {{"predictors", data->predictors}, {"response", data->response}});
    });
}

olasso_status olasso_fit_lagged(const olasso_dataset* series, size_t max_lag, size_t first_lag,
                                const olasso_options* opts, olasso_result** out) {
    if (!series || !out) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    return guarded([&] {
        olasso_options storage;
        olasso_options o = options_or_default(opts, storage);
        olasso::LagSpec spec;
        spec.predictors = static_cast<std::size_t>(series->X.cols());
        spec.max_lag = max_lag;
        spec.first_lag = first_lag;
        const olasso::LagDesign design = olasso::build_rolling_design(series->X, series->y, spec);
        const olasso::Dataset d = olasso::center(olasso::make_dataset(design.Z, design.response));
        o.block_width = max_lag;
        json extra = {{"kind", "fit-lagged"},
                      {"max_lag", max_lag},
                      {"first_lag", first_lag},
                      {"rows_used", design.Z.rows()},
                      {"dropped_rows", design.dropped_rows},
                      {"predictors", series->predictors},
                      {"response", series->response}};
        *out = fit_result(d, o, extra);
    });
}

olasso_status olasso_fit_ar(const double* series, size_t n, size_t max_lag, int method, const olasso_options* opts,
                            olasso_result** out) {
    if (!series || !out) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    return guarded([&] {
        olasso_options storage;
        const olasso_options& o = options_or_default(opts, storage);
        const std::span<const double> s(series, n);
        olasso::ArFit fit;
        olasso::ArConfig cfg;
        cfg.fit = fit_config(o);
        cfg.n_lambdas = o.n_lambdas;
        cfg.min_ratio = o.min_ratio;
        switch (method) {
            case OLASSO_AR_ORDERED:
                cfg.fit.penalty = olasso::Penalty::kOrdered;
                fit = olasso::fit_ar_ordered(s, max_lag, cfg);
                break;
            case OLASSO_AR_LASSO:
                cfg.fit.penalty = olasso::Penalty::kLasso;
                fit = olasso::fit_ar_ordered(s, max_lag, cfg);
                break;
            case OLASSO_AR_OLS_AIC: fit = olasso::fit_ar_ols_aic(s, max_lag); break;
            default: throw olasso::Error(olasso::ErrorCode::kInvalidArgument, "unknown AR method");
        }
        json j = {{"schema_version", OLASSO_SCHEMA_VERSION},
                  {"kind", "ar"},
                  {"method", olasso::to_string(fit.method)},
                  {"max_lag", max_lag},
                  {"selected_order", fit.selected_order},
                  {"coefficients", as_std(fit.coefficients)},
                  {"intercept", fit.intercept},
                  {"validation_error", fit.validation_error},
                  {"warnings", fit.warnings}};
        if (fit.lam) j["lambda"] = *fit.lam;
        if (!fit.aic.empty()) {
            json aic = json::array();
            for (double a : fit.aic) aic.push_back(std::isnan(a) ? json(nullptr) : json(a));
            j["aic"] = aic;
        }
        std::string csv = "lag,coefficient\n";
        for (Eigen::Index k = 0; k < fit.coefficients.size(); ++k)
            csv += std::to_string(k + 1) + ',' + number(fit.coefficients[k]) + '\n';
        *out = make_result(std::move(j), std::move(csv), fit.coefficients);
    });
}

olasso_status olasso_fit_logistic(const olasso_dataset* data, const olasso_options* opts, olasso_result** out) {
    if (!data || !out) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    return guarded([&] {
        olasso_options storage;
        const olasso_options& o = options_or_default(opts, storage);
        olasso::LogisticConfig cfg;
        cfg.fit = fit_config(o);
        cfg.prob_clip = o.prob_clip;
        cfg.block_width = o.block_width;
        cfg.block = block_config(o);
        const olasso::LogisticFit fit = olasso::fit_logistic_ordered(data->X, data->y, cfg);
        const olasso::SplitCoefficients s = fit.split();
        json j = {{"schema_version", OLASSO_SCHEMA_VERSION},
                  {"kind", "logistic"},
                  {"penalty", penalty_name(cfg.fit)},
                  {"lambda", fit.lam},
                  {"intercept", fit.intercept},
                  {"log_likelihood", fit.log_likelihood},
                  {"penalized_log_likelihood", fit.penalized},
                  {"coefficients", {{"beta", as_std(fit.beta())}, {"plus", as_std(s.plus)}, {"minus", as_std(s.minus)}}},
                  {"outer_iterations", fit.outer_iterations},
                  {"converged", fit.converged},
                  {"trace", fit.trace},
                  {"predictors", data->predictors},
                  {"response", data->response}};
        std::string csv = "index,plus,minus,beta\n";
        for (Eigen::Index i = 0; i < s.plus.size(); ++i)
            csv += std::to_string(i + 1) + ',' + number(s.plus[i]) + ',' + number(s.minus[i]) + ',' +
                   number(s.plus[i] - s.minus[i]) + '\n';
        *out = make_result(std::move(j), std::move(csv), fit.beta());
    });
}

olasso_status olasso_cross_validate(const olasso_dataset* data, const olasso_options* opts, olasso_result** out) {
    if (!data || !out) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    return guarded([&] {
        olasso_options storage;
        olasso_options o = options_or_default(opts, storage);
        olasso::CvConfig cfg;
        cfg.folds = o.folds;
        olasso::require(o.fold_scheme == OLASSO_FOLDS_CONTIGUOUS || o.fold_scheme == OLASSO_FOLDS_RANDOM,
                        olasso::ErrorCode::kInvalidArgument, "unknown fold scheme");
        cfg.scheme = o.fold_scheme == OLASSO_FOLDS_RANDOM ? olasso::FoldScheme::kRandom : olasso::FoldScheme::kContiguous;
        cfg.seed = o.seed;
        cfg.path = path_config(o);
        const olasso::Dataset d = olasso::make_dataset(data->X, data->y);
        const olasso::CvResult cv = olasso::cross_validate(d, cfg);

        o.lambda = cv.best_lambda;
        olasso_result* refit = fit_result(olasso::center(d), o);
        json j = {{"schema_version", OLASSO_SCHEMA_VERSION},
                  {"kind", "cv"},
                  {"folds", cfg.folds},
                  {"fold_scheme", o.fold_scheme == OLASSO_FOLDS_RANDOM ? "random" : "contiguous"},
                  {"seed", cfg.seed},
                  {"lambdas", cv.lambdas},
                  {"mean_error", cv.mean_error},
                  {"std_error", cv.std_error},
                  {"best_index", cv.best_index},
                  {"best_lambda", cv.best_lambda},
                  {"fit", json::parse(refit->json)}};
        olasso::Vector coef = refit->coefficients;
        delete refit;
        std::string csv = "lambda,mean_error,std_error\n";
        for (std::size_t l = 0; l < cv.lambdas.size(); ++l)
            csv += number(cv.lambdas[l]) + ',' + number(cv.mean_error[l]) + ',' + number(cv.std_error[l]) + '\n';
        *out = make_result(std::move(j), std::move(csv), std::move(coef));
    });
}

olasso_status olasso_df_path(const olasso_dataset* data, const olasso_options* opts, olasso_result** out) {
    if (!data || !out) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    return guarded([&] {
        olasso_options storage;
        const olasso_options& o = options_or_default(opts, storage);
        const olasso::Dataset d = olasso::center(olasso::make_dataset(data->X, data->y));
        const olasso::LambdaPath path = olasso::lambda_path(d, path_config(o));
        std::vector<int> df, nonzero;
        std::vector<double> objective;
        std::string csv = "lambda,df,nonzero,objective\n";
        for (std::size_t l = 0; l < path.fits.size(); ++l) {
            df.push_back(olasso::df_plateaus(path.fits[l]).plateau_count);
            nonzero.push_back(olasso::nonzero_count(path.fits[l]));
            objective.push_back(path.fits[l].objective);
            csv += number(path.lambdas[l]) + ',' + std::to_string(df.back()) + ',' + std::to_string(nonzero.back()) +
                   ',' + number(objective.back()) + '\n';
        }
        json j = {{"schema_version", OLASSO_SCHEMA_VERSION},
                  {"kind", "df_path"},
                  {"lambdas", path.lambdas},
                  {"df", df},
                  {"nonzero", nonzero},
                  {"objective", objective},
                  {"top_is_empty", path.top_is_empty}};
        *out = make_result(std::move(j), std::move(csv), path.fits.back().combined());
    });
}

olasso_status olasso_run_experiment(const char* name, const char* input, size_t replicates, uint64_t seed,
                                    olasso_result** out) {
    if (!name || !out) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    return guarded([&] {
        const std::string n = name;
        auto needs_input = [&] {
            olasso::require(input && *input, olasso::ErrorCode::kInvalidArgument, "experiment '" + n + "' needs an input file");
            return std::string(input);
        };
        olasso::ExperimentResult r;
        olasso::Vector coef;
        if (n == "fig1") {
            const olasso::Fig1Result f = olasso::run_fig1(seed);
            r = f.table;
            r.summary["paths_csv"] = f.paths_csv();
        } else if (n == "fig2") {
            r = olasso::run_fig2(replicates, seed).table;
        } else if (n == "fig3" || n == "fig3-scrambled") {
            r = olasso::run_fig3(replicates, seed, n == "fig3-scrambled").table;
        } else if (n == "table1") {
            r = olasso::run_table1(replicates, seed);
        } else if (n == "ozone") {
            const olasso::OzoneResult o = olasso::run_ozone(needs_input());
            r = o.table;
            coef = o.ordered_coefficients;
        } else if (n == "sunspot") {
            const olasso::SunspotResult s = olasso::run_sunspot(needs_input());
            r = s.table;
            coef = s.ordered.coefficients;
        } else {
            throw olasso::Error(olasso::ErrorCode::kInvalidArgument,
                                "unknown experiment '" + n + "' (fig1, fig2, fig3, fig3-scrambled, table1, ozone, sunspot)");
        }
        json j = r.summary;
        j["schema_version"] = OLASSO_SCHEMA_VERSION;
        j["kind"] = "experiment";
        *out = make_result(std::move(j), r.csv(), std::move(coef));
    });
}

const char* olasso_result_json(const olasso_result* result) { return result ? result->json.c_str() : ""; }

const char* olasso_result_csv(const olasso_result* result) { return result ? result->csv.c_str() : ""; }

olasso_status olasso_result_coefficients(const olasso_result* result, double* out, size_t cap, size_t* len) {
    if (!result || !len || (cap > 0 && !out)) {
        last_error = "null argument";
        return OLASSO_NULL_POINTER;
    }
    const auto n = static_cast<size_t>(result->coefficients.size());
    *len = n;
    for (size_t i = 0; i < n && i < cap; ++i) out[i] = result->coefficients[static_cast<Eigen::Index>(i)];
    return OLASSO_OK;
}

void olasso_result_free(olasso_result* result) { delete result; }

}  // extern "C"
