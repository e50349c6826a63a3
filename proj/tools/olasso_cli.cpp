// Command-line front end. Everything goes through the C API in olasso.h.

#include <olasso/olasso.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace {

struct Args {
    std::string input;
    std::string response;
    std::string output;
    std::string format = "json";
    std::string penalty = "ordered";
    std::string scheme = "contiguous";
    std::string method = "ordered";
    std::string design;
    std::size_t max_lag = 0;
    std::size_t first_lag = 1;
    std::size_t cv_folds = 2;
    std::size_t replicates = 0;
    olasso_options opts{};
};

struct Failure {
    std::string message;
    int status;
};

using DatasetPtr = std::unique_ptr<olasso_dataset, decltype(&olasso_dataset_free)>;
using ResultPtr = std::unique_ptr<olasso_result, decltype(&olasso_result_free)>;

void check(olasso_status s, const std::string& context) {
    if (s != OLASSO_OK) throw Failure{context + ": " + olasso_last_error(), static_cast<int>(s)};
}

DatasetPtr load(const Args& a, const std::string& context) {
    olasso_dataset* d = nullptr;
    check(olasso_dataset_from_csv(a.input.c_str(), a.response.c_str(), &d), context);
    return {d, &olasso_dataset_free};
}

void emit(const Args& a, const olasso_result* r) {
    const char* text = a.format == "csv" ? olasso_result_csv(r) : olasso_result_json(r);
    std::string body = text;
    if (body.empty() || body.back() != '\n') body += '\n';
    if (a.output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw Failure{"cannot write '" + a.output + "'", OLASSO_IO};
    out << body;
    if (!out) throw Failure{"write to '" + a.output + "' failed", OLASSO_IO};
}

template <class F>
void run_on_dataset(const Args& a, const std::string& name, F&& call) {
    DatasetPtr d = load(a, name);
    olasso_result* r = nullptr;
    check(call(d.get(), &r), name);
    ResultPtr owned(r, &olasso_result_free);
    emit(a, owned.get());
}

void run_fit_ar(const Args& a) {
    DatasetPtr d = load(a, "fit-ar");
    std::size_t n = 0;
    check(olasso_dataset_response(d.get(), nullptr, 0, &n), "fit-ar");
    std::vector<double> series(n);
    check(olasso_dataset_response(d.get(), series.data(), n, &n), "fit-ar");
    const int method = a.method == "ols-aic" ? OLASSO_AR_OLS_AIC
                       : a.method == "lasso" ? OLASSO_AR_LASSO
                                             : OLASSO_AR_ORDERED;
    olasso_result* r = nullptr;
    check(olasso_fit_ar(series.data(), n, a.max_lag, method, &a.opts, &r), "fit-ar");
    ResultPtr owned(r, &olasso_result_free);
    emit(a, owned.get());
}

void run_simulate(const Args& a) {
    static const std::map<std::string, std::size_t> default_replicates = {
        {"fig1", 1}, {"fig2", 20}, {"fig3", 30}, {"fig3-scrambled", 30}, {"table1", 100}, {"ozone", 1}, {"sunspot", 1}};
    const auto it = default_replicates.find(a.design);
    const std::size_t reps = a.replicates > 0 ? a.replicates : (it == default_replicates.end() ? 1 : it->second);
    olasso_result* r = nullptr;
    check(olasso_run_experiment(a.design.c_str(), a.input.empty() ? nullptr : a.input.c_str(), reps, a.opts.seed, &r),
          "simulate");
    ResultPtr owned(r, &olasso_result_free);
    emit(a, owned.get());
}

void add_output(CLI::App* c, Args& a) {
    c->add_option("-o,--output", a.output, "Output file (default: stdout)");
    c->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_data(CLI::App* c, Args& a) {
    c->add_option("-i,--input", a.input, "Input CSV with a header row")->required()->check(CLI::ExistingFile);
    c->add_option("-r,--response", a.response, "Response column, by name or 0-based index")->required();
}

void add_solver(CLI::App* c, Args& a) {
    c->add_option("--theta", a.opts.theta, "Near-isotonic relaxation (0 = exact monotone constraint)")
        ->check(CLI::NonNegativeNumber);
    c->add_option("--penalty", a.penalty, "Penalty on the split coefficients")
        ->check(CLI::IsMember({"ordered", "lasso"}))
        ->capture_default_str();
    c->add_option("--tol", a.opts.tol, "Relative objective change that stops the solver")->capture_default_str();
    c->add_option("--max-iter", a.opts.max_iter, "Iteration cap for the proximal-gradient solver")->capture_default_str();
    c->add_option("--shrink", a.opts.backtrack_shrink, "Backtracking step shrink factor")->capture_default_str();
    c->add_option("--block-tol", a.opts.block_tol, "Stopping tolerance for blockwise descent")->capture_default_str();
    c->add_option("--max-cycles", a.opts.max_cycles, "Cycle cap for blockwise descent")->capture_default_str();
}

void add_path(CLI::App* c, Args& a) {
    c->add_option("--n-lambdas", a.opts.n_lambdas, "Number of lambda values on the path")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--min-ratio", a.opts.min_ratio, "Smallest lambda as a fraction of the largest")
        ->capture_default_str();
}

void add_lambda(CLI::App* c, Args& a) {
    c->add_option("-l,--lambda", a.opts.lambda, "Penalty level")->required()->check(CLI::NonNegativeNumber);
}

void add_block_width(CLI::App* c, Args& a) {
    c->add_option("--block-width", a.opts.block_width, "Columns per ordered block (0 = one block)")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    Args a;
    olasso_options_default(&a.opts);

    CLI::App app{"Ordered lasso: l1 regression with non-increasing coefficient magnitudes"};
    app.set_version_flag("--version", std::string(olasso_version()));
    app.require_subcommand(1);

    auto* fit = app.add_subcommand("fit", "Fit at a single lambda");
    add_data(fit, a);
    add_lambda(fit, a);
    add_block_width(fit, a);
    add_solver(fit, a);
    add_output(fit, a);

    auto* lagged = app.add_subcommand("fit-lagged", "Fit on lagged copies of every predictor column");
    add_data(lagged, a);
    add_lambda(lagged, a);
    lagged->add_option("-k,--max-lag", a.max_lag, "Lags per predictor")->required()->check(CLI::PositiveNumber);
    lagged->add_option("--first-lag", a.first_lag, "Smallest lag (0 includes same-time values)")->capture_default_str();
    add_solver(lagged, a);
    add_output(lagged, a);

    auto* ar = app.add_subcommand("fit-ar", "Autoregressive fit with order selection");
    add_data(ar, a);
    ar->add_option("-k,--max-lag", a.max_lag, "Largest AR order considered")->required()->check(CLI::PositiveNumber);
    ar->add_option("--method", a.method, "Order selection method")
        ->check(CLI::IsMember({"ordered", "lasso", "ols-aic"}))
        ->capture_default_str();
    ar->add_option("--cv-folds", a.cv_folds, "Validation folds (first half trains, second half validates)")
        ->check(CLI::IsMember({std::size_t{2}}))
        ->capture_default_str();
    add_path(ar, a);
    add_solver(ar, a);
    add_output(ar, a);

    auto* logistic = app.add_subcommand("fit-logistic", "Penalized logistic regression on a 0/1 response");
    add_data(logistic, a);
    add_lambda(logistic, a);
    add_block_width(logistic, a);
    logistic->add_option("--prob-clip", a.opts.prob_clip, "Clamp fitted probabilities to [c, 1-c]")
        ->capture_default_str();
    add_solver(logistic, a);
    add_output(logistic, a);

    auto* cv = app.add_subcommand("cv", "Cross-validate lambda over a warm-started path");
    add_data(cv, a);
    cv->add_option("--folds", a.opts.folds, "Number of folds")->check(CLI::Range(2, 1000))->capture_default_str();
    cv->add_option("--scheme", a.scheme, "Fold assignment")
        ->check(CLI::IsMember({"contiguous", "random"}))
        ->capture_default_str();
    cv->add_option("--seed", a.opts.seed, "Seed for random folds")->capture_default_str();
    add_block_width(cv, a);
    add_path(cv, a);
    add_solver(cv, a);
    add_output(cv, a);

    auto* df = app.add_subcommand("df", "Degrees of freedom along the lambda path");
    add_data(df, a);
    add_block_width(df, a);
    add_path(df, a);
    add_solver(df, a);
    add_output(df, a);

    auto* sim = app.add_subcommand("simulate", "Run a simulation or data experiment");
    sim->add_option("--design", a.design, "Experiment")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig3-scrambled", "table1", "ozone", "sunspot"}));
    sim->add_option("--replicates", a.replicates, "Replicates (default depends on the design)");
    sim->add_option("--seed", a.opts.seed, "Base seed")->capture_default_str();
    sim->add_option("-i,--input", a.input, "Input CSV for the ozone and sunspot experiments")
        ->check(CLI::ExistingFile);
    add_output(sim, a);

    CLI11_PARSE(app, argc, argv);

    a.opts.penalty = a.penalty == "lasso" ? OLASSO_PENALTY_LASSO : OLASSO_PENALTY_ORDERED;
    a.opts.fold_scheme = a.scheme == "random" ? OLASSO_FOLDS_RANDOM : OLASSO_FOLDS_CONTIGUOUS;

    try {
        if (fit->parsed()) {
            run_on_dataset(a, "fit", [&](olasso_dataset* d, olasso_result** r) { return olasso_fit(d, &a.opts, r); });
        } else if (lagged->parsed()) {
            run_on_dataset(a, "fit-lagged", [&](olasso_dataset* d, olasso_result** r) {
                return olasso_fit_lagged(d, a.max_lag, a.first_lag, &a.opts, r);
            });
        } else if (ar->parsed()) {
            run_fit_ar(a);
        } else if (logistic->parsed()) {
            run_on_dataset(a, "fit-logistic",
                           [&](olasso_dataset* d, olasso_result** r) { return olasso_fit_logistic(d, &a.opts, r); });
        } else if (cv->parsed()) {
            run_on_dataset(a, "cv", [&](olasso_dataset* d, olasso_result** r) {
                return olasso_cross_validate(d, &a.opts, r);
            });
        } else if (df->parsed()) {
            run_on_dataset(a, "df", [&](olasso_dataset* d, olasso_result** r) { return olasso_df_path(d, &a.opts, r); });
        } else if (sim->parsed()) {
            run_simulate(a);
        }
    } catch (const Failure& f) {
        std::cerr << "olasso: " << f.message << '\n';
        return 1;
    }
    return 0;
}
