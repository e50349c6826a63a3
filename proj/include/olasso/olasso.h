/* C interface to the ordered lasso library. */
#ifndef OLASSO_OLASSO_H
#define OLASSO_OLASSO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OLASSO_API __declspec(dllexport)
#else
#define OLASSO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum olasso_status {
    OLASSO_OK = 0,
    OLASSO_INVALID_ARGUMENT = 1,
    OLASSO_DIMENSION_MISMATCH = 2,
    OLASSO_IO = 3,
    OLASSO_PARSE = 4,
    OLASSO_NOT_CENTERED = 5,
    OLASSO_INTERNAL = 6,
    OLASSO_NULL_POINTER = 7
} olasso_status;

#define OLASSO_SCHEMA_VERSION 1

typedef enum olasso_penalty { OLASSO_PENALTY_ORDERED = 0, OLASSO_PENALTY_LASSO = 1 } olasso_penalty;
typedef enum olasso_ar_method {
    OLASSO_AR_ORDERED = 0,
    OLASSO_AR_OLS_AIC = 1,
    OLASSO_AR_LASSO = 2
} olasso_ar_method;
typedef enum olasso_fold_scheme { OLASSO_FOLDS_CONTIGUOUS = 0, OLASSO_FOLDS_RANDOM = 1 } olasso_fold_scheme;

/* Opaque handles. */
typedef struct olasso_dataset olasso_dataset;
typedef struct olasso_result olasso_result;

typedef struct olasso_options {
    double lambda;
    double theta;            /* <= 0 or infinite: exact monotone constraint */
    int max_iter;
    double tol;
    double backtrack_shrink;
    int penalty;             /* olasso_penalty */
    size_t block_width;      /* 0: one block over all columns */
    double block_tol;
    int max_cycles;
    size_t n_lambdas;
    double min_ratio;
    size_t folds;
    int fold_scheme;         /* olasso_fold_scheme */
    uint64_t seed;
    double prob_clip;
} olasso_options;

OLASSO_API void olasso_options_default(olasso_options* opts);

/* Message for the last failure on the calling thread ("" if none). */
OLASSO_API const char* olasso_last_error(void);
OLASSO_API const char* olasso_version(void);

/* Row-major X (rows x cols) and y (rows). Data are copied. */
OLASSO_API olasso_status olasso_dataset_create(const double* x, size_t rows, size_t cols, const double* y,
                                               olasso_dataset** out);
/* Every column except `response` (name or 0-based index) becomes a predictor. */
OLASSO_API olasso_status olasso_dataset_from_csv(const char* path, const char* response, olasso_dataset** out);
OLASSO_API olasso_status olasso_dataset_shape(const olasso_dataset* data, size_t* rows, size_t* cols);
/* Copies the response column into out (up to cap values); *len gets the row count. */
OLASSO_API olasso_status olasso_dataset_response(const olasso_dataset* data, double* out, size_t cap, size_t* len);
OLASSO_API void olasso_dataset_free(olasso_dataset* data);

/* Penalized least squares at opts->lambda (blockwise when block_width > 0). */
OLASSO_API olasso_status olasso_fit(const olasso_dataset* data, const olasso_options* opts, olasso_result** out);
/* Rolling design from the predictor columns at lags first_lag .. first_lag + max_lag - 1, then olasso_fit
   with one block per predictor. */
OLASSO_API olasso_status olasso_fit_lagged(const olasso_dataset* series, size_t max_lag, size_t first_lag,
                                           const olasso_options* opts, olasso_result** out);
/* Autoregression on a univariate series. */
OLASSO_API olasso_status olasso_fit_ar(const double* series, size_t n, size_t max_lag, int method,
                                       const olasso_options* opts, olasso_result** out);
/* Penalized logistic regression; the response must be 0/1. */
OLASSO_API olasso_status olasso_fit_logistic(const olasso_dataset* data, const olasso_options* opts,
                                             olasso_result** out);
/* Cross-validated lambda over opts->n_lambdas values. */
OLASSO_API olasso_status olasso_cross_validate(const olasso_dataset* data, const olasso_options* opts,
                                               olasso_result** out);
/* Lambda path with plateau-count degrees of freedom per lambda. */
OLASSO_API olasso_status olasso_df_path(const olasso_dataset* data, const olasso_options* opts, olasso_result** out);
/* Named experiment: fig1, fig2, fig3, fig3-scrambled, table1 (simulated), or ozone, sunspot (read `input`). */
OLASSO_API olasso_status olasso_run_experiment(const char* name, const char* input, size_t replicates, uint64_t seed,
                                               olasso_result** out);

/* Result views stay valid until olasso_result_free. */
OLASSO_API const char* olasso_result_json(const olasso_result* result);
OLASSO_API const char* olasso_result_csv(const olasso_result* result);
/* Combined coefficients; *len receives the full length even when cap is smaller. */
OLASSO_API olasso_status olasso_result_coefficients(const olasso_result* result, double* out, size_t cap,
                                                    size_t* len);
OLASSO_API void olasso_result_free(olasso_result* result);

#ifdef __cplusplus
}
#endif

#endif
