#pragma once

#include <string>
#include <vector>

#include "fmrbench/matrix.hpp"

namespace fmrbench {

enum class ModelKind { ols, lasso };

struct FitConfig {
    ModelKind model_kind = ModelKind::ols;
    double lambda = 0.0;  // must be 0 for OLS
    double cd_tol = 1e-10;
    int cd_max_iter = 10000;
};

struct LinearModel {
    double intercept = 0.0;
    std::vector<double> coefficients;
    std::vector<std::string> feature_names;  // optional; used by serialization
    int effective_params = 1;                // intercept + nonzero slopes
    double residual_std_error = 0.0;         // sqrt(RSS / max(1, n - effective_params))
    double lambda = 0.0;
    bool converged = true;  // false when coordinate descent hit cd_max_iter
};

struct FitDiagnostics {
    std::vector<double> objective_trace;  // per coordinate-descent sweep
    int sweeps = 0;
};

// OLS: minimum-norm least squares (SVD pseudoinverse, so rank-deficient and
// underdetermined designs still produce a model). LASSO: cyclic coordinate
// descent on (2n)^-1 ||y - b0 - X b||^2 + lambda ||b||_1 with unpenalized
// intercept.
LinearModel fit(const Matrix& x, const std::vector<double>& y, const FitConfig& cfg,
                FitDiagnostics* diag = nullptr);

std::vector<double> predict(const LinearModel& m, const Matrix& x);

double rss(const LinearModel& m, const Matrix& x, const std::vector<double>& y);

// n * ln(max(RSS, n * 1e-12) / n) + 2 * effective_params, evaluated on (x, y).
double aic_linear(const LinearModel& m, const Matrix& x, const std::vector<double>& y);
double aic_from_rss(double rss_value, std::size_t n, int effective_params);

std::string linear_model_to_json(const LinearModel& m);
LinearModel linear_model_from_json(const std::string& text);

}  // namespace fmrbench
