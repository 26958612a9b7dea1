#include "fmrbench/regress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace fmrbench {

namespace {

constexpr double kRssFloorPerRow = 1e-12;

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

void finalize(LinearModel& m, const Matrix& x, const std::vector<double>& y) {
    m.effective_params = 1;
    for (double b : m.coefficients)
        if (std::abs(b) > 0.0) ++m.effective_params;
    const double r = rss(m, x, y);
    const std::size_t dof = std::max<std::size_t>(
        1, x.rows() > static_cast<std::size_t>(m.effective_params)
               ? x.rows() - static_cast<std::size_t>(m.effective_params)
               : 1);
    m.residual_std_error = std::sqrt(r / static_cast<double>(dof));
}

LinearModel fit_ols(const Matrix& x, const std::vector<double>& y) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    Matrix design(n, p + 1);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (std::size_t j = 0; j < p; ++j) design(i, j + 1) = x(i, j);
    }
    const std::vector<double> theta = solve_least_squares(design, y);
    LinearModel m;
    m.intercept = theta[0];
    m.coefficients.assign(theta.begin() + 1, theta.end());
    m.lambda = 0.0;
    return m;
}

LinearModel fit_lasso(const Matrix& x, const std::vector<double>& y, const FitConfig& cfg,
                      FitDiagnostics* diag) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> col_sq(p, 0.0);  // n^-1 sum x_ij^2
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x(i, j) * x(i, j);
        col_sq[j] = s * inv_n;
    }

    LinearModel m;
    m.lambda = cfg.lambda;
    m.coefficients.assign(p, 0.0);
    m.intercept = std::accumulate(y.begin(), y.end(), 0.0) * inv_n;

    std::vector<double> resid(n);  // y - b0 - X b
    for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - m.intercept;

    auto objective = [&]() {
        double q = 0.0;
        for (double r : resid) q += r * r;
        double l1 = 0.0;
        for (double b : m.coefficients) l1 += std::abs(b);
        return 0.5 * inv_n * q + cfg.lambda * l1;
    };

    m.converged = false;
    for (int sweep = 0; sweep < cfg.cd_max_iter; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (col_sq[j] <= 0.0) continue;  // constant-zero column stays out
            const double old = m.coefficients[j];
            double rho = 0.0;  // n^-1 x_j^T (resid + x_j * old)
            for (std::size_t i = 0; i < n; ++i) rho += x(i, j) * resid[i];
            rho = rho * inv_n + col_sq[j] * old;
            const double next = soft_threshold(rho, cfg.lambda) / col_sq[j];
            if (next != old) {
                const double delta = next - old;
                for (std::size_t i = 0; i < n; ++i) resid[i] -= delta * x(i, j);
                m.coefficients[j] = next;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        // unpenalized intercept: mean of the partial residual
        double mean_partial = 0.0;
        for (double r : resid) mean_partial += r;
        mean_partial = mean_partial * inv_n + m.intercept;
        const double di = mean_partial - m.intercept;
        if (di != 0.0) {
            for (double& r : resid) r -= di;
            m.intercept = mean_partial;
            max_change = std::max(max_change, std::abs(di));
        }
        if (diag) {
            diag->objective_trace.push_back(objective());
            diag->sweeps = sweep + 1;
        }
        if (max_change < cfg.cd_tol) {
            m.converged = true;
            break;
        }
    }
    return m;
}

}  // namespace

LinearModel fit(const Matrix& x, const std::vector<double>& y, const FitConfig& cfg,
                FitDiagnostics* diag) {
    if (x.rows() == 0) throw std::invalid_argument("fit: empty design");
    if (y.size() != x.rows()) throw std::invalid_argument("fit: row count mismatch");
    for (double v : y)
        if (std::isnan(v)) throw std::invalid_argument("fit: NaN in response");
    if (cfg.model_kind == ModelKind::ols && cfg.lambda != 0.0)
        throw std::invalid_argument("fit: OLS requires lambda == 0");
    if (cfg.lambda < 0.0) throw std::invalid_argument("fit: lambda must be >= 0");

    LinearModel m = cfg.model_kind == ModelKind::ols ? fit_ols(x, y) : fit_lasso(x, y, cfg, diag);
    finalize(m, x, y);
    return m;
}

std::vector<double> predict(const LinearModel& m, const Matrix& x) {
    if (x.cols() != m.coefficients.size())
        throw std::invalid_argument("predict: feature count mismatch");
    std::vector<double> yhat(x.rows(), m.intercept);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = m.intercept;
        for (std::size_t j = 0; j < x.cols(); ++j) s += x(i, j) * m.coefficients[j];
        yhat[i] = s;
    }
    return yhat;
}

double rss(const LinearModel& m, const Matrix& x, const std::vector<double>& y) {
    if (y.size() != x.rows()) throw std::invalid_argument("rss: row count mismatch");
    const std::vector<double> yhat = predict(m, x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = yhat[i] - y[i];
        s += d * d;
    }
    return s;
}

double aic_from_rss(double rss_value, std::size_t n, int effective_params) {
    if (n == 0) throw std::invalid_argument("aic: empty evaluation set");
    const double nd = static_cast<double>(n);
    const double floored = std::max(rss_value, nd * kRssFloorPerRow);
    return nd * std::log(floored / nd) + 2.0 * effective_params;
}

double aic_linear(const LinearModel& m, const Matrix& x, const std::vector<double>& y) {
    return aic_from_rss(rss(m, x, y), x.rows(), m.effective_params);
}

std::string linear_model_to_json(const LinearModel& m) {
    nlohmann::json j;
    j["intercept"] = m.intercept;
    j["coefficients"] = m.coefficients;
    j["feature_names"] = m.feature_names;
    j["lambda"] = m.lambda;
    j["residual_std_error"] = m.residual_std_error;
    j["effective_params"] = m.effective_params;
    return j.dump(2) + "\n";
}

LinearModel linear_model_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    LinearModel m;
    m.intercept = j.at("intercept").get<double>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.lambda = j.at("lambda").get<double>();
    m.residual_std_error = j.at("residual_std_error").get<double>();
    m.effective_params = j.at("effective_params").get<int>();
    return m;
}

}  // namespace fmrbench
