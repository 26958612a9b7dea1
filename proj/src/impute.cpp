#include "fmrbench/impute.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmrbench {

namespace {

bool observed_at(const std::vector<std::uint8_t>& observed, std::size_t i, std::size_t j,
                 std::size_t cols) {
    return observed.empty() || observed[i * cols + j] != 0;
}

// Rank kept when lambda_svd == 0: cut the spectrum at the largest relative
// gap, provided the gap is pronounced; otherwise keep everything.
std::size_t gap_rank(const std::vector<double>& sigma) {
    const double min_ratio = 2.0;
    std::size_t best = sigma.size();
    double best_ratio = min_ratio;
    for (std::size_t i = 0; i + 1 < sigma.size(); ++i) {
        if (sigma[i + 1] <= 0.0) {
            best = std::min(best, i + 1);
            break;
        }
        const double ratio = sigma[i] / sigma[i + 1];
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = i + 1;
        }
    }
    return std::max<std::size_t>(best, 1);
}

Matrix reconstruct(const Svd& dec, const std::vector<double>& sigma) {
    const std::size_t m = dec.u.rows();
    const std::size_t n = dec.v.rows();
    Matrix z(m, n, 0.0);
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (sigma[k] <= 0.0) continue;
        for (std::size_t i = 0; i < m; ++i) {
            const double uik = dec.u(i, k) * sigma[k];
            if (uik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) z(i, j) += uik * dec.v(j, k);
        }
    }
    return z;
}

}  // namespace

double soft_impute_objective(const Matrix& x, const std::vector<std::uint8_t>& observed,
                             const Matrix& z, double lambda_svd) {
    double fit = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            if (!observed_at(observed, i, j, x.cols())) continue;
            const double d = x(i, j) - z(i, j);
            fit += d * d;
        }
    double nuclear = 0.0;
    if (lambda_svd > 0.0) {
        const Svd dec = svd(z);
        for (double s : dec.sigma) nuclear += s;
    }
    return 0.5 * fit + lambda_svd * nuclear;
}

ImputeResult soft_impute(const Matrix& x, const std::vector<std::uint8_t>& observed,
                         const SoftImputeConfig& cfg) {
    if (cfg.lambda_svd < 0.0) throw std::invalid_argument("lambda_svd must be >= 0");
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();

    ImputeResult out;
    out.completed = x;
    if (observed.empty()) return out;
    if (observed.size() != n * p) throw std::invalid_argument("observed mask size mismatch");

    bool any_missing = false;
    for (std::size_t j = 0; j < p; ++j) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (observed[i * p + j]) {
                sum += x(i, j);
                ++count;
            } else {
                any_missing = true;
            }
        }
        if (count == 0) throw std::invalid_argument("column " + std::to_string(j) + " is all-missing");
        const double mean = sum / static_cast<double>(count);
        for (std::size_t i = 0; i < n; ++i)
            if (!observed[i * p + j]) out.completed(i, j) = mean;
    }
    if (!any_missing) {
        out.completed = x;
        return out;
    }

    std::size_t frozen_rank = 0;  // 0 = not yet chosen
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        out.iterations = iter;
        Svd dec = svd(out.completed);
        std::vector<double> sigma = dec.sigma;
        if (cfg.lambda_svd > 0.0) {
            for (double& s : sigma) s = std::max(s - cfg.lambda_svd, 0.0);
        } else {
            if (frozen_rank == 0) frozen_rank = gap_rank(sigma);
            for (std::size_t k = frozen_rank; k < sigma.size(); ++k) sigma[k] = 0.0;
        }
        const Matrix z = reconstruct(dec, sigma);

        double fit = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                if (!observed[i * p + j]) continue;
                const double d = x(i, j) - z(i, j);
                fit += d * d;
            }
        double nuclear = 0.0;
        for (double s : sigma) nuclear += s;
        out.objective_trace.push_back(0.5 * fit + cfg.lambda_svd * nuclear);

        double delta = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                const double prev = out.completed(i, j);
                const double next = observed[i * p + j] ? x(i, j) : z(i, j);
                delta += (next - prev) * (next - prev);
                norm += prev * prev;
                out.completed(i, j) = next;
            }
        const double rel = std::sqrt(delta) / std::max(std::sqrt(norm), 1e-300);
        if (rel < cfg.tol) {
            out.converged = true;
            return out;
        }
    }
    out.converged = false;
    return out;
}

}  // namespace fmrbench
