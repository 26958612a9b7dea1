#pragma once

#include <cstdint>
#include <vector>

#include "fmrbench/matrix.hpp"

namespace fmrbench {

struct SoftImputeConfig {
    double lambda_svd = 0.0;
    double tol = 1e-8;
    int max_iter = 500;
};

struct ImputeResult {
    Matrix completed;
    int iterations = 0;
    bool converged = true;
    // Objective value at each iteration's low-rank reconstruction.
    std::vector<double> objective_trace;
};

// Iterative SVD completion: fill missing entries (column means to start),
// take the SVD, soft-threshold the singular values by lambda_svd,
// reconstruct, and repeat until the relative Frobenius change drops below
// tol. Observed entries are never altered. With lambda_svd == 0 the
// shrinkage step would be a no-op and the iteration could never move off the
// initial fill, so the spectrum is instead truncated at its largest relative
// gap (rank frozen after the first pass).
// `observed` is row-major n*p; empty means fully observed.
ImputeResult soft_impute(const Matrix& x, const std::vector<std::uint8_t>& observed,
                         const SoftImputeConfig& cfg = {});

// 0.5 * ||P_obs(x - z)||_F^2 + lambda * ||z||_*  (the quantity the iteration
// drives down; exposed for tests).
double soft_impute_objective(const Matrix& x, const std::vector<std::uint8_t>& observed,
                             const Matrix& z, double lambda_svd);

}  // namespace fmrbench
