#pragma once

#include <cstddef>
#include <vector>

namespace fmrbench {

// Dense row-major matrix of doubles. Small helper sized for desk-scale
// problems (thousands of rows, tens of columns).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::vector<double> column(std::size_t j) const;
    std::vector<double> row(std::size_t i) const;

    // Rows of this matrix restricted to `rows` (order preserved).
    Matrix take_rows(const std::vector<std::size_t>& rows) const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix transpose(const Matrix& a);

// y = a * x
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

double frobenius_norm(const Matrix& a);

// Thin SVD a = u * diag(sigma) * v^T with u: m x k, v: n x k, k = min(m, n),
// sigma sorted descending. Computed by one-sided Jacobi rotations; exact to
// machine precision for the matrix sizes this project handles.
struct Svd {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
};

Svd svd(const Matrix& a);

// Minimum-norm least-squares solution of a * x = b via the SVD pseudoinverse.
// Singular values below max(m, n) * eps * sigma_max are treated as zero.
std::vector<double> solve_least_squares(const Matrix& a, const std::vector<double>& b);

}  // namespace fmrbench
