#pragma once

// Small dense linear algebra for d <= 64: SPD factorization, an incremental
// ridge-regression state with a maintained inverse, and V-norms.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace synbandit {

using Vector = std::vector<double>;

// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n, double scale = 1.0);
    static Matrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transpose() const;
    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Lower-triangular L with A = L L^T. Throws NotPositiveDefinite when a pivot
// falls to 1e-12 or below.
Matrix cholesky(const Matrix& a);

// Inverse of an SPD matrix through its Cholesky factor.
Matrix spd_inverse(const Matrix& a);

// Solves A x = rhs for SPD A.
Vector spd_solve(const Matrix& a, std::span<const double> rhs);

// sqrt(x^T A x). Throws NegativeQuadraticForm if x^T A x < -1e-12.
double mahalanobis(std::span<const double> x, const Matrix& a);

/// Ridge regression state updated one observation at a time.
///
/// `v` is lambda*I plus the sum of outer products of applied features. `vinv`
/// tracks its inverse through Sherman-Morrison updates and is rebuilt from a
/// fresh factorization of `v` every `kRefreshInterval` updates.
struct RidgeState {
    static constexpr std::size_t kRefreshInterval = 500;

    std::size_t dim = 0;
    double lambda = 1.0;
    Matrix v;
    Matrix vinv;
    Vector b;
    Vector theta_hat;
    std::size_t update_count = 0;
};

RidgeState ridge_init(std::size_t d, double lambda);
void ridge_update(RidgeState& state, std::span<const double> x, double y);

}  // namespace synbandit
