#include "synbandit/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synbandit/errors.hpp"

namespace synbandit {

namespace {

constexpr double kPivotTolerance = 1e-12;

void require_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw InvalidArgument(std::string(what) + ": matrix must be square");
    }
}

// Forward then backward substitution with the Cholesky factor L.
Vector cholesky_solve(const Matrix& l, std::span<const double> rhs) {
    const std::size_t n = l.rows();
    Vector y(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        double s = y[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InvalidArgument("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n, double scale) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("matrix product: dimension mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw InvalidArgument("matrix-vector product: dimension mismatch");
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

Matrix cholesky(const Matrix& a) {
    require_square(a, "cholesky");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > kPivotTolerance)) {
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) + " is " +
                                      std::to_string(diag));
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

Matrix spd_inverse(const Matrix& a) {
    const Matrix l = cholesky(a);
    const std::size_t n = a.rows();
    Matrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(e.begin(), e.end(), 0.0);
        e[c] = 1.0;
        const Vector col = cholesky_solve(l, e);
        for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    // Symmetrize away round-off.
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r + 1; c < n; ++c) {
            const double m = 0.5 * (inv(r, c) + inv(c, r));
            inv(r, c) = m;
            inv(c, r) = m;
        }
    return inv;
}

Vector spd_solve(const Matrix& a, std::span<const double> rhs) {
    if (a.rows() != rhs.size()) throw InvalidArgument("spd_solve: dimension mismatch");
    return cholesky_solve(cholesky(a), rhs);
}

double mahalanobis(std::span<const double> x, const Matrix& a) {
    if (a.rows() != x.size() || a.cols() != x.size()) {
        throw InvalidArgument("mahalanobis: dimension mismatch");
    }
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) continue;
        q += x[i] * dot(a.row(i), x);
    }
    if (q < -1e-12) {
        throw NegativeQuadraticForm("mahalanobis: quadratic form is " + std::to_string(q));
    }
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

RidgeState ridge_init(std::size_t d, double lambda) {
    if (d == 0) throw InvalidArgument("ridge_init: dimension must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("ridge_init: lambda must be positive");
    }
    RidgeState s;
    s.dim = d;
    s.lambda = lambda;
    s.v = Matrix::identity(d, lambda);
    s.vinv = Matrix::identity(d, 1.0 / lambda);
    s.b.assign(d, 0.0);
    s.theta_hat.assign(d, 0.0);
    return s;
}

void ridge_update(RidgeState& state, std::span<const double> x, double y) {
    const std::size_t d = state.dim;
    if (x.size() != d) throw InvalidArgument("ridge_update: feature dimension mismatch");

    const bool nonzero = std::any_of(x.begin(), x.end(), [](double v) { return v != 0.0; });
    ++state.update_count;

    if (nonzero) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) state.v(i, j) += x[i] * x[j];
        for (std::size_t i = 0; i < d; ++i) state.b[i] += y * x[i];

        if (state.update_count % RidgeState::kRefreshInterval == 0) {
            state.vinv = spd_inverse(state.v);
        } else {
            // Vinv <- Vinv - (Vinv x)(Vinv x)^T / (1 + x^T Vinv x)
            const Vector u = state.vinv * x;
            const double denom = 1.0 + dot(x, u);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) state.vinv(i, j) -= u[i] * u[j] / denom;
        }
    } else if (state.update_count % RidgeState::kRefreshInterval == 0) {
        state.vinv = spd_inverse(state.v);
    }
    state.theta_hat = state.vinv * state.b;
}

}  // namespace synbandit
