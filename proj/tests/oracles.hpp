#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the code paths it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "synbandit/numkit.hpp"
#include "synbandit/policies.hpp"
#include "synbandit/rng.hpp"

namespace oracle {

inline Eigen::MatrixXd to_eigen(const synbandit::Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
    return e;
}

inline double max_abs(const Eigen::MatrixXd& a, const synbandit::Matrix& b) {
    return (a - to_eigen(b)).cwiseAbs().maxCoeff();
}

// lambda*I + sum x x^T rebuilt from scratch, and its LU inverse.
inline Eigen::MatrixXd gram(const std::vector<std::vector<double>>& xs, std::size_t d, double lambda) {
    Eigen::MatrixXd v = lambda * Eigen::MatrixXd::Identity(d, d);
    for (const auto& x : xs) {
        const Eigen::Map<const Eigen::VectorXd> e(x.data(), d);
        v += e * e.transpose();
    }
    return v;
}

inline Eigen::MatrixXd dense_inverse(const Eigen::MatrixXd& a) { return a.fullPivLu().inverse(); }

// Random vector with |x| <= 1.
inline std::vector<double> unit_ball(synbandit::RandomStream& rng, std::size_t d) {
    std::vector<double> x(d);
    double n2 = 0.0;
    for (auto& v : x) {
        v = rng.uniform(-1.0, 1.0);
        n2 += v * v;
    }
    const double n = std::sqrt(n2);
    const double scale = rng.uniform() / std::max(n, 1e-12);
    for (auto& v : x) v *= scale;
    return x;
}

inline synbandit::Matrix random_spd(synbandit::RandomStream& rng, std::size_t d) {
    Eigen::MatrixXd a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    const Eigen::MatrixXd s = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
    synbandit::Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = s(i, j);
    return m;
}

// Bisection for a root of an increasing function on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Ternary search for the minimizer of a convex function on [lo, hi].
inline double ternary_min(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double a = lo + (hi - lo) / 3.0;
        const double b = hi - (hi - lo) / 3.0;
        if (f(a) < f(b)) {
            hi = b;
        } else {
            lo = a;
        }
    }
    return 0.5 * (lo + hi);
}

// Penalized logistic loss written out directly.
inline double logistic_loss(std::span<const synbandit::Observation> obs, std::span<const double> theta,
                            double lambda) {
    double v = 0.0;
    for (double t : theta) v += 0.5 * lambda * t * t;
    for (const auto& o : obs) {
        double z = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) z += o.x[i] * theta[i];
        v += std::log(1.0 + std::exp(z)) - o.y * z;
    }
    return v;
}

// Minimizer of the penalized logistic loss for d <= 2 by nested ternary
// search over a box (the loss is strictly convex).
inline std::vector<double> logistic_minimizer(std::span<const synbandit::Observation> obs, std::size_t d,
                                              double lambda, double box = 20.0) {
    if (d == 1) {
        const double t = ternary_min(
            [&](double a) {
                const double th[1] = {a};
                return logistic_loss(obs, th, lambda);
            },
            -box, box);
        return {t};
    }
    auto inner = [&](double a) {
        return ternary_min(
            [&](double b) {
                const double th[2] = {a, b};
                return logistic_loss(obs, th, lambda);
            },
            -box, box, 120);
    };
    const double a = ternary_min(
        [&](double a0) {
            const double th[2] = {a0, inner(a0)};
            return logistic_loss(obs, th, lambda);
        },
        -box, box, 120);
    return {a, inner(a)};
}

}  // namespace oracle
