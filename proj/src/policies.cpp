#include "synbandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synbandit/errors.hpp"

namespace synbandit {

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_context(const PolicyState& state, const ContextSet& ctx) {
    if (ctx.arms() == 0) throw InvalidArgument("context set has no arms");
    if (ctx.dim() != state.dim()) throw InvalidArgument("context dimension mismatch");
}

template <typename Score>
std::size_t argmax_arm(const ContextSet& ctx, Score&& score) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < ctx.arms(); ++a) {
        const double s = score(ctx.arm(a));
        if (s > best_score) {
            best_score = s;
            best = a;
        }
    }
    return best;
}

}  // namespace

double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::string_view to_string(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::LinUCB: return "LinUCB";
        case PolicyKind::LinTS: return "LinTS";
        case PolicyKind::UcbGlm: return "UCB-GLM";
    }
    return "?";
}

PolicyKind parse_policy_kind(std::string_view name) {
    if (name == "LinUCB" || name == "linucb") return PolicyKind::LinUCB;
    if (name == "LinTS" || name == "lints") return PolicyKind::LinTS;
    if (name == "UCB-GLM" || name == "ucbglm" || name == "ucb-glm" || name == "UCBGLM") {
        return PolicyKind::UcbGlm;
    }
    throw InvalidArgument("unknown policy '" + std::string(name) + "'");
}

PolicyState::PolicyState(PolicyKind kind, std::size_t dim, std::vector<double> lambdas,
                         RandomStream rng)
    : kind_(kind), dim_(dim), lambdas_(std::move(lambdas)), rng_(rng) {
    if (lambdas_.empty()) throw InvalidArgument("PolicyState: at least one lambda required");
    for (double l : lambdas_) {
        ridges_.push_back(ridge_init(dim_, l));
        glm_thetas_.emplace_back(dim_, 0.0);
    }
}

std::size_t PolicyState::slot(double lambda) const {
    for (std::size_t i = 0; i < lambdas_.size(); ++i)
        if (lambdas_[i] == lambda) return i;
    throw InvalidArgument("PolicyState: lambda " + std::to_string(lambda) + " not registered");
}

const RidgeState& PolicyState::ridge(double lambda) const { return ridges_[slot(lambda)]; }
RidgeState& PolicyState::ridge(double lambda) { return ridges_[slot(lambda)]; }
const Vector& PolicyState::glm_theta(double lambda) const { return glm_thetas_[slot(lambda)]; }
Vector& PolicyState::glm_theta(double lambda) { return glm_thetas_[slot(lambda)]; }

void PolicyState::append_history(std::span<const double> x, double y) {
    history_.push_back({Vector(x.begin(), x.end()), y});
}

double theoretical_alpha(const TheoryParams& p, std::size_t t, bool* clamped) {
    if (!(p.lambda > 0.0)) throw InvalidArgument("theoretical_alpha: lambda must be positive");
    if (!(p.delta > 0.0)) throw InvalidArgument("theoretical_alpha: delta must be positive");
    if (p.sigma < 0.0 || p.S < 0.0) throw InvalidArgument("theoretical_alpha: negative sigma or S");
    double arg = (1.0 + static_cast<double>(t) / p.lambda) / p.delta;
    const bool clamp = arg < 1.0;
    if (clamped) *clamped = clamp;
    if (clamp) arg = 1.0;
    return p.sigma * std::sqrt(static_cast<double>(p.d) * std::log(arg)) + p.S * std::sqrt(p.lambda);
}

double ucb_score(std::span<const double> x, std::span<const double> theta, const Matrix& vinv,
                 double alpha) {
    const double mean = dot(x, theta);
    return alpha == 0.0 ? mean : mean + alpha * mahalanobis(x, vinv);
}

std::size_t linucb_select(const PolicyState& state, const ContextSet& ctx, const HyperParams& hp) {
    check_context(state, ctx);
    const RidgeState& r = state.ridge(hp.lambda);
    return argmax_arm(ctx, [&](std::span<const double> x) {
        return ucb_score(x, r.theta_hat, r.vinv, hp.alpha);
    });
}

std::size_t lints_select(PolicyState& state, const ContextSet& ctx, const HyperParams& hp) {
    check_context(state, ctx);
    Vector z(state.dim());
    for (auto& zi : z) zi = state.rng().normal();
    return lints_select_with(state, ctx, hp, z);
}

std::size_t lints_select_with(const PolicyState& state, const ContextSet& ctx, const HyperParams& hp,
                              std::span<const double> z) {
    check_context(state, ctx);
    const std::size_t d = state.dim();
    if (z.size() != d) throw InvalidArgument("lints_select: draw dimension mismatch");
    const RidgeState& r = state.ridge(hp.lambda);
    Vector theta = r.theta_hat;
    if (hp.alpha != 0.0) {
        const Matrix l = cholesky(r.vinv);
        const Vector lz = l * z;
        for (std::size_t i = 0; i < d; ++i) theta[i] += hp.alpha * lz[i];
    }
    return argmax_arm(ctx, [&](std::span<const double> x) { return dot(x, theta); });
}

double logistic_objective(std::span<const Observation> history, std::span<const double> theta,
                          double lambda) {
    double obj = 0.5 * lambda * dot(theta, theta);
    for (const auto& o : history) {
        const double z = dot(o.x, theta);
        obj += softplus(z) - o.y * z;
    }
    return obj;
}

Vector logistic_fit(std::span<const Observation> history, std::size_t d, double lambda,
                    std::span<const double> start, const LogisticFitOptions& opts) {
    if (!(lambda > 0.0)) throw InvalidArgument("logistic_fit: lambda must be positive");
    Vector theta = start.empty() ? Vector(d, 0.0) : Vector(start.begin(), start.end());
    if (theta.size() != d) throw InvalidArgument("logistic_fit: start dimension mismatch");
    if (history.empty()) return Vector(d, 0.0);

    Vector grad(d);
    Matrix hess(d, d);
    double obj = logistic_objective(history, theta, lambda);
    for (int iter = 0;; ++iter) {
        for (std::size_t i = 0; i < d; ++i) grad[i] = lambda * theta[i];
        hess = Matrix::identity(d, lambda);
        for (const auto& o : history) {
            const double p = sigmoid(dot(o.x, theta));
            const double w = p * (1.0 - p);
            const double r = p - o.y;
            for (std::size_t i = 0; i < d; ++i) {
                const double xi = o.x[i];
                if (xi == 0.0) continue;
                grad[i] += r * xi;
                const double wxi = w * xi;
                for (std::size_t j = i; j < d; ++j) hess(i, j) += wxi * o.x[j];
            }
        }
        if (norm2(grad) <= opts.gradient_tolerance) return theta;
        if (iter >= opts.max_iterations) {
            throw NoConvergence("logistic_fit: gradient norm " + std::to_string(norm2(grad)) +
                                " after " + std::to_string(opts.max_iterations) + " iterations");
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < i; ++j) hess(i, j) = hess(j, i);

        const Vector step = spd_solve(hess, grad);
        double scale = 1.0;
        Vector trial(d);
        bool accepted = false;
        const double slack = 1e-14 * (1.0 + std::abs(obj));
        for (int h = 0; h <= opts.max_halvings; ++h) {
            for (std::size_t i = 0; i < d; ++i) trial[i] = theta[i] - scale * step[i];
            const double trial_obj = logistic_objective(history, trial, lambda);
            if (trial_obj <= obj + slack) {
                theta = trial;
                obj = trial_obj;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) {
            throw NoConvergence("logistic_fit: line search failed with gradient norm " +
                                std::to_string(norm2(grad)));
        }
    }
}

Vector ucbglm_fit(const PolicyState& state, double lambda) {
    return logistic_fit(state.history(), state.dim(), lambda, state.glm_theta(lambda));
}

std::size_t ucbglm_select(PolicyState& state, const ContextSet& ctx, const HyperParams& hp) {
    check_context(state, ctx);
    try {
        state.glm_theta(hp.lambda) = ucbglm_fit(state, hp.lambda);
    } catch (const NoConvergence&) {
        // keep the previous estimate
    }
    const Vector& theta = state.glm_theta(hp.lambda);
    const RidgeState& r = state.ridge(hp.lambda);
    return argmax_arm(ctx, [&](std::span<const double> x) {
        return ucb_score(x, theta, r.vinv, hp.alpha);
    });
}

std::size_t policy_select(PolicyState& state, const ContextSet& ctx, const HyperParams& hp) {
    switch (state.kind()) {
        case PolicyKind::LinUCB: return linucb_select(state, ctx, hp);
        case PolicyKind::LinTS: return lints_select(state, ctx, hp);
        case PolicyKind::UcbGlm: return ucbglm_select(state, ctx, hp);
    }
    throw InvalidArgument("policy_select: unknown kind");
}

void policy_update(PolicyState& state, std::span<const double> x, double y) {
    if (x.size() != state.dim()) throw InvalidArgument("policy_update: dimension mismatch");
    for (double l : state.lambdas()) ridge_update(state.ridge(l), x, y);
    if (state.kind() == PolicyKind::UcbGlm) state.append_history(x, y);
}

}  // namespace synbandit
