#pragma once

// Contextual bandit base algorithms behind one interface. Arm indices are
// 0-based; ties in every argmax go to the lowest index.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synbandit/numkit.hpp"
#include "synbandit/rng.hpp"

namespace synbandit {

enum class PolicyKind { LinUCB, LinTS, UcbGlm };

std::string_view to_string(PolicyKind kind) noexcept;
PolicyKind parse_policy_kind(std::string_view name);

// K arm feature vectors for one round, stored as a K x d matrix.
struct ContextSet {
    std::size_t round = 1;
    Matrix features;

    std::size_t arms() const noexcept { return features.rows(); }
    std::size_t dim() const noexcept { return features.cols(); }
    std::span<const double> arm(std::size_t a) const { return features.row(a); }
};

struct HyperParams {
    double alpha = 0.0;
    double lambda = 1.0;
    std::map<std::string, double> extras;
};

double sigmoid(double z) noexcept;

// Inputs of the confidence-radius exploration rate.
struct TheoryParams {
    double sigma = 0.5;
    double S = 1.0;
    double delta = 0.01;
    std::size_t d = 1;
    double lambda = 1.0;
};

struct Observation {
    Vector x;
    double y = 0.0;
};

/// Learner state shared by the three base algorithms.
///
/// One ridge state is kept per admissible regularizer so a tuner may switch
/// lambda between rounds; every observation is applied to all of them, which
/// keeps each one equal to lambda*I + sum x x^T over the full history.
class PolicyState {
public:
    PolicyState(PolicyKind kind, std::size_t dim, std::vector<double> lambdas,
                RandomStream rng = RandomStream{});

    PolicyKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<double>& lambdas() const noexcept { return lambdas_; }

    // Throws InvalidArgument when `lambda` was not registered at construction.
    const RidgeState& ridge(double lambda) const;
    RidgeState& ridge(double lambda);

    const std::vector<Observation>& history() const noexcept { return history_; }
    // Last logistic fit for `lambda`; zero before the first fit.
    const Vector& glm_theta(double lambda) const;
    Vector& glm_theta(double lambda);

    RandomStream& rng() noexcept { return rng_; }

    void append_history(std::span<const double> x, double y);

private:
    std::size_t slot(double lambda) const;

    PolicyKind kind_;
    std::size_t dim_;
    std::vector<double> lambdas_;
    std::vector<RidgeState> ridges_;
    std::vector<Vector> glm_thetas_;
    std::vector<Observation> history_;
    RandomStream rng_;
};

// sigma*sqrt(d*log((1 + t/lambda)/delta)) + S*sqrt(lambda). When the log
// argument is below 1 it is clamped to 1 and `clamped` (if given) is set.
double theoretical_alpha(const TheoryParams& p, std::size_t t, bool* clamped = nullptr);

// x^T theta + alpha * ||x||_{vinv}
double ucb_score(std::span<const double> x, std::span<const double> theta, const Matrix& vinv,
                 double alpha);

std::size_t linucb_select(const PolicyState& state, const ContextSet& ctx, const HyperParams& hp);

// Draws theta_TS = theta_hat + alpha * chol(Vinv) z with z taken from the
// state's stream (exactly d normal draws), then plays the greedy arm.
std::size_t lints_select(PolicyState& state, const ContextSet& ctx, const HyperParams& hp);
// Same rule with the standard-normal vector supplied by the caller.
std::size_t lints_select_with(const PolicyState& state, const ContextSet& ctx, const HyperParams& hp,
                              std::span<const double> z);

struct LogisticFitOptions {
    int max_iterations = 100;
    double gradient_tolerance = 1e-8;
    int max_halvings = 30;
};

// Penalized logistic loss (lambda/2)|theta|^2 + sum softplus(x^T theta) - y x^T theta.
double logistic_objective(std::span<const Observation> history, std::span<const double> theta,
                          double lambda);

// Newton minimizer of logistic_objective. Throws NoConvergence.
Vector logistic_fit(std::span<const Observation> history, std::size_t d, double lambda,
                    std::span<const double> start = {}, const LogisticFitOptions& opts = {});

Vector ucbglm_fit(const PolicyState& state, double lambda);

// Refits the logistic estimate for hp.lambda (keeping the previous estimate on
// NoConvergence) and plays the UCB arm against that lambda's V^{-1}.
std::size_t ucbglm_select(PolicyState& state, const ContextSet& ctx, const HyperParams& hp);

// Dispatches on state.kind().
std::size_t policy_select(PolicyState& state, const ContextSet& ctx, const HyperParams& hp);

void policy_update(PolicyState& state, std::span<const double> x, double y);

}  // namespace synbandit
