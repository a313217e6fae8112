#pragma once

// Ground-truth bandit environments and regret accounting.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "synbandit/numkit.hpp"
#include "synbandit/policies.hpp"
#include "synbandit/rng.hpp"

namespace synbandit {

enum class EnvKind { LinearGaussian, LogisticBernoulli, MovielensLinear, MovielensLogistic };
enum class FeatureMode { Fixed, Changing };

std::string_view to_string(EnvKind kind) noexcept;
std::string_view to_string(FeatureMode mode) noexcept;
EnvKind parse_env_kind(std::string_view name);
FeatureMode parse_feature_mode(std::string_view name);

struct Environment {
    EnvKind kind = EnvKind::LinearGaussian;
    std::size_t d = 1;
    std::size_t K = 1;
    Vector theta_star;
    double noise_sigma = 0.0;
    FeatureMode feature_mode = FeatureMode::Changing;
    std::optional<Matrix> fixed_features;  // K x d
    std::optional<Matrix> feature_pool;    // MovieLens items, already normalized
    // Divisor applied to x^T theta* before the (mu + 1) / 2 map in the linear
    // MovieLens environment; 1 elsewhere.
    double mean_scale = 1.0;
};

struct RoundOutcome {
    std::size_t pulled = 0;
    double raw_reward = 0.0;
    double reward = 0.0;  // raw_reward clipped to [0, 1]
    double pulled_mean = 0.0;
    double optimal_mean = 0.0;
    double instant_regret = 0.0;
};

// theta* and features ~ Uniform(-1/sqrt(d), 1/sqrt(d)); mean (x^T theta* + 1)/2.
Environment gen_linear_env(std::uint64_t seed, std::size_t d, std::size_t K, double sigma,
                           FeatureMode mode);
// theta* ~ Uniform(-1/sqrt(d), 1/sqrt(d)); features ~ Uniform(-1, 1) divided by
// max(1, |x|); Bernoulli rewards with mean sigmoid(x^T theta*).
Environment gen_logistic_env(std::uint64_t seed, std::size_t d, std::size_t K, FeatureMode mode);

// theta* = mean of 100 random user vectors; item vectors divided by max(1, |v|);
// each round shows K distinct items. Linear kind: mean
// (x^T theta* / max(1, |theta*|) + 1) / 2 with N(mean, 1) rewards.
// Logistic kind: Bernoulli(sigmoid(x^T theta*)).
Environment movielens_env(const Matrix& item_features, const Matrix& user_features,
                          std::uint64_t seed, std::size_t K, EnvKind kind);

inline constexpr std::size_t kMovielensUsersPerTheta = 100;

double mean_reward(const Environment& env, std::span<const double> x);

// Materializes round t's arms. Fixed-feature environments ignore `rng`.
ContextSet make_context(const Environment& env, std::size_t t, RandomStream& rng);

// Samples the pulled arm's reward from `rng` and scores it against the best arm.
RoundOutcome step(const Environment& env, const ContextSet& ctx, std::size_t pulled,
                  RandomStream& rng);

// Smallest eigenvalue of (1/(n K)) sum_t sum_a x x^T over `draws` contexts.
double feature_min_eigenvalue(const Environment& env, std::size_t draws, RandomStream& rng);

// ---- rating-matrix factorization --------------------------------------------

struct Rating {
    std::size_t user = 1;  // 1-based
    std::size_t item = 1;  // 1-based
    double value = 0.0;
};

struct Factorization {
    Matrix users;  // row u-1 is user u
    Matrix items;  // row i-1 is item i
};

struct AlsOptions {
    std::size_t d = 20;
    double reg = 0.1;
    std::size_t iters = 30;
    std::uint64_t seed = 0;
};

// sum (r - u^T v)^2 + reg (sum |u|^2 + sum |v|^2)
double als_objective(std::span<const Rating> ratings, const Factorization& f, double reg);

// Alternating ridge least squares. Optionally records the objective after
// every half-sweep. Throws InvalidData for empty input or ids with no ratings.
Factorization als_factorize(std::span<const Rating> ratings, const AlsOptions& opts,
                            std::vector<double>* objective_trace = nullptr);

double als_rmse(std::span<const Rating> ratings, const Factorization& f);

// "user item rating [timestamp]" per line, whitespace separated.
std::vector<Rating> read_ratings(const std::filesystem::path& path);
// One vector per line, space separated; line n holds id n.
void write_features(const std::filesystem::path& path, const Matrix& m);
Matrix read_features(const std::filesystem::path& path);

// Divides each row by max(1, |row|).
Matrix normalize_rows(Matrix m);

}  // namespace synbandit
