#include "synbandit/envs.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>

#include "synbandit/errors.hpp"

namespace synbandit {

namespace {

Vector uniform_vector(RandomStream& rng, std::size_t d, double lo, double hi) {
    Vector v(d);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

void scale_to_unit_ball(std::span<double> x) {
    const double n = norm2(x);
    if (n > 1.0) {
        for (auto& v : x) v /= n;
        // Rounding can leave the quotient a few ulps above 1.
        while (norm2(x) > 1.0) {
            for (auto& v : x) v *= 1.0 - std::numeric_limits<double>::epsilon();
        }
    }
}

Matrix draw_features(const Environment& env, RandomStream& rng) {
    Matrix f(env.K, env.d);
    const double half_width = 1.0 / std::sqrt(static_cast<double>(env.d));
    for (std::size_t a = 0; a < env.K; ++a) {
        auto row = f.row(a);
        switch (env.kind) {
            case EnvKind::LinearGaussian:
                for (auto& v : row) v = rng.uniform(-half_width, half_width);
                break;
            case EnvKind::LogisticBernoulli:
                for (auto& v : row) v = rng.uniform(-1.0, 1.0);
                scale_to_unit_ball(row);
                break;
            default:
                throw InvalidArgument("draw_features: not a synthetic environment");
        }
    }
    return f;
}

std::string trim_line(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
        line.pop_back();
    }
    return line;
}

}  // namespace

std::string_view to_string(EnvKind kind) noexcept {
    switch (kind) {
        case EnvKind::LinearGaussian: return "linear";
        case EnvKind::LogisticBernoulli: return "logistic";
        case EnvKind::MovielensLinear: return "movielens-linear";
        case EnvKind::MovielensLogistic: return "movielens-logistic";
    }
    return "?";
}

std::string_view to_string(FeatureMode mode) noexcept {
    return mode == FeatureMode::Fixed ? "fixed" : "changing";
}

EnvKind parse_env_kind(std::string_view name) {
    if (name == "linear" || name == "LinearGaussian") return EnvKind::LinearGaussian;
    if (name == "logistic" || name == "LogisticBernoulli") return EnvKind::LogisticBernoulli;
    if (name == "movielens-linear" || name == "MovielensLinear") return EnvKind::MovielensLinear;
    if (name == "movielens-logistic" || name == "MovielensLogistic") return EnvKind::MovielensLogistic;
    throw InvalidArgument("unknown environment kind '" + std::string(name) + "'");
}

FeatureMode parse_feature_mode(std::string_view name) {
    if (name == "fixed" || name == "Fixed") return FeatureMode::Fixed;
    if (name == "changing" || name == "Changing") return FeatureMode::Changing;
    throw InvalidArgument("unknown feature mode '" + std::string(name) + "'");
}

Environment gen_linear_env(std::uint64_t seed, std::size_t d, std::size_t K, double sigma,
                           FeatureMode mode) {
    if (d == 0 || K == 0) throw InvalidArgument("gen_linear_env: d and K must be positive");
    if (!(sigma >= 0.0)) throw InvalidArgument("gen_linear_env: sigma must be non-negative");
    RandomStream rng(seed);
    Environment env;
    env.kind = EnvKind::LinearGaussian;
    env.d = d;
    env.K = K;
    env.noise_sigma = sigma;
    env.feature_mode = mode;
    const double half_width = 1.0 / std::sqrt(static_cast<double>(d));
    env.theta_star = uniform_vector(rng, d, -half_width, half_width);
    if (mode == FeatureMode::Fixed) env.fixed_features = draw_features(env, rng);
    return env;
}

Environment gen_logistic_env(std::uint64_t seed, std::size_t d, std::size_t K, FeatureMode mode) {
    if (d == 0 || K == 0) throw InvalidArgument("gen_logistic_env: d and K must be positive");
    RandomStream rng(seed);
    Environment env;
    env.kind = EnvKind::LogisticBernoulli;
    env.d = d;
    env.K = K;
    env.feature_mode = mode;
    const double half_width = 1.0 / std::sqrt(static_cast<double>(d));
    env.theta_star = uniform_vector(rng, d, -half_width, half_width);
    if (mode == FeatureMode::Fixed) env.fixed_features = draw_features(env, rng);
    return env;
}

Environment movielens_env(const Matrix& item_features, const Matrix& user_features,
                          std::uint64_t seed, std::size_t K, EnvKind kind) {
    if (kind != EnvKind::MovielensLinear && kind != EnvKind::MovielensLogistic) {
        throw InvalidArgument("movielens_env: kind must be a MovieLens kind");
    }
    if (user_features.rows() < kMovielensUsersPerTheta) {
        throw InvalidData("movielens_env: need at least " + std::to_string(kMovielensUsersPerTheta) +
                          " users, got " + std::to_string(user_features.rows()));
    }
    if (item_features.cols() != user_features.cols()) {
        throw InvalidData("movielens_env: user and item feature dimensions differ");
    }
    if (K == 0 || K > item_features.rows()) {
        throw InvalidArgument("movielens_env: K must lie in [1, item count]");
    }
    RandomStream rng(seed);
    Environment env;
    env.kind = kind;
    env.d = item_features.cols();
    env.K = K;
    env.feature_mode = FeatureMode::Changing;
    env.noise_sigma = kind == EnvKind::MovielensLinear ? 1.0 : 0.0;
    env.feature_pool = normalize_rows(item_features);

    // Partial Fisher-Yates over user ids.
    std::vector<std::size_t> ids(user_features.rows());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    env.theta_star.assign(env.d, 0.0);
    for (std::size_t i = 0; i < kMovielensUsersPerTheta; ++i) {
        const std::size_t j = i + rng.below(ids.size() - i);
        std::swap(ids[i], ids[j]);
        const auto u = user_features.row(ids[i]);
        for (std::size_t k = 0; k < env.d; ++k) env.theta_star[k] += u[k];
    }
    for (auto& v : env.theta_star) v /= static_cast<double>(kMovielensUsersPerTheta);
    env.mean_scale = kind == EnvKind::MovielensLinear ? std::max(1.0, norm2(env.theta_star)) : 1.0;
    return env;
}

double mean_reward(const Environment& env, std::span<const double> x) {
    const double z = dot(x, env.theta_star);
    switch (env.kind) {
        case EnvKind::LinearGaussian:
        case EnvKind::MovielensLinear:
            return (z / env.mean_scale + 1.0) / 2.0;
        case EnvKind::LogisticBernoulli:
        case EnvKind::MovielensLogistic:
            return sigmoid(z);
    }
    return 0.0;
}

ContextSet make_context(const Environment& env, std::size_t t, RandomStream& rng) {
    ContextSet ctx;
    ctx.round = t;
    if (env.fixed_features) {
        ctx.features = *env.fixed_features;
        return ctx;
    }
    if (env.feature_pool) {
        const Matrix& pool = *env.feature_pool;
        std::vector<std::size_t> ids(pool.rows());
        std::iota(ids.begin(), ids.end(), std::size_t{0});
        ctx.features = Matrix(env.K, env.d);
        for (std::size_t a = 0; a < env.K; ++a) {
            const std::size_t j = a + rng.below(ids.size() - a);
            std::swap(ids[a], ids[j]);
            std::copy_n(pool.row(ids[a]).begin(), env.d, ctx.features.row(a).begin());
        }
        return ctx;
    }
    ctx.features = draw_features(env, rng);
    return ctx;
}

RoundOutcome step(const Environment& env, const ContextSet& ctx, std::size_t pulled,
                  RandomStream& rng) {
    if (pulled >= ctx.arms()) throw InvalidArgument("step: pulled arm out of range");
    RoundOutcome out;
    out.pulled = pulled;
    out.optimal_mean = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < ctx.arms(); ++a) {
        out.optimal_mean = std::max(out.optimal_mean, mean_reward(env, ctx.arm(a)));
    }
    out.pulled_mean = mean_reward(env, ctx.arm(pulled));
    out.instant_regret = out.optimal_mean - out.pulled_mean;

    switch (env.kind) {
        case EnvKind::LinearGaussian:
        case EnvKind::MovielensLinear:
            out.raw_reward = env.noise_sigma > 0.0 ? rng.normal(out.pulled_mean, env.noise_sigma)
                                                   : out.pulled_mean;
            break;
        case EnvKind::LogisticBernoulli:
        case EnvKind::MovielensLogistic:
            out.raw_reward = rng.bernoulli(out.pulled_mean) ? 1.0 : 0.0;
            break;
    }
    out.reward = std::clamp(out.raw_reward, 0.0, 1.0);
    return out;
}

double feature_min_eigenvalue(const Environment& env, std::size_t draws, RandomStream& rng) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(env.d, env.d);
    std::size_t count = 0;
    for (std::size_t t = 1; t <= draws; ++t) {
        const ContextSet ctx = make_context(env, t, rng);
        for (std::size_t a = 0; a < ctx.arms(); ++a) {
            const Eigen::Map<const Eigen::VectorXd> x(ctx.arm(a).data(), env.d);
            m += x * x.transpose();
            ++count;
        }
    }
    m /= static_cast<double>(count);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// ---- factorization ------------------------------------------------------------

double als_objective(std::span<const Rating> ratings, const Factorization& f, double reg) {
    double obj = 0.0;
    for (const auto& r : ratings) {
        const double e = r.value - dot(f.users.row(r.user - 1), f.items.row(r.item - 1));
        obj += e * e;
    }
    for (double v : f.users.data()) obj += reg * v * v;
    for (double v : f.items.data()) obj += reg * v * v;
    return obj;
}

double als_rmse(std::span<const Rating> ratings, const Factorization& f) {
    if (ratings.empty()) return 0.0;
    double sse = 0.0;
    for (const auto& r : ratings) {
        const double e = r.value - dot(f.users.row(r.user - 1), f.items.row(r.item - 1));
        sse += e * e;
    }
    return std::sqrt(sse / static_cast<double>(ratings.size()));
}

namespace {

// Ridge solve for every row of `target` against the fixed `other` factors.
void als_half_sweep(const std::vector<std::vector<std::pair<std::size_t, double>>>& by_row,
                    const Matrix& other, Matrix& target, double reg) {
    const std::size_t d = target.cols();
    Matrix a(d, d);
    Vector rhs(d);
    for (std::size_t r = 0; r < by_row.size(); ++r) {
        a = Matrix::identity(d, reg);
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (const auto& [col, value] : by_row[r]) {
            const auto v = other.row(col);
            for (std::size_t i = 0; i < d; ++i) {
                rhs[i] += value * v[i];
                for (std::size_t j = i; j < d; ++j) a(i, j) += v[i] * v[j];
            }
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
        const Vector sol = spd_solve(a, rhs);
        std::copy(sol.begin(), sol.end(), target.row(r).begin());
    }
}

}  // namespace

Factorization als_factorize(std::span<const Rating> ratings, const AlsOptions& opts,
                            std::vector<double>* objective_trace) {
    if (ratings.empty()) throw InvalidData("als_factorize: no ratings");
    if (opts.d == 0) throw InvalidArgument("als_factorize: d must be positive");
    if (!(opts.reg > 0.0)) throw InvalidArgument("als_factorize: reg must be positive");

    std::size_t n_users = 0;
    std::size_t n_items = 0;
    for (const auto& r : ratings) {
        if (r.user == 0 || r.item == 0) throw InvalidData("als_factorize: ids are 1-based");
        n_users = std::max(n_users, r.user);
        n_items = std::max(n_items, r.item);
    }
    std::vector<std::vector<std::pair<std::size_t, double>>> by_user(n_users), by_item(n_items);
    for (const auto& r : ratings) {
        by_user[r.user - 1].emplace_back(r.item - 1, r.value);
        by_item[r.item - 1].emplace_back(r.user - 1, r.value);
    }
    for (std::size_t u = 0; u < n_users; ++u) {
        if (by_user[u].empty()) throw InvalidData("als_factorize: user " + std::to_string(u + 1) + " has no ratings");
    }
    for (std::size_t i = 0; i < n_items; ++i) {
        if (by_item[i].empty()) throw InvalidData("als_factorize: item " + std::to_string(i + 1) + " has no ratings");
    }

    RandomStream rng(opts.seed);
    Factorization f{Matrix(n_users, opts.d), Matrix(n_items, opts.d)};
    const double init_sd = 1.0 / std::sqrt(static_cast<double>(opts.d));
    for (std::size_t i = 0; i < n_items; ++i)
        for (auto& v : f.items.row(i)) v = rng.normal(0.0, init_sd);

    if (objective_trace) objective_trace->clear();
    for (std::size_t it = 0; it < opts.iters; ++it) {
        als_half_sweep(by_user, f.items, f.users, opts.reg);
        if (objective_trace) objective_trace->push_back(als_objective(ratings, f, opts.reg));
        als_half_sweep(by_item, f.users, f.items, opts.reg);
        if (objective_trace) objective_trace->push_back(als_objective(ratings, f, opts.reg));
    }
    return f;
}

std::vector<Rating> read_ratings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ratings file " + path.string());
    std::vector<Rating> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim_line(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        long long user = 0;
        long long item = 0;
        double value = 0.0;
        if (!(ss >> user >> item >> value) || user <= 0 || item <= 0 || !std::isfinite(value)) {
            throw InvalidData(path.string() + ":" + std::to_string(lineno) + ": malformed rating");
        }
        out.push_back({static_cast<std::size_t>(user), static_cast<std::size_t>(item), value});
    }
    return out;
}

void write_features(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ' ';
            out << row[c];
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

Matrix read_features(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open feature file " + path.string());
    std::vector<Vector> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = trim_line(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        Vector v;
        double x = 0.0;
        while (ss >> x) v.push_back(x);
        if (!rows.empty() && v.size() != rows.front().size()) {
            throw InvalidData(path.string() + ": ragged feature rows");
        }
        rows.push_back(std::move(v));
    }
    if (rows.empty() || rows.front().empty()) throw InvalidData(path.string() + ": no features");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    return m;
}

Matrix normalize_rows(Matrix m) {
    for (std::size_t r = 0; r < m.rows(); ++r) scale_to_unit_ball(m.row(r));
    return m;
}

}  // namespace synbandit
