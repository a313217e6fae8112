// Acceptance suite: one PASS/FAIL line per criterion.
//
//   synbandit_acceptance            run everything
//   synbandit_acceptance 3 7        run a subset
//
// Criterion 9 factorizes a MovieLens-100K-shaped ratings file. Point
// SYNBANDIT_MOVIELENS_RATINGS at a real u.data to use it; otherwise a
// synthetic file with the same shape is generated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "synbandit/envs.hpp"
#include "synbandit/exp3.hpp"
#include "synbandit/harness.hpp"
#include "synbandit/numkit.hpp"
#include "synbandit/policies.hpp"
#include "synbandit/rng.hpp"
#include "synbandit/tuner.hpp"

using namespace synbandit;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string trace_csv(const RegretTrace& tr) {
    std::ostringstream out;
    write_trace(tr, out);
    return out.str();
}

double final_regret(const RegretTrace& tr) { return tr.records.back().cum_regret; }

double mean_final(const std::vector<RegretTrace>& traces) {
    double s = 0.0;
    for (const auto& tr : traces) s += final_regret(tr);
    return s / static_cast<double>(traces.size());
}

// ---- 1 ----------------------------------------------------------------------
Verdict ridge_oracle() {
    RandomStream rng(derive_seed(1, 0, "acceptance-ridge"));
    double worst = 0.0;
    for (std::size_t d : {2u, 4u, 8u}) {
        RidgeState s = ridge_init(d, 1.0);
        std::vector<std::vector<double>> xs;
        for (int i = 0; i < 200; ++i) {
            xs.push_back(oracle::unit_ball(rng, d));
            ridge_update(s, xs.back(), rng.uniform());
        }
        worst = std::max(worst, oracle::max_abs(oracle::dense_inverse(oracle::gram(xs, d, 1.0)), s.vinv));
    }
    return {worst < 1e-8, "max |Vinv - inv(V)| = " + fmt("%.3g", worst)};
}

// ---- 2 ----------------------------------------------------------------------
Verdict logistic_oracle() {
    RandomStream rng(derive_seed(2, 0, "acceptance-logistic"));
    double worst = 0.0;
    for (int inst = 0; inst < 10; ++inst) {
        const std::size_t d = 1 + inst % 2;
        const std::size_t n = 5 + rng.below(26);
        const double lambda = rng.uniform(0.1, 2.0);
        std::vector<double> theta(d);
        for (auto& v : theta) v = rng.uniform(-2.0, 2.0);
        PolicyState state(PolicyKind::UcbGlm, d, {lambda}, RandomStream(inst));
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> x(d);
            for (auto& v : x) v = rng.uniform(-1.0, 1.0);
            const double y = rng.bernoulli(sigmoid(dot(x, theta))) ? 1.0 : 0.0;
            policy_update(state, x, y);
        }
        const Vector fit = ucbglm_fit(state, lambda);
        std::vector<double> ref;
        if (d == 1) {
            // Root of the increasing gradient.
            const auto& h = state.history();
            ref = {oracle::bisect(
                [&](double t) {
                    double g = lambda * t;
                    for (const auto& o : h) g += (sigmoid(o.x[0] * t) - o.y) * o.x[0];
                    return g;
                },
                -50.0, 50.0)};
        } else {
            ref = oracle::logistic_minimizer(state.history(), d, lambda);
        }
        for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, std::abs(fit[i] - ref[i]));
    }
    return {worst < 1e-4, "max parameter gap = " + fmt("%.3g", worst)};
}

// ---- 3 ----------------------------------------------------------------------
Verdict exp3_bound() {
    const std::size_t n = 5;
    const std::size_t T = 10000;
    const double means[n] = {0.9, 0.75, 0.6, 0.45, 0.3};
    const double best = *std::max_element(means, means + n);
    const double bound = 2.0 * std::sqrt((std::exp(1.0) - 1.0) * n * T * std::log(static_cast<double>(n)));
    double total = 0.0;
    const int seeds = 20;
    for (int seed = 0; seed < seeds; ++seed) {
        RandomStream rng(derive_seed(3, seed, "acceptance-exp3"));
        Exp3State s = exp3_init(n, T);
        double regret = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const std::size_t j = exp3_sample(s, rng.uniform());
            regret += best - means[j];
            exp3_update(s, j, rng.bernoulli(means[j]) ? 1.0 : 0.0);
        }
        total += regret;
    }
    const double mean = total / seeds;
    return {mean <= 743.6, "mean pseudo-regret " + fmt("%.1f", mean) + " vs bound " + fmt("%.2f", bound) +
                               " (ratio " + fmt("%.2f", mean / bound) + ")"};
}

// ---- 4 ----------------------------------------------------------------------
Verdict linucb_monotone() {
    RandomStream rng(derive_seed(4, 0, "acceptance-monotone"));
    int violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 2 + rng.below(7);
        const std::size_t K = 2 + rng.below(30);
        const double lambda = rng.uniform(0.05, 2.0);
        PolicyState state(PolicyKind::LinUCB, d, {lambda}, RandomStream(trial));
        const std::size_t history = rng.below(60);
        for (std::size_t i = 0; i < history; ++i) policy_update(state, oracle::unit_ball(rng, d), rng.uniform());
        ContextSet ctx;
        ctx.features = Matrix(K, d);
        for (std::size_t a = 0; a < K; ++a) {
            const auto x = oracle::unit_ball(rng, d);
            std::copy(x.begin(), x.end(), ctx.features.row(a).begin());
        }
        const double a2 = rng.uniform(0.0, 5.0);
        const double a1 = a2 + rng.uniform(1e-3, 5.0);
        HyperParams h1;
        h1.alpha = a1;
        h1.lambda = lambda;
        HyperParams h2 = h1;
        h2.alpha = a2;
        const Matrix& vinv = state.ridge(lambda).vinv;
        const double w1 = mahalanobis(ctx.arm(linucb_select(state, ctx, h1)), vinv);
        const double w2 = mahalanobis(ctx.arm(linucb_select(state, ctx, h2)), vinv);
        if (w1 < w2 - 1e-12) {
            ++violations;
            worst = std::max(worst, w2 - w1);
        }
    }
    return {violations == 0, std::to_string(violations) + " violations in 1000 triples"};
}

// ---- 5 ----------------------------------------------------------------------
Verdict reduction_identity() {
    int mismatches = 0;
    int compared = 0;
    for (PolicyKind algo : {PolicyKind::LinUCB, PolicyKind::LinTS, PolicyKind::UcbGlm}) {
        ExperimentConfig cfg;
        cfg.algo = algo;
        cfg.env.kind = algo == PolicyKind::UcbGlm ? EnvKind::LogisticBernoulli : EnvKind::LinearGaussian;
        cfg.env.d = 5;
        cfg.env.K = 50;
        cfg.T = algo == PolicyKind::UcbGlm ? 2000 : 10000;
        cfg.T1 = 20;
        cfg.theory.d = 5;
        for (std::uint64_t seed : {11u, 22u, 33u}) {
            cfg.master_seed = seed;
            ExperimentConfig tl = cfg;
            tl.tuner = TunerMode::TL;
            ExperimentConfig syn = cfg;
            syn.tuner = TunerMode::Syndicated;
            syn.tune = {"alpha"};
            mismatches += trace_csv(run_experiment(tl, 0)) != trace_csv(run_experiment(syn, 0));
            ++compared;
        }
    }
    return {mismatches == 0, std::to_string(compared - mismatches) + "/" + std::to_string(compared) +
                                 " trace pairs byte-identical"};
}

// ---- 6 ----------------------------------------------------------------------
Verdict table_scale() {
    ExperimentConfig cfg;
    cfg.env.kind = EnvKind::LinearGaussian;
    cfg.env.d = 5;
    cfg.env.K = 100;
    cfg.env.sigma = 0.5;
    cfg.env.feature_mode = FeatureMode::Fixed;
    cfg.algo = PolicyKind::LinUCB;
    cfg.T = 10000;
    cfg.repeats = 5;
    cfg.master_seed = 2024;
    cfg.lambda = 1.0;
    cfg.theory = TheoryParams{0.5, 1.0, 0.01, 5, 1.0};
    cfg.tuner = TunerMode::Fixed;
    cfg.sweep_alpha.clear();
    for (int i = 0; i <= 20; ++i) cfg.sweep_alpha.push_back(0.5 * i);
    cfg.sweep_lambda = {1.0};
    const auto cells = run_sweep(cfg, {}, 0);
    const auto best = std::min_element(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
        return a.summary.final_mean < b.summary.final_mean;
    });
    ExperimentConfig theory = cfg;
    theory.tuner = TunerMode::TheoreticalExplore;
    const Summary th = aggregate(run_repeats(theory, {}, 0));
    const bool in_band = best->summary.final_mean >= 100.0 && best->summary.final_mean <= 1100.0;
    const bool theory_not_better = th.final_mean >= 0.7 * best->summary.final_mean;
    return {in_band && theory_not_better,
            "best alpha " + fmt("%g", best->alpha) + ": " + fmt("%.2f", best->summary.final_mean) + " (" +
                fmt("%.2f", best->summary.final_std) + "); theoretical " + fmt("%.2f", th.final_mean) + " (" +
                fmt("%.2f", th.final_std) + ")"};
}

// ---- 7, 8 -------------------------------------------------------------------
ExperimentConfig simulation_config(TunerMode mode) {
    ExperimentConfig cfg;
    cfg.env.kind = EnvKind::LinearGaussian;
    cfg.env.d = 10;
    cfg.env.K = 100;
    cfg.env.sigma = 0.1;
    cfg.env.feature_mode = FeatureMode::Changing;
    cfg.algo = PolicyKind::LinUCB;
    cfg.tuner = mode;
    cfg.T = 10000;
    cfg.repeats = 10;
    cfg.master_seed = 7;
    cfg.lambda = 1.0;
    cfg.theory.d = 10;
    return cfg;
}

Verdict tuner_ordering() {
    const auto tl = run_repeats(simulation_config(TunerMode::TL), {}, 0);
    ExperimentConfig grid = simulation_config(TunerMode::Fixed);
    grid.sweep_alpha = grid.alpha_set;
    grid.sweep_lambda = {1.0};
    const auto cells = run_sweep(grid, {}, 0);
    double best_grid = INFINITY;
    double best_alpha = 0.0;
    for (const auto& c : cells) {
        if (c.summary.final_mean < best_grid) {
            best_grid = c.summary.final_mean;
            best_alpha = c.alpha;
        }
    }
    const double tl_mean = mean_final(tl);

    const auto syn = run_repeats(simulation_config(TunerMode::Syndicated), {}, 0);
    const auto comb = run_repeats(simulation_config(TunerMode::TLCombined), {}, 0);
    int wins = 0;
    for (std::size_t r = 0; r < syn.size(); ++r) wins += final_regret(syn[r]) <= 1.1 * final_regret(comb[r]);

    const bool tl_ok = tl_mean <= 1.5 * best_grid;
    const bool syn_ok = wins >= 6;
    return {tl_ok && syn_ok, "TL " + fmt("%.1f", tl_mean) + " vs best grid " + fmt("%.1f", best_grid) +
                                 " (alpha " + fmt("%g", best_alpha) + "); Syndicated " +
                                 fmt("%.1f", mean_final(syn)) + " vs TL-Combined " + fmt("%.1f", mean_final(comb)) +
                                 ", paired wins " + std::to_string(wins) + "/10"};
}

Verdict sublinear() {
    const auto syn = run_repeats(simulation_config(TunerMode::Syndicated), {}, 0);
    double ratio_sum = 0.0;
    for (const auto& tr : syn) ratio_sum += tr.records[9999].cum_regret / tr.records[4999].cum_regret;
    const double ratio = ratio_sum / static_cast<double>(syn.size());
    return {ratio < 1.8, "mean R(10000)/R(5000) = " + fmt("%.3f", ratio)};
}

// ---- 9 ----------------------------------------------------------------------
// 943 users x 1682 items, ~100K integer ratings in 1..5 from a noisy low-rank
// model; every user and item is rated at least once.
std::vector<Rating> movielens_shaped(std::uint64_t seed) {
    const std::size_t users = 943, items = 1682, rank = 5;
    RandomStream rng(seed);
    Matrix u(users, rank), v(items, rank);
    for (std::size_t i = 0; i < users; ++i)
        for (std::size_t k = 0; k < rank; ++k) u(i, k) = rng.normal(0.0, 0.5);
    for (std::size_t i = 0; i < items; ++i)
        for (std::size_t k = 0; k < rank; ++k) v(i, k) = rng.normal(0.0, 0.5);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<Rating> out;
    auto add = [&](std::size_t user, std::size_t item) {
        if (!seen.insert({user, item}).second) return;
        const double raw = 3.5 + dot(u.row(user), v.row(item)) + rng.normal(0.0, 0.7);
        out.push_back({user + 1, item + 1, std::clamp(std::round(raw), 1.0, 5.0)});
    };
    for (std::size_t i = 0; i < users; ++i) add(i, rng.below(items));
    for (std::size_t j = 0; j < items; ++j) add(rng.below(users), j);
    while (out.size() < 100000) add(rng.below(users), rng.below(items));
    return out;
}

Verdict als_sanity() {
    std::vector<Rating> rank1;
    RandomStream rng(derive_seed(9, 0, "acceptance-als"));
    std::vector<double> a(30), b(40);
    for (auto& x : a) x = rng.uniform(0.5, 2.0);
    for (auto& x : b) x = rng.uniform(0.5, 2.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) rank1.push_back({i + 1, j + 1, a[i] * b[j]});
    AlsOptions exact;
    exact.d = 1;
    exact.reg = 1e-9;
    exact.iters = 200;
    const double rmse1 = als_rmse(rank1, als_factorize(rank1, exact));

    std::vector<Rating> ratings;
    std::string source = "synthetic 943x1682";
    if (const char* path = std::getenv("SYNBANDIT_MOVIELENS_RATINGS")) {
        ratings = read_ratings(path);
        source = path;
    } else {
        ratings = movielens_shaped(derive_seed(9, 0, "acceptance-movielens"));
    }
    AlsOptions opts;
    opts.d = 20;
    opts.reg = 0.1;
    opts.iters = 30;
    const Factorization f = als_factorize(ratings, opts);
    const Matrix items = normalize_rows(f.items);
    double max_norm = 0.0;
    for (std::size_t i = 0; i < items.rows(); ++i) max_norm = std::max(max_norm, norm2(items.row(i)));
    return {rmse1 < 1e-3 && max_norm <= 1.0 && f.items.cols() == 20,
            "rank-1 RMSE " + fmt("%.2e", rmse1) + "; " + source + " (" + std::to_string(ratings.size()) +
                " ratings) train RMSE " + fmt("%.3f", als_rmse(ratings, f)) + ", max item norm " +
                fmt("%.6f", max_norm)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = no stated budget
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "ridge inverse matches dense inverse", 1.0, ridge_oracle},
        {2, "logistic fit matches brute-force minimizer", 5.0, logistic_oracle},
        {3, "EXP3 pseudo-regret under its bound", 30.0, exp3_bound},
        {4, "LinUCB confidence width monotone in alpha", 5.0, linucb_monotone},
        {5, "single-layer Syndicated reproduces TL", 60.0, reduction_identity},
        {6, "fixed-feature regret scale and theoretical alpha", 0.0, table_scale},
        {7, "tuner ordering on the simulated linear env", 0.0, tuner_ordering},
        {8, "Syndicated regret grows sublinearly", 0.0, sublinear},
        {9, "matrix factorization sanity", 120.0, als_sanity},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = Clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = seconds_since(start);
        const bool in_time = c.budget_seconds == 0.0 || elapsed < c.budget_seconds;
        const bool pass = v.pass && in_time;
        failed += !pass;
        std::printf("[%s] %d. %s: %s; %.2fs%s\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), elapsed,
                    in_time ? "" : " (over time budget)");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
