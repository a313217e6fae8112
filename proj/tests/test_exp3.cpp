#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "synbandit/errors.hpp"
#include "synbandit/exp3.hpp"
#include "synbandit/rng.hpp"

using namespace synbandit;

TEST_CASE("exp3_init mixing rate") {
    const Exp3State s5 = exp3_init(5, 10000);
    CHECK(s5.beta == doctest::Approx(0.021640880021258854).epsilon(1e-12));
    CHECK(s5.weights == std::vector<double>(5, 1.0));
    CHECK(exp3_init(3, 10000).beta == doctest::Approx(0.013849549760391927).epsilon(1e-12));
    // sqrt(8 ln 8 / (e - 1)) ~ 3.11 clamps to 1.
    CHECK(exp3_init(8, 1).beta == 1.0);
    // n = 1: log 1 = 0.
    CHECK(exp3_init(1, 100).beta == 0.0);
    CHECK_THROWS_AS(exp3_init(0, 10), InvalidArgument);
}

TEST_CASE("exp3_probs") {
    Exp3State s = exp3_init(4, 100);
    s.beta = 0.2;
    for (double p : exp3_probs(s)) CHECK(p == doctest::Approx(0.25));

    Exp3State two{2, {3.0, 1.0}, 0.5, 100};
    const auto p = exp3_probs(two);
    CHECK(p[0] == doctest::Approx(0.625));
    CHECK(p[1] == doctest::Approx(0.375));

    Exp3State pure{3, {100.0, 1.0, 5.0}, 1.0, 100};
    for (double q : exp3_probs(pure)) CHECK(q == doctest::Approx(1.0 / 3.0));

    Exp3State single = exp3_init(1, 100);
    CHECK(exp3_probs(single)[0] == 1.0);
}

TEST_CASE("exp3_sample inverse CDF") {
    Exp3State s = exp3_init(4, 100);
    CHECK(exp3_sample(s, 0.6) == 2);
    CHECK(exp3_sample(s, 0.0) == 0);
    CHECK(exp3_sample(s, 0.999999) == 3);
    const Exp3State one = exp3_init(1, 100);
    for (double u : {0.0, 0.3, 0.99}) CHECK(exp3_sample(one, u) == 0);
}

TEST_CASE("exp3_update") {
    Exp3State s{2, {1.0, 1.0}, 0.5, 100};
    exp3_update(s, 0, 1.0);
    CHECK(s.weights[0] == doctest::Approx(std::exp(0.5)));
    CHECK(s.weights[1] == 1.0);

    Exp3State z = exp3_init(3, 100);
    exp3_update(z, 1, 0.0);
    CHECK(z.weights == std::vector<double>(3, 1.0));

    CHECK_THROWS_AS(exp3_update(z, 1, 1.5), InvalidArgument);
    CHECK_THROWS_AS(exp3_update(z, 1, -0.1), InvalidArgument);
    CHECK_THROWS_AS(exp3_update(z, 3, 0.5), InvalidArgument);
}

TEST_CASE("only the chosen weight moves") {
    RandomStream rng(1);
    Exp3State s = exp3_init(6, 1000);
    for (int i = 0; i < 500; ++i) {
        const auto before = s.weights;
        const std::size_t j = exp3_sample(s, rng.uniform());
        exp3_update(s, j, rng.uniform());
        for (std::size_t k = 0; k < 6; ++k) {
            if (k != j) CHECK(s.weights[k] == before[k]);
        }
    }
}

TEST_CASE("probability floor and normalization hold along random trajectories") {
    RandomStream rng(2);
    for (std::size_t n : {2u, 5u, 15u}) {
        Exp3State s = exp3_init(n, 50);  // small T, large beta
        for (int i = 0; i < 2000; ++i) {
            const auto p = exp3_probs(s);
            CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
            for (double q : p) CHECK(q >= s.beta / static_cast<double>(n) - 1e-15);
            const std::size_t j = exp3_sample(s, rng.uniform());
            exp3_update(s, j, rng.uniform() < 0.9 && j == 0 ? 1.0 : rng.uniform() * 0.1);
            for (double w : s.weights) CHECK((w > 0.0 && std::isfinite(w)));
        }
    }
}

TEST_CASE("common weight scaling leaves probabilities unchanged") {
    RandomStream rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        Exp3State s{4, {}, rng.uniform(), 100};
        for (int j = 0; j < 4; ++j) s.weights.push_back(rng.uniform(0.1, 10.0));
        Exp3State scaled = s;
        const double c = std::exp(rng.uniform(-20.0, 20.0));
        for (auto& w : scaled.weights) w *= c;
        const auto p = exp3_probs(s);
        const auto q = exp3_probs(scaled);
        for (int j = 0; j < 4; ++j) CHECK(std::abs(p[j] - q[j]) < 1e-12);
    }
}

TEST_CASE("overflow guard rescales weights without changing probabilities") {
    Exp3State s{3, {1e100, 1.0, 2.0}, 0.3, 100};
    const double p0 = exp3_probs(s)[0];
    // Unscaled weights after the update, still representable at this size.
    const double w[] = {1e100 * std::exp(0.3 / 3.0 * 1.0 / p0), 1.0, 2.0};
    const double total = w[0] + w[1] + w[2];
    exp3_update(s, 0, 1.0);
    CHECK(*std::max_element(s.weights.begin(), s.weights.end()) <= kExp3WeightCeiling);
    const auto after = exp3_probs(s);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(after[j] - (0.1 + 0.7 * w[j] / total)) < 1e-12);
}

TEST_CASE("repeated reward raises the chosen probability") {
    Exp3State s = exp3_init(5, 10000);
    const double initial = exp3_probs(s)[2];
    for (int i = 0; i < 100; ++i) exp3_update(s, 2, 1.0);
    CHECK(exp3_probs(s)[2] > initial);
}
