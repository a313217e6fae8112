#include "synbandit/exp3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "synbandit/errors.hpp"

namespace synbandit {

double exp3_beta(std::size_t n, std::size_t horizon) {
    const double nn = static_cast<double>(n);
    const double b = std::sqrt(nn * std::log(nn) / ((std::numbers::e - 1.0) * static_cast<double>(horizon)));
    return std::min(1.0, b);
}

Exp3State exp3_init(std::size_t n, std::size_t horizon) {
    if (n == 0) throw InvalidArgument("exp3_init: candidate count must be positive");
    if (horizon == 0) throw InvalidArgument("exp3_init: horizon must be positive");
    return Exp3State{n, std::vector<double>(n, 1.0), exp3_beta(n, horizon), horizon};
}

std::vector<double> exp3_probs(const Exp3State& state) {
    const double total = std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
    const double floor = state.beta / static_cast<double>(state.n);
    std::vector<double> p(state.n);
    for (std::size_t j = 0; j < state.n; ++j) {
        p[j] = floor + (1.0 - state.beta) * state.weights[j] / total;
    }
    return p;
}

std::size_t exp3_sample(const Exp3State& state, double u) {
    const auto p = exp3_probs(state);
    double cum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        cum += p[j];
        if (u < cum) return j;
    }
    return p.size() - 1;
}

void exp3_update(Exp3State& state, std::size_t chosen, double reward) {
    if (chosen >= state.n) throw InvalidArgument("exp3_update: index out of range");
    if (!(reward >= 0.0 && reward <= 1.0)) {
        throw InvalidArgument("exp3_update: reward " + std::to_string(reward) + " outside [0, 1]");
    }
    if (reward == 0.0) return;

    const double p = exp3_probs(state)[chosen];
    const double estimate = reward / p;
    state.weights[chosen] *= std::exp(state.beta / static_cast<double>(state.n) * estimate);

    const double top = *std::max_element(state.weights.begin(), state.weights.end());
    if (top > kExp3WeightCeiling) {
        const double mean = std::accumulate(state.weights.begin(), state.weights.end(), 0.0) /
                            static_cast<double>(state.n);
        for (auto& w : state.weights) w = std::max(w / mean, std::numeric_limits<double>::min());
    }
}

}  // namespace synbandit
