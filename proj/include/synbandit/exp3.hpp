#pragma once

// EXP3 with uniform mixing and importance-weighted reward estimates.
//
//   beta   = min(1, sqrt(n log n / ((e - 1) T)))
//   p_j    = beta / n + (1 - beta) w_j / sum_i w_i
//   y_hat  = Y / p_j for the sampled j, 0 elsewhere
//   w_j   <- w_j * exp(beta / n * y_hat_j)

#include <cstddef>
#include <vector>

namespace synbandit {

struct Exp3State {
    std::size_t n = 0;
    std::vector<double> weights;
    double beta = 1.0;
    std::size_t horizon = 1;
};

// Weights are rescaled to mean 1 once the largest exceeds this.
inline constexpr double kExp3WeightCeiling = 1e100;

double exp3_beta(std::size_t n, std::size_t horizon);
Exp3State exp3_init(std::size_t n, std::size_t horizon);
std::vector<double> exp3_probs(const Exp3State& state);
// Inverse-CDF walk over exp3_probs in index order; u in [0, 1).
std::size_t exp3_sample(const Exp3State& state, double u);
void exp3_update(Exp3State& state, std::size_t chosen, double reward);

}  // namespace synbandit
