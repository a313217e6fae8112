#include "synbandit/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synbandit/errors.hpp"

namespace synbandit {

namespace {

ChosenConfig assign_from_set(const CandidateSet& set, std::size_t index) {
    ChosenConfig c;
    c.assignments[set.name] = set.values[index];
    c.indices[set.name] = index;
    return c;
}

// Splits a product index into per-set indices (first set slowest).
std::vector<std::size_t> unravel(std::span<const CandidateSet> sets, std::size_t flat) {
    std::vector<std::size_t> idx(sets.size());
    for (std::size_t l = sets.size(); l-- > 0;) {
        idx[l] = flat % sets[l].size();
        flat /= sets[l].size();
    }
    return idx;
}

}  // namespace

std::string_view to_string(TunerMode mode) noexcept {
    switch (mode) {
        case TunerMode::TL: return "TL";
        case TunerMode::TLCombined: return "TL-Combined";
        case TunerMode::Syndicated: return "Syndicated";
        case TunerMode::TheoreticalExplore: return "Theoretical-Explore";
        case TunerMode::OP: return "OP";
        case TunerMode::Fixed: return "Fixed";
    }
    return "?";
}

TunerMode parse_tuner_mode(std::string_view name) {
    if (name == "TL" || name == "tl") return TunerMode::TL;
    if (name == "TL-Combined" || name == "TLCombined" || name == "tl-combined") return TunerMode::TLCombined;
    if (name == "Syndicated" || name == "syndicated") return TunerMode::Syndicated;
    if (name == "Theoretical-Explore" || name == "TheoreticalExplore" || name == "theoretical") {
        return TunerMode::TheoreticalExplore;
    }
    if (name == "OP" || name == "op") return TunerMode::OP;
    if (name == "Fixed" || name == "fixed" || name == "grid") return TunerMode::Fixed;
    throw InvalidArgument("unknown tuner mode '" + std::string(name) + "'");
}

void validate(const CandidateSet& set) {
    if (set.values.empty()) throw InvalidArgument("candidate set '" + set.name + "' is empty");
    for (double v : set.values) {
        if (!std::isfinite(v)) throw InvalidArgument("candidate set '" + set.name + "' has a non-finite value");
        if (set.name == "lambda" && !(v > 0.0)) {
            throw InvalidArgument("lambda candidates must be strictly positive");
        }
        if (set.name == "alpha" && v < 0.0) throw InvalidArgument("alpha candidates must be non-negative");
    }
}

ProductSet combined_candidates(std::span<const CandidateSet> sets) {
    if (sets.empty()) throw InvalidArgument("combined_candidates: no sets");
    std::size_t total = 1;
    for (const auto& s : sets) {
        validate(s);
        if (total > kMaxProductSize / s.size()) {
            throw SizeOverflow("combined_candidates: product exceeds " + std::to_string(kMaxProductSize));
        }
        total *= s.size();
    }
    if (total > kMaxProductSize) {
        throw SizeOverflow("combined_candidates: product exceeds " + std::to_string(kMaxProductSize));
    }
    ProductSet out;
    for (const auto& s : sets) out.names.push_back(s.name);
    out.elements.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        const auto idx = unravel(sets, flat);
        std::vector<double> elem(sets.size());
        for (std::size_t l = 0; l < sets.size(); ++l) elem[l] = sets[l].values[idx[l]];
        out.elements.push_back(std::move(elem));
    }
    return out;
}

HyperParams ChosenConfig::to_hyper_params(const HyperParams& defaults) const {
    HyperParams hp = defaults;
    for (const auto& [name, value] : assignments) {
        if (name == "alpha") {
            hp.alpha = value;
        } else if (name == "lambda") {
            hp.lambda = value;
        } else {
            hp.extras[name] = value;
        }
    }
    return hp;
}

TunerState make_tuner(TunerMode mode, std::vector<CandidateSet> sets, HyperParams fixed,
                      std::size_t horizon, std::size_t warmup, TheoryParams theory) {
    if (horizon == 0) throw InvalidArgument("make_tuner: horizon must be positive");
    for (const auto& s : sets) validate(s);

    TunerState st;
    st.mode = mode;
    st.fixed = std::move(fixed);
    st.theory = theory;
    st.warmup = warmup;
    st.horizon = horizon;

    switch (mode) {
        case TunerMode::TL:
            if (sets.size() != 1) throw InvalidArgument("TL tunes exactly one candidate set");
            st.layers.push_back(exp3_init(sets[0].size(), horizon));
            break;
        case TunerMode::TLCombined:
            if (sets.empty()) throw InvalidArgument("TL-Combined needs at least one candidate set");
            st.product = combined_candidates(sets);
            st.layers.push_back(exp3_init(st.product.size(), horizon));
            break;
        case TunerMode::Syndicated:
            if (sets.empty()) throw InvalidArgument("Syndicated needs at least one candidate set");
            for (const auto& s : sets) st.layers.push_back(exp3_init(s.size(), horizon));
            break;
        case TunerMode::OP:
            if (sets.size() != 1) throw InvalidArgument("OP tunes exactly one candidate set");
            st.op_success.assign(sets[0].size(), 0.0);
            st.op_failure.assign(sets[0].size(), 0.0);
            break;
        case TunerMode::TheoreticalExplore:
        case TunerMode::Fixed:
            break;
    }
    st.sets = std::move(sets);
    return st;
}

std::size_t warmup_step(std::size_t arms, double u) {
    if (arms == 0) throw InvalidArgument("warmup_step: no arms");
    const auto a = static_cast<std::size_t>(std::floor(u * static_cast<double>(arms)));
    return std::min(a, arms - 1);
}

ChosenConfig tl_choose(TunerState& state, double u) {
    if (state.mode != TunerMode::TL && state.mode != TunerMode::TLCombined) {
        throw InvalidArgument("tl_choose: tuner is not TL or TL-Combined");
    }
    const std::size_t i = exp3_sample(state.layers[0], u);
    state.last_choice = {i};
    if (state.mode == TunerMode::TL) return assign_from_set(state.sets[0], i);

    ChosenConfig c;
    const auto idx = unravel(state.sets, i);
    for (std::size_t l = 0; l < state.sets.size(); ++l) {
        c.assignments[state.product.names[l]] = state.product.elements[i][l];
        c.indices[state.product.names[l]] = idx[l];
    }
    return c;
}

ChosenConfig syndicated_choose(TunerState& state, std::span<const double> draws) {
    if (state.mode != TunerMode::Syndicated) throw InvalidArgument("syndicated_choose: wrong mode");
    if (draws.size() != state.layers.size()) {
        throw InvalidArgument("syndicated_choose: need one draw per layer");
    }
    ChosenConfig c;
    state.last_choice.resize(state.layers.size());
    for (std::size_t l = 0; l < state.layers.size(); ++l) {
        const std::size_t i = exp3_sample(state.layers[l], draws[l]);
        state.last_choice[l] = i;
        c.assignments[state.sets[l].name] = state.sets[l].values[i];
        c.indices[state.sets[l].name] = i;
    }
    return c;
}

std::vector<double> op_sample_posteriors(const TunerState& state, RandomStream& rng) {
    std::vector<double> out(state.op_success.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = rng.beta(state.op_success[j] + 1.0, state.op_failure[j] + 1.0);
    }
    return out;
}

ChosenConfig op_choose(TunerState& state, std::span<const double> posterior_samples) {
    if (state.mode != TunerMode::OP) throw InvalidArgument("op_choose: wrong mode");
    if (posterior_samples.size() != state.sets[0].size()) {
        throw InvalidArgument("op_choose: need one sample per candidate");
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < posterior_samples.size(); ++j) {
        if (posterior_samples[j] > posterior_samples[best]) best = j;
    }
    state.last_choice = {best};
    return assign_from_set(state.sets[0], best);
}

ChosenConfig theoretical_choose(const TheoryParams& p, std::size_t t) {
    ChosenConfig c;
    c.assignments["alpha"] = theoretical_alpha(p, t);
    c.assignments["lambda"] = p.lambda;
    return c;
}

void tuner_update(TunerState& state, double reward, double trial_u) {
    if (state.t <= state.warmup) throw InvalidArgument("tuner_update: called during warm-up");
    if (!(reward >= 0.0 && reward <= 1.0)) throw InvalidArgument("tuner_update: reward outside [0, 1]");
    switch (state.mode) {
        case TunerMode::TL:
        case TunerMode::TLCombined:
        case TunerMode::Syndicated:
            if (state.last_choice.size() != state.layers.size()) {
                throw InvalidArgument("tuner_update: no choice recorded");
            }
            for (std::size_t l = 0; l < state.layers.size(); ++l) {
                exp3_update(state.layers[l], state.last_choice[l], reward);
            }
            break;
        case TunerMode::OP: {
            if (state.last_choice.empty()) throw InvalidArgument("tuner_update: no choice recorded");
            const std::size_t j = state.last_choice[0];
            if (trial_u < reward) {
                state.op_success[j] += 1.0;
            } else {
                state.op_failure[j] += 1.0;
            }
            break;
        }
        case TunerMode::TheoreticalExplore:
        case TunerMode::Fixed:
            break;
    }
}

TunerStreams TunerStreams::derive(std::uint64_t master, std::uint64_t repeat, std::size_t layer_count) {
    TunerStreams s;
    for (std::size_t l = 0; l < layer_count; ++l) {
        s.layers.emplace_back(master, repeat, "layer-" + std::to_string(l));
    }
    s.baseline = RandomStream(master, repeat, "baseline");
    return s;
}

ChosenConfig tuner_choose(TunerState& state, std::size_t round, TunerStreams& streams) {
    state.t = round;
    switch (state.mode) {
        case TunerMode::TL:
        case TunerMode::TLCombined:
            return tl_choose(state, streams.layers.at(0).uniform());
        case TunerMode::Syndicated: {
            std::vector<double> draws(state.layers.size());
            for (std::size_t l = 0; l < draws.size(); ++l) draws[l] = streams.layers.at(l).uniform();
            return syndicated_choose(state, draws);
        }
        case TunerMode::OP: {
            const auto samples = op_sample_posteriors(state, streams.baseline);
            return op_choose(state, samples);
        }
        case TunerMode::TheoreticalExplore:
            state.last_choice.clear();
            return theoretical_choose(state.theory, round);
        case TunerMode::Fixed: {
            state.last_choice.clear();
            ChosenConfig c;
            c.assignments["alpha"] = state.fixed.alpha;
            c.assignments["lambda"] = state.fixed.lambda;
            for (const auto& [k, v] : state.fixed.extras) c.assignments[k] = v;
            return c;
        }
    }
    throw InvalidArgument("tuner_choose: unknown mode");
}

void tuner_observe(TunerState& state, double reward, TunerStreams& streams) {
    const double u = state.mode == TunerMode::OP ? streams.baseline.uniform() : 0.0;
    tuner_update(state, reward, u);
}

}  // namespace synbandit
