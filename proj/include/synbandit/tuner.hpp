#pragma once

// Hyper-parameter tuning strategies layered over a contextual bandit.
//
//   TL                 one EXP3 layer over the alpha candidates
//   TLCombined         one EXP3 layer over the cartesian product of all sets
//   Syndicated         one EXP3 layer per candidate set, all fed the same reward
//   TheoreticalExplore alpha from the confidence-radius formula each round
//   OP                 Beta-Bernoulli Thompson sampling over alpha candidates
//   Fixed              constant configuration (grid-search cells)

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synbandit/exp3.hpp"
#include "synbandit/policies.hpp"
#include "synbandit/rng.hpp"

namespace synbandit {

enum class TunerMode { TL, TLCombined, Syndicated, TheoreticalExplore, OP, Fixed };

std::string_view to_string(TunerMode mode) noexcept;
TunerMode parse_tuner_mode(std::string_view name);

struct CandidateSet {
    std::string name;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

// Throws InvalidArgument for empty or non-finite sets and for non-positive
// "lambda" candidates.
void validate(const CandidateSet& set);

// Cartesian product of candidate sets; the first set varies slowest.
struct ProductSet {
    std::vector<std::string> names;
    std::vector<std::vector<double>> elements;

    std::size_t size() const noexcept { return elements.size(); }
};

inline constexpr std::size_t kMaxProductSize = 1'000'000;

// Throws SizeOverflow when the product exceeds kMaxProductSize.
ProductSet combined_candidates(std::span<const CandidateSet> sets);

struct ChosenConfig {
    std::map<std::string, double> assignments;
    std::map<std::string, std::size_t> indices;

    // alpha and lambda come from the assignments, falling back to `defaults`;
    // any other names go to extras.
    HyperParams to_hyper_params(const HyperParams& defaults) const;
};

struct TunerState {
    TunerMode mode = TunerMode::TL;
    std::vector<CandidateSet> sets;
    ProductSet product;                // TLCombined only
    std::vector<Exp3State> layers;
    std::vector<double> op_success;    // OP only
    std::vector<double> op_failure;
    HyperParams fixed;                 // values for parameters nobody tunes
    TheoryParams theory;               // TheoreticalExplore only
    std::size_t warmup = 0;            // T1
    std::size_t horizon = 1;           // T
    std::size_t t = 1;
    std::vector<std::size_t> last_choice;
};

// TL and OP expect exactly one set (the alpha candidates); Syndicated and
// TLCombined take any number L >= 1. Baselines ignore `sets` beyond OP's.
TunerState make_tuner(TunerMode mode, std::vector<CandidateSet> sets, HyperParams fixed,
                      std::size_t horizon, std::size_t warmup, TheoryParams theory = {});

// Uniform arm in [0, K) from a draw u in [0, 1).
std::size_t warmup_step(std::size_t arms, double u);

ChosenConfig tl_choose(TunerState& state, double u);
ChosenConfig syndicated_choose(TunerState& state, std::span<const double> draws);
ChosenConfig op_choose(TunerState& state, std::span<const double> posterior_samples);
ChosenConfig theoretical_choose(const TheoryParams& p, std::size_t t);

// One Beta(success + 1, failure + 1) draw per OP candidate.
std::vector<double> op_sample_posteriors(const TunerState& state, RandomStream& rng);

// `trial_u` drives OP's Bernoulli trial (success iff trial_u < reward).
void tuner_update(TunerState& state, double reward, double trial_u = 0.0);

// Named random substreams consumed by the tuner: "layer-<l>" for EXP3 layer l
// (TL and TLCombined use layer-0) and "baseline" for OP.
struct TunerStreams {
    std::vector<RandomStream> layers;
    RandomStream baseline;

    static TunerStreams derive(std::uint64_t master, std::uint64_t repeat, std::size_t layer_count);
};

// Mode dispatch over the *_choose functions; sets state.t = round first.
ChosenConfig tuner_choose(TunerState& state, std::size_t round, TunerStreams& streams);
void tuner_observe(TunerState& state, double reward, TunerStreams& streams);

}  // namespace synbandit
