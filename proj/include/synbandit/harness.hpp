#pragma once

// Experiment orchestration: configuration, seeded repeated runs, regret
// aggregation and CSV output.
//
// Every run is a pure function of (config, repeat index). Each repeat draws
// from named substreams of the master seed (see rng.hpp):
//
//   env-init     ground truth (theta*, fixed features)
//   env-context  per-round arm features
//   env-reward   reward noise
//   warmup       uniform arm pulls during the warm-up phase
//   policy       LinTS posterior draws
//   layer-<l>    EXP3 layer l
//   baseline     OP posterior draws and Bernoulli trials

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synbandit/envs.hpp"
#include "synbandit/policies.hpp"
#include "synbandit/tuner.hpp"

namespace synbandit {

struct EnvSpec {
    EnvKind kind = EnvKind::LinearGaussian;
    std::size_t d = 5;
    std::size_t K = 100;
    double sigma = 0.5;
    FeatureMode feature_mode = FeatureMode::Changing;
    std::filesystem::path items;  // MovieLens item features
    std::filesystem::path users;  // MovieLens user features
};

struct ExperimentConfig {
    EnvSpec env;
    PolicyKind algo = PolicyKind::LinUCB;
    TunerMode tuner = TunerMode::TL;
    std::vector<double> alpha_set{0.0, 0.01, 0.1, 1.0, 10.0};
    std::vector<double> lambda_set{0.01, 0.1, 1.0};
    // Parameters tuned by TL-Combined and Syndicated, in layer order.
    std::vector<std::string> tune{"alpha", "lambda"};
    std::map<std::string, std::vector<double>> extra_sets;
    double alpha = 1.0;   // Fixed mode
    double lambda = 1.0;  // whenever lambda is not tuned
    std::size_t T = 10000;
    std::size_t T1 = 0;
    std::size_t repeats = 10;
    std::uint64_t master_seed = 0;
    TheoryParams theory;  // d and lambda are filled from env and `lambda`
    std::filesystem::path output = "out";
    std::vector<double> sweep_alpha;   // defaults to alpha_set
    std::vector<double> sweep_lambda;  // defaults to {lambda}
    std::size_t threads = 0;           // 0 = hardware concurrency
};

// Parses a JSON document. Relative data paths resolve against `base_dir`.
// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Candidate sets the configured tuner mode operates on.
std::vector<CandidateSet> tuner_candidate_sets(const ExperimentConfig& cfg);
// Every lambda a policy may be asked to use under this config.
std::vector<double> policy_lambdas(const ExperimentConfig& cfg);

struct TraceRecord {
    std::size_t t = 0;
    std::vector<std::size_t> layer_indices;
    double alpha = 0.0;  // NaN during warm-up
    double lambda = 0.0;
    std::size_t arm = 0;
    double raw_reward = 0.0;
    double reward = 0.0;
    double instant_regret = 0.0;
    double cum_regret = 0.0;

    bool operator==(const TraceRecord&) const = default;
};

struct RegretTrace {
    std::size_t run_id = 0;
    std::vector<TraceRecord> records;
};

// Data loaded once per config (MovieLens feature files).
struct ExperimentResources {
    std::optional<Matrix> items;
    std::optional<Matrix> users;
};

ExperimentResources load_resources(const ExperimentConfig& cfg);
Environment build_environment(const ExperimentConfig& cfg, std::size_t repeat_index,
                              const ExperimentResources& res);

RegretTrace run_experiment(const ExperimentConfig& cfg, std::size_t repeat_index,
                           const ExperimentResources& res);
RegretTrace run_experiment(const ExperimentConfig& cfg, std::size_t repeat_index);

// Runs repeats [0, cfg.repeats) on up to `threads` workers (0 = cfg.threads,
// then hardware concurrency). Results are ordered by repeat index.
std::vector<RegretTrace> run_repeats(const ExperimentConfig& cfg, const ExperimentResources& res,
                                     std::size_t threads = 0);

struct Summary {
    std::size_t runs = 0;
    std::vector<std::size_t> t;
    std::vector<double> mean_cum_regret;
    std::vector<double> std_cum_regret;  // sample std, n - 1 divisor
    double final_mean = 0.0;
    double final_std = 0.0;
    // selection_counts[layer][index], summed over traces
    std::vector<std::vector<std::size_t>> selection_counts;
};

// Throws LengthMismatch when traces differ in length.
Summary aggregate(const std::vector<RegretTrace>& traces);

// printf "%.6g": 6 significant digits.
std::string format_real(double v);

void write_trace(const RegretTrace& trace, std::ostream& out);
void write_trace(const RegretTrace& trace, const std::filesystem::path& path);
void write_summary(const Summary& summary, std::ostream& out);
void write_summary(const Summary& summary, const std::filesystem::path& path);
void write_selection(const Summary& summary, const std::filesystem::path& path);

std::vector<RegretTrace> read_traces(std::istream& in);
std::vector<RegretTrace> read_traces(const std::filesystem::path& path);

struct SweepCell {
    double alpha = 0.0;
    double lambda = 1.0;
    Summary summary;
};

// Grid over fixed (alpha, lambda) values; each cell runs cfg.repeats repeats.
std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg, const ExperimentResources& res,
                                 std::size_t threads = 0);

// Output directory honoring the SYNBANDIT_OUTPUT_DIR override.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

}  // namespace synbandit
