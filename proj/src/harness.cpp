#include "synbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "synbandit/errors.hpp"

namespace synbandit {

using json = nlohmann::json;

namespace {

constexpr const char* kTraceHeader =
    "run_id,t,layer_indices,alpha,lambda,arm,raw_reward,reward,instant_regret,cum_regret";
constexpr const char* kSummaryHeader = "t,mean_cum_regret,std_cum_regret";

const std::set<std::string> kTopLevelKeys{
    "env", "algo", "tuner", "alpha_set", "lambda_set", "tune", "extra_sets", "alpha",
    "lambda", "T", "T1", "repeats", "seed", "theory", "output", "sweep", "threads"};
const std::set<std::string> kEnvKeys{"kind", "d", "K", "sigma", "features", "items", "users"};
const std::set<std::string> kTheoryKeys{"sigma", "S", "delta"};
const std::set<std::string> kSweepKeys{"alpha", "lambda"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [k, _] : obj.items()) {
        if (!allowed.count(k)) throw ConfigError(prefix + k, "unknown key");
    }
}

std::size_t get_count(const json& obj, const char* key, const std::string& name, std::size_t min) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(name, "expected an integer");
    const auto n = v.get<long long>();
    if (n < static_cast<long long>(min)) {
        throw ConfigError(name, "must be at least " + std::to_string(min));
    }
    return static_cast<std::size_t>(n);
}

double get_real(const json& obj, const char* key, const std::string& name) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(name, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(name, "must be finite");
    return x;
}

std::string get_string(const json& obj, const char* key, const std::string& name) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(name, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_reals(const json& v, const std::string& name) {
    if (!v.is_array() || v.empty()) throw ConfigError(name, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(name, "expected a non-empty array of numbers");
        const double x = e.get<double>();
        if (!std::isfinite(x)) throw ConfigError(name, "values must be finite");
        out.push_back(x);
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

bool is_linear(EnvKind k) { return k == EnvKind::LinearGaussian || k == EnvKind::MovielensLinear; }

std::string join_indices(const std::vector<std::size_t>& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(idx[i]);
    }
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_real(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw InvalidData("malformed number '" + s + "'");
    return v;
}

std::size_t parse_index(const std::string& s) {
    char* end = nullptr;
    const auto v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw InvalidData("malformed index '" + s + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", e.what());
    }
    if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
    reject_unknown(doc, kTopLevelKeys, "");

    ExperimentConfig cfg;
    if (!doc.contains("env")) throw ConfigError("env", "required");
    if (!doc.contains("algo")) throw ConfigError("algo", "required");
    if (!doc.contains("tuner")) throw ConfigError("tuner", "required");

    const json& env = doc["env"];
    if (!env.is_object()) throw ConfigError("env", "expected an object");
    reject_unknown(env, kEnvKeys, "env.");
    try {
        if (!env.contains("kind")) throw ConfigError("env.kind", "required");
        cfg.env.kind = parse_env_kind(get_string(env, "kind", "env.kind"));
    } catch (const InvalidArgument& e) {
        throw ConfigError("env.kind", e.what());
    }
    if (env.contains("d")) cfg.env.d = get_count(env, "d", "env.d", 1);
    if (env.contains("K")) cfg.env.K = get_count(env, "K", "env.K", 1);
    if (env.contains("sigma")) {
        cfg.env.sigma = get_real(env, "sigma", "env.sigma");
        if (cfg.env.sigma < 0.0) throw ConfigError("env.sigma", "must be non-negative");
    }
    if (env.contains("features")) {
        try {
            cfg.env.feature_mode = parse_feature_mode(get_string(env, "features", "env.features"));
        } catch (const InvalidArgument& e) {
            throw ConfigError("env.features", e.what());
        }
    }
    if (env.contains("items")) cfg.env.items = resolve(base_dir, get_string(env, "items", "env.items"));
    if (env.contains("users")) cfg.env.users = resolve(base_dir, get_string(env, "users", "env.users"));
    const bool movielens = cfg.env.kind == EnvKind::MovielensLinear || cfg.env.kind == EnvKind::MovielensLogistic;
    if (movielens && cfg.env.items.empty()) throw ConfigError("env.items", "required for MovieLens environments");
    if (movielens && cfg.env.users.empty()) throw ConfigError("env.users", "required for MovieLens environments");
    if (movielens) cfg.env.K = env.contains("K") ? cfg.env.K : 1000;

    try {
        cfg.algo = parse_policy_kind(get_string(doc, "algo", "algo"));
    } catch (const InvalidArgument& e) {
        throw ConfigError("algo", e.what());
    }
    try {
        cfg.tuner = parse_tuner_mode(get_string(doc, "tuner", "tuner"));
    } catch (const InvalidArgument& e) {
        throw ConfigError("tuner", e.what());
    }

    if (doc.contains("alpha_set")) cfg.alpha_set = get_reals(doc["alpha_set"], "alpha_set");
    for (double a : cfg.alpha_set) {
        if (a < 0.0) throw ConfigError("alpha_set", "alpha candidates must be non-negative");
    }
    if (doc.contains("lambda_set")) cfg.lambda_set = get_reals(doc["lambda_set"], "lambda_set");
    for (double l : cfg.lambda_set) {
        if (!(l > 0.0)) throw ConfigError("lambda_set", "lambda candidates must be strictly positive");
    }
    if (doc.contains("extra_sets")) {
        const json& ex = doc["extra_sets"];
        if (!ex.is_object()) throw ConfigError("extra_sets", "expected an object");
        for (const auto& [name, values] : ex.items()) {
            if (name == "alpha" || name == "lambda") {
                throw ConfigError("extra_sets." + name, "use alpha_set / lambda_set");
            }
            cfg.extra_sets[name] = get_reals(values, "extra_sets." + name);
        }
    }
    if (doc.contains("tune")) {
        const json& tv = doc["tune"];
        if (!tv.is_array() || tv.empty()) throw ConfigError("tune", "expected a non-empty array of names");
        cfg.tune.clear();
        std::set<std::string> seen;
        for (const auto& e : tv) {
            if (!e.is_string()) throw ConfigError("tune", "expected parameter names");
            const auto name = e.get<std::string>();
            if (name != "alpha" && name != "lambda" && !cfg.extra_sets.count(name)) {
                throw ConfigError("tune", "no candidate set for '" + name + "'");
            }
            if (!seen.insert(name).second) throw ConfigError("tune", "duplicate '" + name + "'");
            cfg.tune.push_back(name);
        }
    }
    if (doc.contains("alpha")) {
        cfg.alpha = get_real(doc, "alpha", "alpha");
        if (cfg.alpha < 0.0) throw ConfigError("alpha", "must be non-negative");
    }
    if (doc.contains("lambda")) {
        cfg.lambda = get_real(doc, "lambda", "lambda");
        if (!(cfg.lambda > 0.0)) throw ConfigError("lambda", "must be strictly positive");
    }
    if (doc.contains("T")) cfg.T = get_count(doc, "T", "T", 1);
    if (doc.contains("T1")) cfg.T1 = get_count(doc, "T1", "T1", 0);
    if (cfg.T1 > cfg.T) throw ConfigError("T1", "warm-up longer than the horizon");
    if (doc.contains("repeats")) cfg.repeats = get_count(doc, "repeats", "repeats", 1);
    if (doc.contains("seed")) cfg.master_seed = get_count(doc, "seed", "seed", 0);
    if (doc.contains("threads")) cfg.threads = get_count(doc, "threads", "threads", 0);
    if (doc.contains("output")) cfg.output = get_string(doc, "output", "output");

    cfg.theory.sigma = is_linear(cfg.env.kind) ? cfg.env.sigma : 0.5;
    if (cfg.env.kind == EnvKind::MovielensLinear) cfg.theory.sigma = 1.0;
    cfg.theory.S = 1.0;
    cfg.theory.delta = 0.01;
    if (doc.contains("theory")) {
        const json& th = doc["theory"];
        if (!th.is_object()) throw ConfigError("theory", "expected an object");
        reject_unknown(th, kTheoryKeys, "theory.");
        if (th.contains("sigma")) cfg.theory.sigma = get_real(th, "sigma", "theory.sigma");
        if (th.contains("S")) cfg.theory.S = get_real(th, "S", "theory.S");
        if (th.contains("delta")) cfg.theory.delta = get_real(th, "delta", "theory.delta");
        if (cfg.theory.sigma < 0.0) throw ConfigError("theory.sigma", "must be non-negative");
        if (cfg.theory.S < 0.0) throw ConfigError("theory.S", "must be non-negative");
        if (!(cfg.theory.delta > 0.0 && cfg.theory.delta < 1.0)) {
            throw ConfigError("theory.delta", "must lie in (0, 1)");
        }
    }
    cfg.theory.d = cfg.env.d;
    cfg.theory.lambda = cfg.lambda;

    if (doc.contains("sweep")) {
        const json& sw = doc["sweep"];
        if (!sw.is_object()) throw ConfigError("sweep", "expected an object");
        reject_unknown(sw, kSweepKeys, "sweep.");
        if (sw.contains("alpha")) cfg.sweep_alpha = get_reals(sw["alpha"], "sweep.alpha");
        if (sw.contains("lambda")) cfg.sweep_lambda = get_reals(sw["lambda"], "sweep.lambda");
        for (double a : cfg.sweep_alpha) {
            if (a < 0.0) throw ConfigError("sweep.alpha", "must be non-negative");
        }
        for (double l : cfg.sweep_lambda) {
            if (!(l > 0.0)) throw ConfigError("sweep.lambda", "must be strictly positive");
        }
    }
    if (cfg.sweep_alpha.empty()) cfg.sweep_alpha = cfg.alpha_set;
    if (cfg.sweep_lambda.empty()) cfg.sweep_lambda = {cfg.lambda};
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::vector<CandidateSet> tuner_candidate_sets(const ExperimentConfig& cfg) {
    switch (cfg.tuner) {
        case TunerMode::TL:
        case TunerMode::OP:
            return {CandidateSet{"alpha", cfg.alpha_set}};
        case TunerMode::TLCombined:
        case TunerMode::Syndicated: {
            std::vector<CandidateSet> sets;
            for (const auto& name : cfg.tune) {
                if (name == "alpha") {
                    sets.push_back({name, cfg.alpha_set});
                } else if (name == "lambda") {
                    sets.push_back({name, cfg.lambda_set});
                } else {
                    sets.push_back({name, cfg.extra_sets.at(name)});
                }
            }
            return sets;
        }
        case TunerMode::TheoreticalExplore:
        case TunerMode::Fixed:
            return {};
    }
    return {};
}

std::vector<double> policy_lambdas(const ExperimentConfig& cfg) {
    const bool tunes_lambda =
        (cfg.tuner == TunerMode::TLCombined || cfg.tuner == TunerMode::Syndicated) &&
        std::find(cfg.tune.begin(), cfg.tune.end(), "lambda") != cfg.tune.end();
    if (!tunes_lambda) return {cfg.lambda};
    std::vector<double> out;
    for (double l : cfg.lambda_set) {
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    return out;
}

ExperimentResources load_resources(const ExperimentConfig& cfg) {
    ExperimentResources res;
    if (cfg.env.kind == EnvKind::MovielensLinear || cfg.env.kind == EnvKind::MovielensLogistic) {
        res.items = read_features(cfg.env.items);
        res.users = read_features(cfg.env.users);
    }
    return res;
}

Environment build_environment(const ExperimentConfig& cfg, std::size_t repeat_index,
                              const ExperimentResources& res) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, repeat_index, "env-init");
    switch (cfg.env.kind) {
        case EnvKind::LinearGaussian:
            return gen_linear_env(seed, cfg.env.d, cfg.env.K, cfg.env.sigma, cfg.env.feature_mode);
        case EnvKind::LogisticBernoulli:
            return gen_logistic_env(seed, cfg.env.d, cfg.env.K, cfg.env.feature_mode);
        case EnvKind::MovielensLinear:
        case EnvKind::MovielensLogistic:
            if (!res.items || !res.users) throw InvalidData("MovieLens features not loaded");
            return movielens_env(*res.items, *res.users, seed, cfg.env.K, cfg.env.kind);
    }
    throw InvalidArgument("build_environment: unknown kind");
}

RegretTrace run_experiment(const ExperimentConfig& cfg, std::size_t repeat_index,
                           const ExperimentResources& res) {
    const std::uint64_t m = cfg.master_seed;
    const Environment env = build_environment(cfg, repeat_index, res);
    if (env.d != cfg.env.d && cfg.env.kind != EnvKind::MovielensLinear &&
        cfg.env.kind != EnvKind::MovielensLogistic) {
        throw InvalidArgument("environment dimension mismatch");
    }

    RandomStream context_rng(m, repeat_index, "env-context");
    RandomStream reward_rng(m, repeat_index, "env-reward");
    RandomStream warmup_rng(m, repeat_index, "warmup");
    PolicyState policy(cfg.algo, env.d, policy_lambdas(cfg), RandomStream(m, repeat_index, "policy"));

    HyperParams fixed;
    fixed.alpha = cfg.alpha;
    fixed.lambda = cfg.lambda;
    TheoryParams theory = cfg.theory;
    theory.d = env.d;
    theory.lambda = cfg.lambda;
    TunerState tuner = make_tuner(cfg.tuner, tuner_candidate_sets(cfg), fixed, cfg.T, cfg.T1, theory);
    TunerStreams streams = TunerStreams::derive(m, repeat_index, tuner.layers.size());

    RegretTrace trace;
    trace.run_id = repeat_index;
    trace.records.reserve(cfg.T);
    double cum = 0.0;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (std::size_t t = 1; t <= cfg.T; ++t) {
        try {
            const ContextSet ctx = make_context(env, t, context_rng);
            TraceRecord rec;
            rec.t = t;
            std::size_t arm = 0;
            if (t <= cfg.T1) {
                arm = warmup_step(ctx.arms(), warmup_rng.uniform());
                rec.alpha = nan;
                rec.lambda = nan;
            } else {
                const ChosenConfig chosen = tuner_choose(tuner, t, streams);
                const HyperParams hp = chosen.to_hyper_params(fixed);
                arm = policy_select(policy, ctx, hp);
                rec.layer_indices = tuner.last_choice;
                rec.alpha = hp.alpha;
                rec.lambda = hp.lambda;
            }
            const RoundOutcome out = step(env, ctx, arm, reward_rng);
            policy_update(policy, ctx.arm(arm), out.reward);
            if (t > cfg.T1) tuner_observe(tuner, out.reward, streams);

            cum += out.instant_regret;
            rec.arm = arm;
            rec.raw_reward = out.raw_reward;
            rec.reward = out.reward;
            rec.instant_regret = out.instant_regret;
            rec.cum_regret = cum;
            trace.records.push_back(std::move(rec));
        } catch (const Error& e) {
            throw Error("repeat " + std::to_string(repeat_index) + ", round " + std::to_string(t) +
                        ": " + e.what());
        }
    }
    return trace;
}

RegretTrace run_experiment(const ExperimentConfig& cfg, std::size_t repeat_index) {
    return run_experiment(cfg, repeat_index, load_resources(cfg));
}

std::vector<RegretTrace> run_repeats(const ExperimentConfig& cfg, const ExperimentResources& res,
                                     std::size_t threads) {
    if (threads == 0) threads = cfg.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, cfg.repeats);

    std::vector<RegretTrace> out(cfg.repeats);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= cfg.repeats) return;
            try {
                out[r] = run_experiment(cfg, r, res);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(cfg.repeats);
                return;
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

Summary aggregate(const std::vector<RegretTrace>& traces) {
    if (traces.empty()) throw InvalidArgument("aggregate: no traces");
    const std::size_t len = traces.front().records.size();
    for (const auto& tr : traces) {
        if (tr.records.size() != len) {
            throw LengthMismatch("aggregate: trace " + std::to_string(tr.run_id) + " has " +
                                 std::to_string(tr.records.size()) + " rounds, expected " +
                                 std::to_string(len));
        }
    }
    Summary s;
    s.runs = traces.size();
    s.t.resize(len);
    s.mean_cum_regret.assign(len, 0.0);
    s.std_cum_regret.assign(len, 0.0);
    const double n = static_cast<double>(traces.size());
    for (std::size_t i = 0; i < len; ++i) {
        s.t[i] = traces.front().records[i].t;
        double sum = 0.0;
        for (const auto& tr : traces) sum += tr.records[i].cum_regret;
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& tr : traces) {
            const double e = tr.records[i].cum_regret - mean;
            ss += e * e;
        }
        s.mean_cum_regret[i] = mean;
        s.std_cum_regret[i] = traces.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
    if (len > 0) {
        s.final_mean = s.mean_cum_regret.back();
        s.final_std = s.std_cum_regret.back();
    }
    for (const auto& tr : traces) {
        for (const auto& rec : tr.records) {
            if (rec.layer_indices.size() > s.selection_counts.size()) {
                s.selection_counts.resize(rec.layer_indices.size());
            }
            for (std::size_t l = 0; l < rec.layer_indices.size(); ++l) {
                auto& counts = s.selection_counts[l];
                if (rec.layer_indices[l] >= counts.size()) counts.resize(rec.layer_indices[l] + 1, 0);
                ++counts[rec.layer_indices[l]];
            }
        }
    }
    return s;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_trace(const RegretTrace& trace, std::ostream& out) {
    out << kTraceHeader << '\n';
    for (const auto& r : trace.records) {
        out << trace.run_id << ',' << r.t << ',' << join_indices(r.layer_indices) << ','
            << format_real(r.alpha) << ',' << format_real(r.lambda) << ',' << r.arm << ','
            << format_real(r.raw_reward) << ',' << format_real(r.reward) << ','
            << format_real(r.instant_regret) << ',' << format_real(r.cum_regret) << '\n';
    }
}

void write_trace(const RegretTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_trace(trace, out);
    if (!out) throw IoError("write failed for " + path.string());
}

void write_summary(const Summary& summary, std::ostream& out) {
    out << kSummaryHeader << '\n';
    for (std::size_t i = 0; i < summary.t.size(); ++i) {
        out << summary.t[i] << ',' << format_real(summary.mean_cum_regret[i]) << ','
            << format_real(summary.std_cum_regret[i]) << '\n';
    }
}

void write_summary(const Summary& summary, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_summary(summary, out);
    if (!out) throw IoError("write failed for " + path.string());
}

void write_selection(const Summary& summary, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "layer,index,count\n";
    for (std::size_t l = 0; l < summary.selection_counts.size(); ++l) {
        for (std::size_t i = 0; i < summary.selection_counts[l].size(); ++i) {
            out << l << ',' << i << ',' << summary.selection_counts[l][i] << '\n';
        }
    }
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<RegretTrace> read_traces(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidData("trace: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceHeader) throw InvalidData("trace: unexpected header '" + line + "'");

    std::vector<RegretTrace> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) {
            throw InvalidData("trace line " + std::to_string(lineno) + ": expected 10 fields");
        }
        const std::size_t run = parse_index(f[0]);
        if (out.empty() || out.back().run_id != run) {
            out.push_back(RegretTrace{run, {}});
        }
        TraceRecord r;
        r.t = parse_index(f[1]);
        if (!f[2].empty()) {
            for (const auto& s : split(f[2], ';')) r.layer_indices.push_back(parse_index(s));
        }
        r.alpha = parse_real(f[3]);
        r.lambda = parse_real(f[4]);
        r.arm = parse_index(f[5]);
        r.raw_reward = parse_real(f[6]);
        r.reward = parse_real(f[7]);
        r.instant_regret = parse_real(f[8]);
        r.cum_regret = parse_real(f[9]);
        out.back().records.push_back(std::move(r));
    }
    return out;
}

std::vector<RegretTrace> read_traces(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_traces(in);
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg, const ExperimentResources& res,
                                 std::size_t threads) {
    std::vector<SweepCell> cells;
    for (double a : cfg.sweep_alpha) {
        for (double l : cfg.sweep_lambda) {
            ExperimentConfig cell = cfg;
            cell.tuner = TunerMode::Fixed;
            cell.alpha = a;
            cell.lambda = l;
            cell.theory.lambda = l;
            cells.push_back({a, l, aggregate(run_repeats(cell, res, threads))});
        }
    }
    return cells;
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("SYNBANDIT_OUTPUT_DIR"); env && *env) return env;
    return cfg.output;
}

}  // namespace synbandit
