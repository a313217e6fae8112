// synbandit: run, sweep and summarize hyper-parameter tuning experiments.
//
//   synbandit run <config.json>
//   synbandit sweep <config.json>
//   synbandit prep-movielens <ratings> <outdir> [--d 20 --reg 0.1 --iters 30 --seed N]
//   synbandit report <trace-dir> [--out DIR]
//
// Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.
// SYNBANDIT_OUTPUT_DIR overrides the configured output directory.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "synbandit/errors.hpp"
#include "synbandit/harness.hpp"

namespace fs = std::filesystem;
using namespace synbandit;

namespace {

constexpr int kConfigExit = 1;
constexpr int kRuntimeExit = 2;

std::string cell_name(double alpha, double lambda) {
    return "cell_a" + format_real(alpha) + "_l" + format_real(lambda);
}

void print_summary(const std::string& label, const Summary& s) {
    std::printf("%s: runs=%zu final mean cum regret=%s std=%s\n", label.c_str(), s.runs,
                format_real(s.final_mean).c_str(), format_real(s.final_std).c_str());
}

int cmd_run(const fs::path& config_path, std::size_t threads) {
    const ExperimentConfig cfg = load_config(config_path);
    const fs::path out = resolve_output_dir(cfg);
    fs::create_directories(out);
    const auto res = load_resources(cfg);

    const auto start = std::chrono::steady_clock::now();
    const auto traces = run_repeats(cfg, res, threads);
    for (const auto& tr : traces) {
        write_trace(tr, out / ("trace_" + std::to_string(tr.run_id) + ".csv"));
    }
    const Summary s = aggregate(traces);
    write_summary(s, out / "summary.csv");
    write_selection(s, out / "selection.csv");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    print_summary(std::string(to_string(cfg.algo)) + " / " + std::string(to_string(cfg.tuner)), s);
    std::printf("wrote %zu traces to %s (%.1fs)\n", traces.size(), out.string().c_str(), secs);
    return 0;
}

int cmd_sweep(const fs::path& config_path, std::size_t threads) {
    const ExperimentConfig cfg = load_config(config_path);
    const fs::path out = resolve_output_dir(cfg);
    fs::create_directories(out);
    const auto res = load_resources(cfg);

    const auto cells = run_sweep(cfg, res, threads);
    std::ofstream table(out / "sweep.csv");
    if (!table) throw IoError("cannot write " + (out / "sweep.csv").string());
    table << "alpha,lambda,final_mean_cum_regret,final_std_cum_regret\n";
    const SweepCell* best = nullptr;
    for (const auto& c : cells) {
        const fs::path dir = out / cell_name(c.alpha, c.lambda);
        fs::create_directories(dir);
        write_summary(c.summary, dir / "summary.csv");
        table << format_real(c.alpha) << ',' << format_real(c.lambda) << ','
              << format_real(c.summary.final_mean) << ',' << format_real(c.summary.final_std) << '\n';
        print_summary("alpha=" + format_real(c.alpha) + " lambda=" + format_real(c.lambda), c.summary);
        if (!best || c.summary.final_mean < best->summary.final_mean) best = &c;
    }
    if (best) {
        std::printf("best: alpha=%s lambda=%s mean=%s (std %s)\n", format_real(best->alpha).c_str(),
                    format_real(best->lambda).c_str(), format_real(best->summary.final_mean).c_str(),
                    format_real(best->summary.final_std).c_str());
    }
    return 0;
}

int cmd_prep(const fs::path& ratings_path, const fs::path& outdir, const AlsOptions& opts) {
    const auto ratings = read_ratings(ratings_path);
    std::vector<double> objective;
    const Factorization f = als_factorize(ratings, opts, &objective);
    fs::create_directories(outdir);
    write_features(outdir / "users.txt", f.users);
    write_features(outdir / "items.txt", f.items);

    const Matrix normalized = normalize_rows(f.items);
    double max_norm = 0.0;
    for (std::size_t r = 0; r < normalized.rows(); ++r) max_norm = std::max(max_norm, norm2(normalized.row(r)));
    std::printf("ratings=%zu users=%zu items=%zu d=%zu rmse=%s objective=%s max normalized item norm=%s\n",
                ratings.size(), f.users.rows(), f.items.rows(), opts.d,
                format_real(als_rmse(ratings, f)).c_str(),
                format_real(objective.empty() ? 0.0 : objective.back()).c_str(),
                format_real(max_norm).c_str());
    return 0;
}

int cmd_report(const fs::path& trace_dir, fs::path out) {
    if (!fs::is_directory(trace_dir)) throw IoError("not a directory: " + trace_dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(trace_dir)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && name.rfind("trace_", 0) == 0 && e.path().extension() == ".csv") {
            files.push_back(e.path());
        }
    }
    if (files.empty()) throw IoError("no trace_*.csv files in " + trace_dir.string());
    std::sort(files.begin(), files.end());

    std::vector<RegretTrace> traces;
    for (const auto& f : files) {
        auto part = read_traces(f);
        traces.insert(traces.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    std::sort(traces.begin(), traces.end(), [](const auto& a, const auto& b) { return a.run_id < b.run_id; });
    const Summary s = aggregate(traces);
    if (out.empty()) out = trace_dir;
    fs::create_directories(out);
    write_summary(s, out / "summary.csv");
    write_selection(s, out / "selection.csv");
    print_summary(trace_dir.string(), s);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online hyper-parameter tuning for contextual bandits"};
    app.require_subcommand(1);

    fs::path config_path;
    std::size_t threads = 0;
    auto* run = app.add_subcommand("run", "execute a config and write traces and a summary");
    run->add_option("config", config_path, "JSON config")->required();
    run->add_option("--threads", threads, "worker threads for repeats (0 = auto)");

    auto* sweep = app.add_subcommand("sweep", "grid over fixed hyper-parameter values");
    sweep->add_option("config", config_path, "JSON config")->required();
    sweep->add_option("--threads", threads, "worker threads for repeats (0 = auto)");

    fs::path ratings_path;
    fs::path prep_out;
    AlsOptions als;
    auto* prep = app.add_subcommand("prep-movielens", "factorize a ratings file into feature files");
    prep->add_option("ratings", ratings_path, "ratings file (user item rating [timestamp])")->required();
    prep->add_option("outdir", prep_out, "output directory")->required();
    prep->add_option("--d", als.d, "latent dimension")->check(CLI::PositiveNumber);
    prep->add_option("--reg", als.reg, "ridge penalty")->check(CLI::PositiveNumber);
    prep->add_option("--iters", als.iters, "ALS sweeps");
    prep->add_option("--seed", als.seed, "initialization seed");

    fs::path trace_dir;
    fs::path report_out;
    auto* report = app.add_subcommand("report", "aggregate trace CSVs into a plot-ready summary");
    report->add_option("trace-dir", trace_dir, "directory holding trace_*.csv")->required();
    report->add_option("--out", report_out, "output directory (defaults to trace-dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigExit;
    }

    try {
        if (*run) return cmd_run(config_path, threads);
        if (*sweep) return cmd_sweep(config_path, threads);
        if (*prep) return cmd_prep(ratings_path, prep_out, als);
        if (*report) return cmd_report(trace_dir, report_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeExit;
    }
    return kConfigExit;
}
