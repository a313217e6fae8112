#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "synbandit/errors.hpp"
#include "synbandit/exp3.hpp"
#include "synbandit/harness.hpp"
#include "synbandit/numkit.hpp"
#include "synbandit/policies.hpp"

namespace py = pybind11;
using namespace synbandit;

namespace {

std::vector<std::vector<double>> to_rows(const Matrix& m) {
    std::vector<std::vector<double>> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out[r].assign(m.row(r).begin(), m.row(r).end());
    return out;
}

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw InvalidArgument("ragged matrix rows");
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

std::string trace_csv(const RegretTrace& tr) {
    std::ostringstream out;
    write_trace(tr, out);
    return out.str();
}

template <typename T>
std::vector<T> column(const RegretTrace& tr, T TraceRecord::*field) {
    std::vector<T> out;
    out.reserve(tr.records.size());
    for (const auto& r : tr.records) out.push_back(r.*field);
    return out;
}

}  // namespace

PYBIND11_MODULE(_synbandit, m) {
    m.doc() = "Contextual bandits with online hyper-parameter tuning";

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    static py::exception<ConfigError> config_error(m, "ConfigError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            PyErr_SetString(config_error.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(error.ptr(), e.what());
        }
    });

    m.def(
        "theoretical_alpha",
        [](double sigma, double S, double delta, std::size_t d, double lambda, std::size_t t) {
            return theoretical_alpha(TheoryParams{sigma, S, delta, d, lambda}, t);
        },
        py::arg("sigma"), py::arg("S"), py::arg("delta"), py::arg("d"), py::arg("lambda_"), py::arg("t"));

    m.def("exp3_beta", &exp3_beta, py::arg("n"), py::arg("horizon"));

    m.def(
        "mahalanobis",
        [](const std::vector<double>& x, const std::vector<std::vector<double>>& a) {
            return mahalanobis(x, from_rows(a));
        },
        py::arg("x"), py::arg("a"));

    py::class_<Exp3State>(m, "Exp3")
        .def(py::init(&exp3_init), py::arg("n"), py::arg("horizon"))
        .def_readonly("n", &Exp3State::n)
        .def_readonly("beta", &Exp3State::beta)
        .def_readonly("weights", &Exp3State::weights)
        .def("probs", &exp3_probs)
        .def("sample", &exp3_sample, py::arg("u"))
        .def("update", &exp3_update, py::arg("chosen"), py::arg("reward"));

    py::class_<RidgeState>(m, "Ridge")
        .def(py::init(&ridge_init), py::arg("dim"), py::arg("lambda_"))
        .def_readonly("dim", &RidgeState::dim)
        .def_readonly("theta_hat", &RidgeState::theta_hat)
        .def_readonly("update_count", &RidgeState::update_count)
        .def_property_readonly("v", [](const RidgeState& s) { return to_rows(s.v); })
        .def_property_readonly("vinv", [](const RidgeState& s) { return to_rows(s.vinv); })
        .def(
            "update", [](RidgeState& s, const std::vector<double>& x, double y) { ridge_update(s, x, y); },
            py::arg("x"), py::arg("y"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("T", &ExperimentConfig::T)
        .def_readwrite("T1", &ExperimentConfig::T1)
        .def_readwrite("repeats", &ExperimentConfig::repeats)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("alpha_set", &ExperimentConfig::alpha_set)
        .def_readwrite("lambda_set", &ExperimentConfig::lambda_set)
        .def_readwrite("alpha", &ExperimentConfig::alpha)
        .def_readwrite("lambda_", &ExperimentConfig::lambda)
        .def_readwrite("output", &ExperimentConfig::output)
        .def_property_readonly("algo", [](const ExperimentConfig& c) { return std::string(to_string(c.algo)); })
        .def_property_readonly("tuner", [](const ExperimentConfig& c) { return std::string(to_string(c.tuner)); })
        .def_property_readonly("env_kind",
                               [](const ExperimentConfig& c) { return std::string(to_string(c.env.kind)); })
        .def_property_readonly("d", [](const ExperimentConfig& c) { return c.env.d; })
        .def_property_readonly("K", [](const ExperimentConfig& c) { return c.env.K; });

    m.def(
        "parse_config", [](const std::string& text, const std::string& base_dir) { return parse_config(text, base_dir); },
        py::arg("text"), py::arg("base_dir") = "");

    py::class_<RegretTrace>(m, "RegretTrace")
        .def_readonly("run_id", &RegretTrace::run_id)
        .def("__len__", [](const RegretTrace& t) { return t.records.size(); })
        .def_property_readonly("t", [](const RegretTrace& t) { return column(t, &TraceRecord::t); })
        .def_property_readonly("arm", [](const RegretTrace& t) { return column(t, &TraceRecord::arm); })
        .def_property_readonly("alpha", [](const RegretTrace& t) { return column(t, &TraceRecord::alpha); })
        .def_property_readonly("lambda_", [](const RegretTrace& t) { return column(t, &TraceRecord::lambda); })
        .def_property_readonly("reward", [](const RegretTrace& t) { return column(t, &TraceRecord::reward); })
        .def_property_readonly("instant_regret",
                               [](const RegretTrace& t) { return column(t, &TraceRecord::instant_regret); })
        .def_property_readonly("cum_regret", [](const RegretTrace& t) { return column(t, &TraceRecord::cum_regret); })
        .def("to_csv", &trace_csv);

    py::class_<Summary>(m, "Summary")
        .def_readonly("runs", &Summary::runs)
        .def_readonly("t", &Summary::t)
        .def_readonly("mean_cum_regret", &Summary::mean_cum_regret)
        .def_readonly("std_cum_regret", &Summary::std_cum_regret)
        .def_readonly("final_mean", &Summary::final_mean)
        .def_readonly("final_std", &Summary::final_std)
        .def_readonly("selection_counts", &Summary::selection_counts);

    m.def(
        "run_experiment",
        [](const ExperimentConfig& cfg, std::size_t repeat) {
            py::gil_scoped_release release;
            return run_experiment(cfg, repeat);
        },
        py::arg("config"), py::arg("repeat") = 0);

    m.def(
        "run_repeats",
        [](const ExperimentConfig& cfg, std::size_t threads) {
            py::gil_scoped_release release;
            return run_repeats(cfg, load_resources(cfg), threads);
        },
        py::arg("config"), py::arg("threads") = 0);

    m.def("aggregate", &aggregate, py::arg("traces"));
}
