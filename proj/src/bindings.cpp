#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "shufflecast/errors.hpp"
#include "shufflecast/ingest.hpp"
#include "shufflecast/metrics.hpp"
#include "shufflecast/model.hpp"
#include "shufflecast/pipeline.hpp"
#include "shufflecast/sim.hpp"

namespace py = pybind11;
using namespace shufflecast;

namespace {

std::vector<double> to_vec(const py::sequence& seq) {
    std::vector<double> out;
    out.reserve(seq.size());
    for (const auto& item : seq) out.push_back(item.cast<double>());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shuffle-phase network load modeling for MapReduce jobs";

    py::register_exception<Error>(m, "ShufflecastError", PyExc_ValueError);

    py::class_<ParameterVector>(m, "ParameterVector")
        .def(py::init<std::vector<int>>())
        .def(py::init<int, int>(), py::arg("maps"), py::arg("reduces"))
        .def_readwrite("values", &ParameterVector::values)
        .def("__repr__", [](const ParameterVector& p) {
            std::string s = "ParameterVector([";
            for (std::size_t i = 0; i < p.values.size(); ++i) {
                if (i) s += ", ";
                s += std::to_string(p.values[i]);
            }
            return s + "])";
        })
        .def(py::self == py::self)
        .def(py::self < py::self);

    py::class_<Observation>(m, "Observation")
        .def(py::init([](const ParameterVector& config, double load) {
                 return Observation{config, load};
             }),
             py::arg("config"), py::arg("load"))
        .def_readwrite("config", &Observation::config)
        .def_readwrite("load", &Observation::load);

    py::class_<ProfileDataset>(m, "ProfileDataset")
        .def(py::init<>())
        .def_readwrite("observations", &ProfileDataset::observations)
        .def_readwrite("input_bytes", &ProfileDataset::input_bytes)
        .def_readwrite("meta", &ProfileDataset::meta);

    py::class_<RunRecord>(m, "RunRecord")
        .def(py::init<>())
        .def_readwrite("app", &RunRecord::app)
        .def_readwrite("num_maps", &RunRecord::num_maps)
        .def_readwrite("num_reduces", &RunRecord::num_reduces)
        .def_readwrite("input_bytes", &RunRecord::input_bytes)
        .def_readwrite("run_index", &RunRecord::run_index)
        .def_readwrite("shuffle_bytes", &RunRecord::shuffle_bytes);

    py::class_<FitMeta>(m, "FitMeta")
        .def_readonly("num_observations", &FitMeta::num_observations)
        .def_readonly("residual_sum_squares", &FitMeta::residual_sum_squares)
        .def_readonly("condition", &FitMeta::condition);

    py::class_<PolynomialModel>(m, "PolynomialModel")
        .def_readonly("degree", &PolynomialModel::degree)
        .def_readonly("num_params", &PolynomialModel::num_params)
        .def_readonly("coefficients", &PolynomialModel::coefficients)
        .def_readonly("param_names", &PolynomialModel::param_names)
        .def_readonly("fit_meta", &PolynomialModel::fit_meta);

    m.def("build_design_matrix",
          [](const std::vector<ParameterVector>& configs, int degree) {
              const DesignMatrix dm = build_design_matrix(configs, degree);
              std::vector<std::vector<double>> rows;
              for (Eigen::Index i = 0; i < dm.entries.rows(); ++i) {
                  std::vector<double> row;
                  for (Eigen::Index j = 0; j < dm.entries.cols(); ++j) {
                      row.push_back(dm.entries(i, j));
                  }
                  rows.push_back(std::move(row));
              }
              return rows;
          },
          py::arg("configs"), py::arg("degree"));
    m.def("fit",
          [](const ProfileDataset& dataset, int degree, bool standardize) {
              return fit(dataset, degree, FitOptions{standardize});
          },
          py::arg("dataset"), py::arg("degree") = 3, py::arg("standardize") = true);
    m.def("predict", &predict, py::arg("model"), py::arg("config"));
    m.def("save_model", &save_model, py::arg("model"));
    m.def("load_model", &load_model, py::arg("text"));

    m.def("mape", [](const py::sequence& a, const py::sequence& p) { return mape(to_vec(a), to_vec(p)); });
    m.def("pred25", [](const py::sequence& a, const py::sequence& p) { return pred25(to_vec(a), to_vec(p)); });
    m.def("rmse", [](const py::sequence& a, const py::sequence& p) { return rmse(to_vec(a), to_vec(p)); });
    m.def("r_squared", [](const py::sequence& a, const py::sequence& p) { return r_squared(to_vec(a), to_vec(p)); });

    py::class_<Residual>(m, "Residual")
        .def_readonly("actual", &Residual::actual)
        .def_readonly("predicted", &Residual::predicted)
        .def_readonly("relative_error", &Residual::relative_error);

    py::class_<EvaluationReport>(m, "EvaluationReport")
        .def_readonly("mape", &EvaluationReport::mape)
        .def_readonly("pred25", &EvaluationReport::pred25)
        .def_readonly("rmse", &EvaluationReport::rmse)
        .def_readonly("r_squared", &EvaluationReport::r_squared)
        .def_readonly("residuals", &EvaluationReport::residuals)
        .def_readonly("num_observations", &EvaluationReport::num_observations);

    m.def("evaluate", &evaluate, py::arg("model"), py::arg("test"));
    m.def("report_table", &report_table, py::arg("report"), py::arg("label"));
    m.def("report_json", &report_json, py::arg("report"), py::arg("label"));

    py::enum_<Placement>(m, "Placement")
        .value("ROUND_ROBIN", Placement::RoundRobin)
        .value("RANDOM", Placement::Random);

    py::class_<ClusterSpec>(m, "ClusterSpec")
        .def(py::init<>())
        .def_readwrite("num_nodes", &ClusterSpec::num_nodes)
        .def_readwrite("placement", &ClusterSpec::placement)
        .def_readwrite("rack_map", &ClusterSpec::rack_map)
        .def_readwrite("cross_rack_weight", &ClusterSpec::cross_rack_weight);

    py::class_<WorkloadProfile>(m, "WorkloadProfile")
        .def(py::init<>())
        .def_readwrite("name", &WorkloadProfile::name)
        .def_readwrite("input_bytes", &WorkloadProfile::input_bytes)
        .def_readwrite("map_output_ratio", &WorkloadProfile::map_output_ratio)
        .def_readwrite("partition_skew", &WorkloadProfile::partition_skew)
        .def_readwrite("per_pair_overhead_bytes", &WorkloadProfile::per_pair_overhead_bytes)
        .def_readwrite("noise_sigma", &WorkloadProfile::noise_sigma);

    py::class_<GridResult>(m, "GridResult")
        .def_readonly("dataset", &GridResult::dataset)
        .def_readonly("runs", &GridResult::runs);

    m.def("workload_preset", &workload_preset, py::arg("name"),
          py::arg("input_bytes") = kDefaultInputBytes);
    m.def("workload_preset_names", &workload_preset_names);
    m.def("default_cluster", &default_cluster);
    m.def("derive_run_seed", &derive_run_seed);
    m.def("partition_weights", &partition_weights, py::arg("num_reduces"), py::arg("skew"));
    m.def("simulate_shuffle", &simulate_shuffle, py::arg("cluster"), py::arg("workload"),
          py::arg("config"), py::arg("seed"), py::arg("run_index") = 1);
    m.def("run_profile_grid", &run_profile_grid, py::arg("cluster"), py::arg("workload"),
          py::arg("map_values"), py::arg("reduce_values"), py::arg("repetitions"), py::arg("seed"));
    m.def("sample_unseen_configs",
          [](int n, int lo, int hi, const std::vector<ParameterVector>& exclude,
             std::uint64_t seed) {
              return sample_unseen_configs(n, lo, hi,
                                           std::set<ParameterVector>(exclude.begin(), exclude.end()),
                                           seed);
          },
          py::arg("n"), py::arg("lo"), py::arg("hi"), py::arg("exclude"), py::arg("seed"));
    m.def("load_cluster_spec", &load_cluster_spec);
    m.def("load_workload_profile", &load_workload_profile);

    py::class_<NetRateSample>(m, "NetRateSample")
        .def_readonly("timestamp", &NetRateSample::timestamp)
        .def_readonly("rx_rate", &NetRateSample::rx_rate)
        .def_readonly("tx_rate", &NetRateSample::tx_rate)
        .def_readonly("interface", &NetRateSample::interface);

    py::class_<ShuffleWindow>(m, "ShuffleWindow")
        .def(py::init([](double t_start, double t_end) {
                 return ShuffleWindow{t_start, t_end};
             }),
             py::arg("t_start"), py::arg("t_end"))
        .def_readwrite("t_start", &ShuffleWindow::t_start)
        .def_readwrite("t_end", &ShuffleWindow::t_end);

    m.def("parse_measurements_csv", &parse_measurements_csv);
    m.def("serialize_measurements_csv", &serialize_measurements_csv);
    m.def("parse_net_rate_log", &parse_net_rate_log, py::arg("text"), py::arg("interface"));
    m.def("integrate_window", &integrate_window, py::arg("samples"), py::arg("window"));
    m.def("aggregate_runs", &aggregate_runs);

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("cluster", &PipelineConfig::cluster)
        .def_readwrite("workload", &PipelineConfig::workload)
        .def_readwrite("grid_values", &PipelineConfig::grid_values)
        .def_readwrite("repetitions", &PipelineConfig::repetitions)
        .def_readwrite("degree", &PipelineConfig::degree)
        .def_readwrite("test_size", &PipelineConfig::test_size)
        .def_readwrite("test_lo", &PipelineConfig::test_lo)
        .def_readwrite("test_hi", &PipelineConfig::test_hi)
        .def_readwrite("seed", &PipelineConfig::seed)
        .def_readwrite("out_dir", &PipelineConfig::out_dir);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("model", &PipelineResult::model)
        .def_readonly("report", &PipelineResult::report)
        .def_readonly("test_configs", &PipelineResult::test_configs);

    m.def("run_paper_protocol", &run_paper_protocol, py::arg("config"));
}
