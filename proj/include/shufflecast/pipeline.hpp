#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shufflecast/metrics.hpp"
#include "shufflecast/model.hpp"
#include "shufflecast/sim.hpp"

namespace shufflecast {

/// Full profile -> fit -> predict -> evaluate protocol configuration.
struct PipelineConfig {
    ClusterSpec cluster = default_cluster();
    WorkloadProfile workload;
    std::vector<int> grid_values = {4, 8, 12, 16, 20, 24, 28, 32};
    int repetitions = 10;
    int degree = 3;
    int test_size = 30;
    int test_lo = 4;
    int test_hi = 32;
    std::uint64_t seed = 42;
    std::filesystem::path out_dir;
};

struct PipelineResult {
    PolynomialModel model;
    EvaluationReport report;
    std::vector<ParameterVector> test_configs;
};

/// Runs the end-to-end protocol: simulate the training grid (averaging
/// repetitions per configuration), fit the polynomial, sample unseen test
/// configurations off the grid, simulate their loads (averaged the same way),
/// and evaluate. Writes measurements.csv, training.csv, model.json,
/// test_measurements.csv, report.json, report.txt, and plot.csv under
/// config.out_dir. Deterministic per seed.
PipelineResult run_paper_protocol(const PipelineConfig& config);

/// Three-column plot data: index,actual,predicted.
std::string plot_data_csv(const EvaluationReport& report);

}  // namespace shufflecast
