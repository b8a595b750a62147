#include "shufflecast/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "shufflecast/errors.hpp"
#include "shufflecast/ingest.hpp"

namespace shufflecast {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        throw IoError("stage " + std::string(name) + ": " + e.what());
    } catch (const Error& e) {
        throw Error("stage " + std::string(name) + ": " + e.what());
    }
}

std::vector<RunRecord> averaged_records(const ProfileDataset& dataset, const std::string& app) {
    std::vector<RunRecord> out;
    for (const auto& obs : dataset.observations) {
        out.push_back({app, obs.config.values[0], obs.config.values[1], dataset.input_bytes, 0,
                       obs.load});
    }
    return out;
}

}  // namespace

std::string plot_data_csv(const EvaluationReport& report) {
    std::ostringstream out;
    out << "index,actual,predicted\n";
    for (std::size_t i = 0; i < report.residuals.size(); ++i) {
        out << i + 1 << ',' << format_double(report.residuals[i].actual) << ','
            << format_double(report.residuals[i].predicted) << '\n';
    }
    return out.str();
}

PipelineResult run_paper_protocol(const PipelineConfig& config) {
    namespace fs = std::filesystem;
    if (config.out_dir.empty()) throw IoError("output directory not set");
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create '" + config.out_dir.string() + "': " + ec.message());

    // Stage 1: profile the training grid.
    const GridResult grid = stage("profile", [&] {
        return run_profile_grid(config.cluster, config.workload, config.grid_values,
                                config.grid_values, config.repetitions, config.seed);
    });
    write_file(config.out_dir / "measurements.csv", serialize_measurements_csv(grid.runs));
    write_file(config.out_dir / "training.csv",
               serialize_measurements_csv(averaged_records(grid.dataset, config.workload.name)));

    // Stage 2: fit.
    const PolynomialModel model = stage("fit", [&] { return fit(grid.dataset, config.degree); });
    write_file(config.out_dir / "model.json", save_model(model));

    // Stage 3: unseen test configurations, off the training grid.
    const std::vector<ParameterVector> test_configs = stage("sample", [&] {
        std::set<ParameterVector> exclude;
        for (const auto& obs : grid.dataset.observations) exclude.insert(obs.config);
        const std::uint64_t sampler_seed = derive_run_seed(config.seed, 0, 0, 1);
        return sample_unseen_configs(config.test_size, config.test_lo, config.test_hi, exclude,
                                     sampler_seed);
    });

    // Stage 4: simulate test loads, averaged over the same repetition count as
    // training (run averaging absorbs the measurement noise on both sides).
    ProfileDataset test;
    test.input_bytes = config.workload.input_bytes;
    test.meta = "simulated test set: workload=" + config.workload.name;
    std::vector<RunRecord> test_runs;
    stage("simulate-test", [&] {
        for (const auto& cfg : test_configs) {
            double sum = 0.0;
            for (int run = 1; run <= config.repetitions; ++run) {
                const std::uint64_t run_seed =
                    derive_run_seed(config.seed, cfg.values[0], cfg.values[1], run);
                RunRecord record =
                    simulate_shuffle(config.cluster, config.workload, cfg, run_seed, run);
                sum += record.shuffle_bytes;
                test_runs.push_back(std::move(record));
            }
            test.observations.push_back({cfg, sum / config.repetitions});
        }
        return 0;
    });
    write_file(config.out_dir / "test_measurements.csv", serialize_measurements_csv(test_runs));

    // Stage 5: evaluate.
    const EvaluationReport report =
        stage("evaluate", [&] { return evaluate(model, test); });
    write_file(config.out_dir / "report.json", report_json(report, config.workload.name));
    write_file(config.out_dir / "report.txt", report_table(report, config.workload.name));
    write_file(config.out_dir / "plot.csv", plot_data_csv(report));

    return {model, report, test_configs};
}

}  // namespace shufflecast
