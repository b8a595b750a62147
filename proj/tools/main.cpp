#include <CLI11.hpp>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shufflecast/errors.hpp"
#include "shufflecast/ingest.hpp"
#include "shufflecast/metrics.hpp"
#include "shufflecast/model.hpp"
#include "shufflecast/pipeline.hpp"
#include "shufflecast/sim.hpp"

namespace fs = std::filesystem;
using namespace shufflecast;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// Removes any outputs a failed command managed to write, so exit code 0 is
// equivalent to "all outputs exist".
struct OutputGuard {
    std::vector<fs::path> written;
    bool committed = false;
    ~OutputGuard() {
        if (committed) return;
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    void write(const fs::path& path, const std::string& content) {
        write_file(path, content);
        written.push_back(path);
    }
};

// "4:32:4" (start:stop:step, inclusive) or a comma list "4,8,12".
std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> values;
    auto parse_one = [&](const std::string& s) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1) {
            throw InvalidConfig("bad grid value '" + s + "'");
        }
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::istringstream in(text);
        std::string part;
        std::vector<int> parts;
        while (std::getline(in, part, ':')) parts.push_back(parse_one(part));
        if (parts.size() != 3) throw InvalidConfig("grid range must be start:stop:step");
        for (int v = parts[0]; v <= parts[1]; v += parts[2]) values.push_back(v);
    } else {
        std::istringstream in(text);
        std::string part;
        while (std::getline(in, part, ',')) values.push_back(parse_one(part));
    }
    if (values.empty()) throw InvalidConfig("empty grid");
    return values;
}

WorkloadProfile resolve_workload(const std::string& spec, std::int64_t input_bytes) {
    for (const auto& name : workload_preset_names()) {
        if (spec == name) return workload_preset(name, input_bytes);
    }
    return load_workload_profile(read_file(spec));
}

ClusterSpec resolve_cluster(const std::string& path) {
    if (path.empty()) return default_cluster();
    return load_cluster_spec(read_file(path));
}

std::string human_bytes(double bytes) {
    const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
    int u = 0;
    while (bytes >= 1024.0 && u < 4) {
        bytes /= 1024.0;
        ++u;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f %s", bytes, units[u]);
    return buf;
}

struct CommonOpts {
    std::string workload = "wordcount-like";
    std::string cluster_path;
    std::string grid = "4:32:4";
    int reps = 10;
    int degree = 3;
    int test_size = 30;
    std::uint64_t seed = 42;
    std::int64_t input_bytes = kDefaultInputBytes;
};

int cmd_profile(const CommonOpts& opts, const fs::path& out_dir) {
    const WorkloadProfile workload = resolve_workload(opts.workload, opts.input_bytes);
    const ClusterSpec cluster = resolve_cluster(opts.cluster_path);
    const std::vector<int> grid = parse_grid(opts.grid);

    const GridResult result =
        run_profile_grid(cluster, workload, grid, grid, opts.reps, opts.seed);

    OutputGuard guard;
    guard.write(out_dir / "measurements.csv", serialize_measurements_csv(result.runs));
    std::vector<RunRecord> averaged;
    for (const auto& obs : result.dataset.observations) {
        averaged.push_back({workload.name, obs.config.values[0], obs.config.values[1],
                            result.dataset.input_bytes, 0, obs.load});
    }
    guard.write(out_dir / "training.csv", serialize_measurements_csv(averaged));
    guard.committed = true;

    std::cout << "profiled " << result.dataset.observations.size() << " configurations ("
              << result.runs.size() << " runs, " << opts.reps << " reps each)\n"
              << "workload: " << workload.name << ", input " << human_bytes(
                     static_cast<double>(workload.input_bytes)) << "\n"
              << "wrote " << (out_dir / "measurements.csv").string() << "\n"
              << "wrote " << (out_dir / "training.csv").string() << "\n";
    return 0;
}

int cmd_fit(const fs::path& measurements, int degree, const fs::path& out) {
    const auto records = parse_measurements_csv(read_file(measurements));
    const ProfileDataset dataset = aggregate_runs(records);
    const PolynomialModel model = fit(dataset, degree);

    OutputGuard guard;
    guard.write(out, save_model(model));
    guard.committed = true;

    std::cout << "fitted degree-" << model.degree << " model on " << dataset.observations.size()
              << " configurations\ncoefficients:";
    for (double c : model.coefficients) std::cout << ' ' << c;
    std::cout << "\nresidual sum of squares: " << model.fit_meta.residual_sum_squares
              << "\ncondition: " << model.fit_meta.condition << "\nwrote " << out.string() << "\n";
    return 0;
}

int cmd_predict(const fs::path& model_path, int maps, int reduces) {
    const PolynomialModel model = load_model(read_file(model_path));
    const double load = predict(model, ParameterVector(maps, reduces));
    std::cout << "predicted shuffle load for (" << maps << " maps, " << reduces
              << " reduces): " << load << " bytes (" << human_bytes(load) << ")\n";
    return 0;
}

int cmd_evaluate(const fs::path& model_path, const fs::path& test_path, const fs::path& out_dir) {
    const PolynomialModel model = load_model(read_file(model_path));
    const auto records = parse_measurements_csv(read_file(test_path));
    const ProfileDataset test = aggregate_runs(records);
    const EvaluationReport report = evaluate(model, test);

    OutputGuard guard;
    guard.write(out_dir / "report.json", report_json(report, "evaluation"));
    guard.write(out_dir / "report.txt", report_table(report, "evaluation"));
    guard.write(out_dir / "plot.csv", plot_data_csv(report));
    guard.committed = true;

    std::cout << report_table(report, "evaluation") << "wrote reports under " << out_dir.string()
              << "\n";
    return 0;
}

int cmd_paper_protocol(const CommonOpts& opts, const fs::path& out_dir) {
    PipelineConfig config;
    config.workload = resolve_workload(opts.workload, opts.input_bytes);
    config.cluster = resolve_cluster(opts.cluster_path);
    config.grid_values = parse_grid(opts.grid);
    config.repetitions = opts.reps;
    config.degree = opts.degree;
    config.test_size = opts.test_size;
    config.seed = opts.seed;
    config.out_dir = out_dir;

    const PipelineResult result = run_paper_protocol(config);
    std::cout << result.report.residuals.size() << " unseen configurations evaluated\n"
              << report_table(result.report, config.workload.name) << "artifacts under "
              << out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shufflecast: shuffle-phase network load modeling for MapReduce jobs"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string out;
    std::string measurements;
    std::string model_path;
    std::string test_path;
    int maps = 0;
    int reduces = 0;

    auto add_common = [&](CLI::App* cmd, bool with_fit_flags) {
        cmd->add_option("--workload", opts.workload,
                        "workload preset (wordcount-like|terasort-like|exim-like) or JSON file");
        cmd->add_option("--cluster", opts.cluster_path, "cluster spec JSON file");
        cmd->add_option("--grid", opts.grid, "grid as start:stop:step or comma list");
        cmd->add_option("--reps", opts.reps, "repetitions per configuration")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", opts.seed, "base RNG seed");
        cmd->add_option("--input-bytes", opts.input_bytes, "fixed input size in bytes")
            ->check(CLI::PositiveNumber);
        if (with_fit_flags) {
            cmd->add_option("--degree", opts.degree, "polynomial degree")
                ->check(CLI::PositiveNumber);
            cmd->add_option("--test-size", opts.test_size, "number of unseen test configurations")
                ->check(CLI::PositiveNumber);
        }
    };

    CLI::App* profile = app.add_subcommand("profile", "simulate the training grid");
    add_common(profile, false);
    profile->add_option("--out", out, "output directory")->required();

    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a polynomial model from measurements");
    fit_cmd->add_option("--measurements", measurements, "measurement CSV")->required();
    fit_cmd->add_option("--degree", opts.degree, "polynomial degree")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--out", out, "model document path")->required();

    CLI::App* predict_cmd = app.add_subcommand("predict", "predict load for one configuration");
    predict_cmd->add_option("--model", model_path, "model document")->required();
    predict_cmd->add_option("maps", maps, "number of map tasks")
        ->required()
        ->check(CLI::PositiveNumber);
    predict_cmd->add_option("reduces", reduces, "number of reduce tasks")
        ->required()
        ->check(CLI::PositiveNumber);

    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "score a model on test measurements");
    evaluate_cmd->add_option("--model", model_path, "model document")->required();
    evaluate_cmd->add_option("--test", test_path, "test measurement CSV")->required();
    evaluate_cmd->add_option("--out", out, "output directory")->required();

    CLI::App* protocol =
        app.add_subcommand("paper-protocol", "full profile -> fit -> evaluate pipeline");
    add_common(protocol, true);
    protocol->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*profile) return cmd_profile(opts, out);
        if (*fit_cmd) return cmd_fit(measurements, opts.degree, out);
        if (*predict_cmd) return cmd_predict(model_path, maps, reduces);
        if (*evaluate_cmd) return cmd_evaluate(model_path, test_path, out);
        if (*protocol) return cmd_paper_protocol(opts, out);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
