#include "shufflecast/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <random>

#include "shufflecast/errors.hpp"

namespace shufflecast {

namespace {

void validate_cluster(const ClusterSpec& cluster) {
    if (cluster.num_nodes < 1) throw InvalidConfig("cluster must have at least one node");
    if (cluster.cross_rack_weight < 1.0) throw InvalidConfig("cross_rack_weight must be >= 1");
    if (cluster.rack_map && static_cast<int>(cluster.rack_map->size()) != cluster.num_nodes) {
        throw InvalidConfig("rack_map must assign a rack to every node");
    }
}

void validate_workload(const WorkloadProfile& workload) {
    if (workload.input_bytes <= 0) throw InvalidConfig("input_bytes must be > 0");
    if (workload.map_output_ratio <= 0.0) throw InvalidConfig("map_output_ratio must be > 0");
    if (workload.partition_skew < 0.0) throw InvalidConfig("partition_skew must be >= 0");
    if (workload.per_pair_overhead_bytes < 0.0) {
        throw InvalidConfig("per_pair_overhead_bytes must be >= 0");
    }
    if (workload.noise_sigma < 0.0 || workload.noise_sigma >= 1.0) {
        throw InvalidConfig("noise_sigma must be in [0, 1)");
    }
}

std::pair<int, int> map_reduce_counts(const ParameterVector& config) {
    if (config.dimension() != 2) {
        throw InvalidConfig("shuffle simulation expects a (maps, reduces) configuration");
    }
    const int m = config.values[0];
    const int r = config.values[1];
    if (m < 1 || r < 1) throw InvalidConfig("map and reduce counts must be >= 1");
    return {m, r};
}

std::vector<int> place_tasks(int count, const ClusterSpec& cluster, std::mt19937_64& rng) {
    std::vector<int> nodes(static_cast<std::size_t>(count));
    if (cluster.placement == Placement::RoundRobin) {
        for (int i = 0; i < count; ++i) nodes[static_cast<std::size_t>(i)] = i % cluster.num_nodes;
    } else {
        std::uniform_int_distribution<int> dist(0, cluster.num_nodes - 1);
        for (int i = 0; i < count; ++i) nodes[static_cast<std::size_t>(i)] = dist(rng);
    }
    return nodes;
}

// Noise-free remote/local byte accounting shared by simulate_shuffle and
// shuffle_breakdown.
ShuffleBreakdown accumulate(const ClusterSpec& cluster, const WorkloadProfile& workload,
                            int m, int r, std::mt19937_64& rng) {
    const double total_intermediate =
        static_cast<double>(workload.input_bytes) * workload.map_output_ratio;
    const double per_map = total_intermediate / m;
    const std::vector<double> weights = partition_weights(r, workload.partition_skew);
    const std::vector<int> map_nodes = place_tasks(m, cluster, rng);
    const std::vector<int> reduce_nodes = place_tasks(r, cluster, rng);

    ShuffleBreakdown out;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < r; ++j) {
            const double bytes = per_map * weights[static_cast<std::size_t>(j)];
            const int mn = map_nodes[static_cast<std::size_t>(i)];
            const int rn = reduce_nodes[static_cast<std::size_t>(j)];
            if (mn == rn) {
                out.local_bytes += bytes;
                continue;
            }
            double transfer = bytes + workload.per_pair_overhead_bytes;
            if (cluster.rack_map && (*cluster.rack_map)[static_cast<std::size_t>(mn)] !=
                                        (*cluster.rack_map)[static_cast<std::size_t>(rn)]) {
                transfer *= cluster.cross_rack_weight;
            }
            out.remote_bytes += transfer;
        }
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_run_seed(std::uint64_t base_seed, int num_maps, int num_reduces,
                              int run_index) {
    std::uint64_t h = base_seed;
    h = splitmix64(h ^ static_cast<std::uint64_t>(num_maps));
    h = splitmix64(h ^ static_cast<std::uint64_t>(num_reduces));
    h = splitmix64(h ^ static_cast<std::uint64_t>(run_index));
    return h;
}

std::vector<double> partition_weights(int num_reduces, double skew) {
    if (num_reduces < 1) throw InvalidConfig("need at least one reducer");
    std::vector<double> weights(static_cast<std::size_t>(num_reduces));
    double norm = 0.0;
    for (int j = 0; j < num_reduces; ++j) {
        weights[static_cast<std::size_t>(j)] = std::pow(static_cast<double>(j + 1), -skew);
        norm += weights[static_cast<std::size_t>(j)];
    }
    for (double& w : weights) w /= norm;
    return weights;
}

RunRecord simulate_shuffle(const ClusterSpec& cluster, const WorkloadProfile& workload,
                           const ParameterVector& config, std::uint64_t seed, int run_index) {
    validate_cluster(cluster);
    validate_workload(workload);
    const auto [m, r] = map_reduce_counts(config);

    std::mt19937_64 rng(seed);
    double shuffle_bytes = accumulate(cluster, workload, m, r, rng).remote_bytes;
    if (workload.noise_sigma > 0.0) {
        std::normal_distribution<double> normal(0.0, 1.0);
        const double factor = std::max(0.0, 1.0 + workload.noise_sigma * normal(rng));
        shuffle_bytes *= factor;
    }

    RunRecord record;
    record.app = workload.name;
    record.num_maps = m;
    record.num_reduces = r;
    record.input_bytes = workload.input_bytes;
    record.run_index = run_index;
    record.shuffle_bytes = shuffle_bytes;
    return record;
}

ShuffleBreakdown shuffle_breakdown(const ClusterSpec& cluster, const WorkloadProfile& workload,
                                   const ParameterVector& config, std::uint64_t seed) {
    validate_cluster(cluster);
    validate_workload(workload);
    const auto [m, r] = map_reduce_counts(config);
    std::mt19937_64 rng(seed);
    return accumulate(cluster, workload, m, r, rng);
}

GridResult run_profile_grid(const ClusterSpec& cluster, const WorkloadProfile& workload,
                            const std::vector<int>& map_values, const std::vector<int>& reduce_values,
                            int repetitions, std::uint64_t seed) {
    if (map_values.empty() || reduce_values.empty()) {
        throw InvalidConfig("grid value lists must be non-empty");
    }
    if (repetitions < 1) throw InvalidConfig("repetitions must be >= 1");
    auto check_distinct = [](std::vector<int> vals, const char* what) {
        std::sort(vals.begin(), vals.end());
        if (std::adjacent_find(vals.begin(), vals.end()) != vals.end()) {
            throw InvalidConfig(std::string(what) + " values must be distinct");
        }
        if (vals.front() < 1) throw InvalidConfig(std::string(what) + " values must be >= 1");
        return vals;
    };
    const std::vector<int> maps = check_distinct(map_values, "map");
    const std::vector<int> reduces = check_distinct(reduce_values, "reduce");

    GridResult result;
    result.dataset.input_bytes = workload.input_bytes;
    result.dataset.meta = "simulated grid: workload=" + workload.name +
                          " nodes=" + std::to_string(cluster.num_nodes) +
                          " reps=" + std::to_string(repetitions);
    for (int m : maps) {
        for (int r : reduces) {
            double sum = 0.0;
            for (int run = 1; run <= repetitions; ++run) {
                const std::uint64_t run_seed = derive_run_seed(seed, m, r, run);
                RunRecord record =
                    simulate_shuffle(cluster, workload, ParameterVector(m, r), run_seed, run);
                sum += record.shuffle_bytes;
                result.runs.push_back(std::move(record));
            }
            result.dataset.observations.push_back(
                {ParameterVector(m, r), sum / repetitions});
        }
    }
    return result;
}

std::vector<ParameterVector> sample_unseen_configs(int n, int lo, int hi,
                                                   const std::set<ParameterVector>& exclude,
                                                   std::uint64_t seed) {
    if (n < 1) throw InvalidConfig("n must be >= 1");
    if (lo < 1 || hi < lo) throw InvalidConfig("need 1 <= lo <= hi");
    const long long side = static_cast<long long>(hi - lo + 1);
    long long excluded_in_box = 0;
    for (const auto& c : exclude) {
        if (c.dimension() == 2 && c.values[0] >= lo && c.values[0] <= hi && c.values[1] >= lo &&
            c.values[1] <= hi) {
            ++excluded_in_box;
        }
    }
    if (side * side - excluded_in_box < n) {
        throw ExhaustedSpace("only " + std::to_string(side * side - excluded_in_box) +
                             " configurations available, " + std::to_string(n) + " requested");
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(lo, hi);
    std::set<ParameterVector> chosen;
    std::vector<ParameterVector> out;
    while (static_cast<int>(out.size()) < n) {
        ParameterVector config(dist(rng), dist(rng));
        if (exclude.contains(config) || chosen.contains(config)) continue;
        chosen.insert(config);
        out.push_back(std::move(config));
    }
    return out;
}

WorkloadProfile workload_preset(const std::string& name, std::int64_t input_bytes) {
    WorkloadProfile profile;
    profile.name = name;
    profile.input_bytes = input_bytes;
    profile.noise_sigma = 0.05;
    if (name == "wordcount-like") {
        profile.map_output_ratio = 1.0;
        profile.partition_skew = 0.0;
        profile.per_pair_overhead_bytes = kDefaultPerPairOverheadBytes;
    } else if (name == "terasort-like") {
        profile.map_output_ratio = 1.0;
        profile.partition_skew = 0.0;
        profile.per_pair_overhead_bytes = 4.0 * kDefaultPerPairOverheadBytes;
    } else if (name == "exim-like") {
        profile.map_output_ratio = 0.3;
        profile.partition_skew = 0.5;
        profile.per_pair_overhead_bytes = kDefaultPerPairOverheadBytes;
    } else {
        throw InvalidConfig("unknown workload preset '" + name + "'");
    }
    return profile;
}

std::vector<std::string> workload_preset_names() {
    return {"wordcount-like", "terasort-like", "exim-like"};
}

ClusterSpec default_cluster() {
    ClusterSpec cluster;
    cluster.num_nodes = 5;
    cluster.placement = Placement::RoundRobin;
    cluster.cross_rack_weight = 1.0;
    return cluster;
}

ClusterSpec load_cluster_spec(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("cluster spec: ") + e.what());
    }
    ClusterSpec cluster = default_cluster();
    try {
        cluster.num_nodes = doc.value("num_nodes", cluster.num_nodes);
        const std::string placement = doc.value("placement", std::string("round-robin"));
        if (placement == "round-robin") {
            cluster.placement = Placement::RoundRobin;
        } else if (placement == "random") {
            cluster.placement = Placement::Random;
        } else {
            throw ParseError("cluster spec: placement must be 'round-robin' or 'random'");
        }
        if (doc.contains("rack_map")) {
            cluster.rack_map = doc.at("rack_map").get<std::vector<int>>();
        }
        cluster.cross_rack_weight = doc.value("cross_rack_weight", cluster.cross_rack_weight);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("cluster spec: ") + e.what());
    }
    validate_cluster(cluster);
    return cluster;
}

WorkloadProfile load_workload_profile(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("workload profile: ") + e.what());
    }
    WorkloadProfile profile;
    try {
        profile.name = doc.value("name", std::string("custom"));
        profile.input_bytes = doc.value("input_bytes", kDefaultInputBytes);
        profile.map_output_ratio = doc.value("map_output_ratio", 1.0);
        profile.partition_skew = doc.value("partition_skew", 0.0);
        profile.per_pair_overhead_bytes =
            doc.value("per_pair_overhead_bytes", kDefaultPerPairOverheadBytes);
        profile.noise_sigma = doc.value("noise_sigma", 0.05);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("workload profile: ") + e.what());
    }
    validate_workload(profile);
    return profile;
}

}  // namespace shufflecast
