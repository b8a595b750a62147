#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shufflecast/types.hpp"

namespace shufflecast {

enum class Placement { RoundRobin, Random };

struct ClusterSpec {
    int num_nodes = 1;
    Placement placement = Placement::RoundRobin;
    std::optional<std::vector<int>> rack_map;  // node index -> rack id
    double cross_rack_weight = 1.0;
};

struct WorkloadProfile {
    std::string name;
    std::int64_t input_bytes = 0;
    double map_output_ratio = 1.0;    // intermediate bytes per input byte
    double partition_skew = 0.0;      // Zipf exponent over reducer ranks, 0 = uniform
    double per_pair_overhead_bytes = 0.0;  // charged to each remote map->reduce pair
    double noise_sigma = 0.0;         // relative stddev of multiplicative noise
};

constexpr std::int64_t kDefaultInputBytes = 12884901888;  // 12 GiB
constexpr double kDefaultPerPairOverheadBytes = 16.0 * 1024 * 1024;

/// Bundled synthetic profiles: "wordcount-like", "terasort-like", "exim-like".
/// Stand-ins for the usual benchmark applications, not calibrated to any real
/// cluster.
WorkloadProfile workload_preset(const std::string& name, std::int64_t input_bytes = kDefaultInputBytes);
std::vector<std::string> workload_preset_names();

ClusterSpec default_cluster();  // 5 nodes, round-robin, single rack

/// splitmix64-chained run seed: sm(sm(sm(seed ^ m) ^ r) ^ run_index).
/// Grids are reproducible and runs independent of execution order.
std::uint64_t derive_run_seed(std::uint64_t base_seed, int num_maps, int num_reduces, int run_index);

/// One shuffle-phase run. Places m map and r reduce tasks on nodes, splits the
/// intermediate data D = input_bytes * map_output_ratio evenly across maps and
/// Zipf-weighted across reducers, and sums bytes (plus per-pair overhead) over
/// every map/reduce pair on different nodes, cross-rack pairs weighted by
/// cross_rack_weight. The total is then scaled by max(0, 1 + sigma * g) with g
/// a standard normal draw from the seeded generator.
RunRecord simulate_shuffle(const ClusterSpec& cluster, const WorkloadProfile& workload,
                           const ParameterVector& config, std::uint64_t seed, int run_index = 1);

/// Remote/local byte split of one run with noise ignored; used for
/// conservation checks (local + remote = D when overhead is 0 and
/// cross_rack_weight is 1).
struct ShuffleBreakdown {
    double remote_bytes = 0.0;
    double local_bytes = 0.0;
};
ShuffleBreakdown shuffle_breakdown(const ClusterSpec& cluster, const WorkloadProfile& workload,
                                   const ParameterVector& config, std::uint64_t seed);

/// Zipf partition weights over reducer ranks 1..r with exponent s, normalized
/// to sum to 1.
std::vector<double> partition_weights(int num_reduces, double skew);

struct GridResult {
    ProfileDataset dataset;            // one averaged observation per (m, r)
    std::vector<RunRecord> runs;       // all raw runs, sorted by (m, r, run_index)
};

GridResult run_profile_grid(const ClusterSpec& cluster, const WorkloadProfile& workload,
                            const std::vector<int>& map_values, const std::vector<int>& reduce_values,
                            int repetitions, std::uint64_t seed);

/// n distinct configurations with both coordinates uniform in [lo, hi], none
/// in `exclude`, deterministic per seed.
std::vector<ParameterVector> sample_unseen_configs(int n, int lo, int hi,
                                                   const std::set<ParameterVector>& exclude,
                                                   std::uint64_t seed);

/// Declarative JSON config files.
ClusterSpec load_cluster_spec(const std::string& json_text);
WorkloadProfile load_workload_profile(const std::string& json_text);

}  // namespace shufflecast
