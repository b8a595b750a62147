#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace shufflecast {

/// One experiment's configuration: ordered positive-integer parameter values.
/// For MapReduce shuffle modeling this is (number of map tasks, number of
/// reduce tasks), but any N >= 1 works.
struct ParameterVector {
    std::vector<int> values;

    ParameterVector() = default;
    explicit ParameterVector(std::vector<int> v) : values(std::move(v)) {}
    ParameterVector(int maps, int reduces) : values{maps, reduces} {}

    std::size_t dimension() const { return values.size(); }

    auto operator<=>(const ParameterVector&) const = default;
};

/// A single (configuration, measured shuffle load) training point.
struct Observation {
    ParameterVector config;
    double load = 0.0;  // bytes
};

/// Averaged training data for one fixed input size. Configurations are
/// pairwise distinct; averaging of repeated runs happens upstream.
struct ProfileDataset {
    std::vector<Observation> observations;
    std::int64_t input_bytes = 0;
    std::string meta;
};

/// One raw simulation or measurement run.
struct RunRecord {
    std::string app;
    int num_maps = 0;
    int num_reduces = 0;
    std::int64_t input_bytes = 0;
    int run_index = 0;
    double shuffle_bytes = 0.0;

    auto operator<=>(const RunRecord&) const = default;
};

}  // namespace shufflecast
