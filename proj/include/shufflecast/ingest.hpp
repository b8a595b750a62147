#pragma once

#include <string>
#include <vector>

#include "shufflecast/types.hpp"

namespace shufflecast {

/// One sysstat-style per-interface rate sample, rates in bytes/second.
struct NetRateSample {
    double timestamp = 0.0;
    double rx_rate = 0.0;
    double tx_rate = 0.0;
    std::string interface;
};

struct ShuffleWindow {
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Measurement CSV, header exactly:
///   app,maps,reduces,input_bytes,run,shuffle_bytes
std::vector<RunRecord> parse_measurements_csv(const std::string& text);
std::string serialize_measurements_csv(const std::vector<RunRecord>& records);

/// Whitespace-separated log lines `timestamp interface rxkB/s txkB/s`
/// ('#' starts a comment). kB is 1000 bytes. Returns samples for the requested
/// interface only, ordered by timestamp.
std::vector<NetRateSample> parse_net_rate_log(const std::string& text, const std::string& interface);

/// Trapezoidal integral of rx + tx over the window, with linear interpolation
/// at the window edges. Returns bytes.
double integrate_window(const std::vector<NetRateSample>& samples, const ShuffleWindow& window);

/// Groups runs by (maps, reduces) and averages shuffle_bytes per group;
/// observations ordered by (maps, reduces). All records must share input_bytes.
ProfileDataset aggregate_runs(const std::vector<RunRecord>& records);

}  // namespace shufflecast
