#include "shufflecast/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "shufflecast/errors.hpp"

namespace shufflecast {

namespace {

const std::string kCsvHeader = "app,maps,reduces,input_bytes,run,shuffle_bytes";

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::int64_t parse_int(const std::string& text, std::size_t line, const std::string& column) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, "column " + column, "not an integer: '" + text + "'");
    }
    return value;
}

double parse_double(const std::string& text, std::size_t line, const std::string& column) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, "column " + column, "not a number: '" + text + "'");
    }
    return value;
}

// Shortest decimal that round-trips the exact double.
std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

}  // namespace

std::vector<RunRecord> parse_measurements_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw MissingHeader("empty measurement file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw MissingHeader("expected header '" + kCsvHeader + "', got '" + line + "'");
    }

    std::vector<RunRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 6) {
            throw ParseError(line_no, "row", "expected 6 fields, got " +
                             std::to_string(fields.size()));
        }
        RunRecord record;
        record.app = fields[0];
        record.num_maps = static_cast<int>(parse_int(fields[1], line_no, "maps"));
        record.num_reduces = static_cast<int>(parse_int(fields[2], line_no, "reduces"));
        record.input_bytes = parse_int(fields[3], line_no, "input_bytes");
        record.run_index = static_cast<int>(parse_int(fields[4], line_no, "run"));
        record.shuffle_bytes = parse_double(fields[5], line_no, "shuffle_bytes");
        if (record.num_maps < 1 || record.num_reduces < 1 || record.input_bytes < 1 ||
            record.run_index < 0) {
            throw NegativeValue("line " + std::to_string(line_no) +
                                ": counts and input_bytes must be positive");
        }
        if (record.shuffle_bytes < 0.0) {
            throw NegativeValue("line " + std::to_string(line_no) + ": shuffle_bytes is negative");
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::string serialize_measurements_csv(const std::vector<RunRecord>& records) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.app << ',' << r.num_maps << ',' << r.num_reduces << ',' << r.input_bytes << ','
            << r.run_index << ',' << format_double(r.shuffle_bytes) << '\n';
    }
    return out.str();
}

std::vector<NetRateSample> parse_net_rate_log(const std::string& text,
                                              const std::string& interface) {
    std::istringstream in(text);
    std::string line;
    std::vector<NetRateSample> samples;
    std::size_t line_no = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string ts_text, iface, rx_text, tx_text;
        if (!(fields >> ts_text)) continue;  // blank line
        if (!(fields >> iface >> rx_text >> tx_text)) {
            throw ParseError(line_no, "row", "expected 'timestamp interface rxkB/s txkB/s'");
        }
        std::string extra;
        if (fields >> extra) {
            throw ParseError(line_no, "row", "trailing field '" + extra + "'");
        }
        saw_data = true;
        if (iface != interface) continue;
        NetRateSample sample;
        sample.timestamp = parse_double(ts_text, line_no, "timestamp");
        // sysstat reports kB = 1000 bytes
        sample.rx_rate = parse_double(rx_text, line_no, "rxkB/s") * 1000.0;
        sample.tx_rate = parse_double(tx_text, line_no, "txkB/s") * 1000.0;
        sample.interface = iface;
        if (sample.rx_rate < 0.0 || sample.tx_rate < 0.0) {
            throw NegativeValue("line " + std::to_string(line_no) + ": negative rate");
        }
        if (!samples.empty() && sample.timestamp <= samples.back().timestamp) {
            throw NonMonotonicTimestamps("line " + std::to_string(line_no) +
                                         ": timestamps must be strictly increasing");
        }
        samples.push_back(std::move(sample));
    }
    if (samples.empty()) {
        if (saw_data) throw UnknownInterface("no samples for interface '" + interface + "'");
        throw ParseError("net-rate log contains no samples");
    }
    return samples;
}

double integrate_window(const std::vector<NetRateSample>& samples, const ShuffleWindow& window) {
    if (samples.size() < 2) throw TooFewSamples("need at least 2 samples to integrate");
    if (window.t_end <= window.t_start) {
        throw WindowOutOfRange("window end must be after window start");
    }
    if (window.t_start < samples.front().timestamp || window.t_end > samples.back().timestamp) {
        throw WindowOutOfRange("window [" + std::to_string(window.t_start) + ", " +
                               std::to_string(window.t_end) + "] outside sampled range");
    }

    auto total_rate = [](const NetRateSample& s) { return s.rx_rate + s.tx_rate; };
    auto rate_at = [&](std::size_t i, double t) {
        // linear interpolation between samples i and i+1
        const double t0 = samples[i].timestamp;
        const double t1 = samples[i + 1].timestamp;
        const double f = (t - t0) / (t1 - t0);
        return total_rate(samples[i]) + f * (total_rate(samples[i + 1]) - total_rate(samples[i]));
    };

    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double seg_start = std::max(samples[i].timestamp, window.t_start);
        const double seg_end = std::min(samples[i + 1].timestamp, window.t_end);
        if (seg_end <= seg_start) continue;
        const double r0 = rate_at(i, seg_start);
        const double r1 = rate_at(i, seg_end);
        integral += 0.5 * (r0 + r1) * (seg_end - seg_start);
    }
    return integral;
}

ProfileDataset aggregate_runs(const std::vector<RunRecord>& records) {
    if (records.empty()) throw EmptyInput("aggregate_runs: no records");
    const std::int64_t input_bytes = records.front().input_bytes;
    std::map<std::pair<int, int>, std::pair<double, std::size_t>> groups;  // (sum, count)
    for (const auto& r : records) {
        if (r.input_bytes != input_bytes) {
            throw MixedInputSize("records mix input sizes " + std::to_string(input_bytes) +
                                 " and " + std::to_string(r.input_bytes) +
                                 "; the model requires fixed-size input");
        }
        auto& [sum, count] = groups[{r.num_maps, r.num_reduces}];
        sum += r.shuffle_bytes;
        ++count;
    }
    ProfileDataset dataset;
    dataset.input_bytes = input_bytes;
    dataset.meta = "aggregated from " + std::to_string(records.size()) + " runs";
    for (const auto& [key, agg] : groups) {
        dataset.observations.push_back(
            {ParameterVector(key.first, key.second), agg.first / static_cast<double>(agg.second)});
    }
    return dataset;
}

}  // namespace shufflecast
