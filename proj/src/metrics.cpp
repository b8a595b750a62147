#include "shufflecast/metrics.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "shufflecast/errors.hpp"

namespace shufflecast {

namespace {

void check_lengths(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) {
        throw LengthMismatch("actual has " + std::to_string(actual.size()) +
                             " entries, predicted has " + std::to_string(predicted.size()));
    }
    if (actual.empty()) throw LengthMismatch("empty input vectors");
}

void check_positive_actuals(std::span<const double> actual) {
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) {
            throw ZeroActual("actual value at index " + std::to_string(i) +
                             " is zero; relative error undefined");
        }
    }
}

}  // namespace

double mape(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted);
    check_positive_actuals(actual);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        sum += std::abs(actual[i] - predicted[i]) / actual[i];
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

double pred25(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted);
    check_positive_actuals(actual);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        // Strict: a relative error of exactly 25% does not count.
        if (std::abs(actual[i] - predicted[i]) / actual[i] < 0.25) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(actual.size());
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - predicted[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

double r_squared(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted);
    if (actual.size() < 2) throw LengthMismatch("r_squared needs at least 2 observations");
    double mean = 0.0;
    for (double a : actual) mean += a;
    mean /= static_cast<double>(actual.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double r = actual[i] - predicted[i];
        const double t = actual[i] - mean;
        ss_res += r * r;
        ss_tot += t * t;
    }
    if (ss_tot == 0.0) {
        throw DegenerateActuals("all actual values identical; r_squared undefined");
    }
    return 1.0 - ss_res / ss_tot;
}

EvaluationReport evaluate(const PolynomialModel& model, const ProfileDataset& test) {
    if (test.observations.empty()) throw EmptyInput("evaluate: empty test dataset");
    std::vector<double> actual;
    std::vector<double> predicted;
    actual.reserve(test.observations.size());
    predicted.reserve(test.observations.size());
    for (const auto& obs : test.observations) {
        actual.push_back(obs.load);
        predicted.push_back(predict(model, obs.config));
    }
    EvaluationReport report;
    report.mape = mape(actual, predicted);
    report.pred25 = pred25(actual, predicted);
    report.rmse = rmse(actual, predicted);
    report.r_squared = r_squared(actual, predicted);
    report.num_observations = actual.size();
    report.residuals.reserve(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        report.residuals.push_back(
            {actual[i], predicted[i], std::abs(actual[i] - predicted[i]) / actual[i]});
    }
    return report;
}

std::string report_table(const EvaluationReport& report, const std::string& label) {
    std::ostringstream out;
    out << "                    RMSD          MAPE    R^2 prediction accuracy    PRED\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s%12.4g%14.2f%27.2f%8.2f\n", label.c_str(),
                  report.rmse, report.mape, report.r_squared, report.pred25);
    out << line;
    return out.str();
}

std::string report_json(const EvaluationReport& report, const std::string& label) {
    nlohmann::json doc;
    doc["label"] = label;
    doc["mape_percent"] = report.mape;
    doc["pred25"] = report.pred25;
    doc["rmse"] = report.rmse;
    doc["r_squared"] = report.r_squared;
    doc["num_observations"] = report.num_observations;
    auto residuals = nlohmann::json::array();
    for (const auto& r : report.residuals) {
        residuals.push_back({{"actual", r.actual},
                             {"predicted", r.predicted},
                             {"relative_error", r.relative_error}});
    }
    doc["residuals"] = residuals;
    return doc.dump(2) + "\n";
}

}  // namespace shufflecast
