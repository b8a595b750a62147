#pragma once

#include <span>
#include <string>
#include <vector>

#include "shufflecast/model.hpp"
#include "shufflecast/types.hpp"

namespace shufflecast {

struct Residual {
    double actual = 0.0;
    double predicted = 0.0;
    double relative_error = 0.0;  // |actual - predicted| / actual
};

struct EvaluationReport {
    double mape = 0.0;       // percent
    double pred25 = 0.0;     // fraction in [0, 1]
    double rmse = 0.0;       // load units
    double r_squared = 0.0;  // <= 1, may be negative
    std::vector<Residual> residuals;
    std::size_t num_observations = 0;
};

/// 100 * mean(|a_i - p_i| / a_i). Requires strictly positive actuals.
double mape(std::span<const double> actual, std::span<const double> predicted);

/// Fraction of observations with relative error strictly below 0.25.
double pred25(std::span<const double> actual, std::span<const double> predicted);

double rmse(std::span<const double> actual, std::span<const double> predicted);

/// 1 - SS_res / SS_tot. Not clamped: fits worse than the mean predictor go
/// negative.
double r_squared(std::span<const double> actual, std::span<const double> predicted);

EvaluationReport evaluate(const PolynomialModel& model, const ProfileDataset& test);

/// Human-readable table with the RMSD / MAPE / R^2 / PRED columns.
std::string report_table(const EvaluationReport& report, const std::string& label);

/// Machine-readable JSON record including the residual list.
std::string report_json(const EvaluationReport& report, const std::string& label);

}  // namespace shufflecast
