#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "shufflecast/types.hpp"

namespace shufflecast {

/// Polynomial feature matrix: row k is
///   [1, p1^1 .. p1^d, p2^1 .. p2^d, ..., pN^1 .. pN^d]
/// so there are 1 + N*d columns and no cross terms.
struct DesignMatrix {
    Eigen::MatrixXd entries;
    int degree = 0;

    std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
};

struct FitMeta {
    std::size_t num_observations = 0;
    double residual_sum_squares = 0.0;
    double condition = 0.0;  // singular-value ratio of the raw design matrix
};

/// Fitted per-parameter polynomial: load(p) = a0 + sum_i sum_j a_ij * p_i^j.
/// Coefficients are ordered [a0, a_11..a_1d, ..., a_N1..a_Nd].
struct PolynomialModel {
    int degree = 0;
    int num_params = 0;
    std::vector<double> coefficients;
    std::vector<std::string> param_names;
    FitMeta fit_meta;
};

DesignMatrix build_design_matrix(const std::vector<ParameterVector>& configs, int degree);

struct FitOptions {
    // Center/scale columns internally before solving; coefficients are always
    // reported in the original basis.
    bool standardize = true;
};

PolynomialModel fit(const ProfileDataset& dataset, int degree, const FitOptions& options = {});

double predict(const PolynomialModel& model, const ParameterVector& config);

/// Versioned JSON document; coefficient round-trip is bit-exact.
std::string save_model(const PolynomialModel& model);
PolynomialModel load_model(const std::string& text);

std::vector<std::string> default_param_names(int num_params);

}  // namespace shufflecast
